import type {
  AuthoritySuggestion,
  InstanceDocument,
  Mode,
  RenderPlan,
  TermSuggestion,
  ValidationIssue,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public issues: ValidationIssue[] = [],
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

/**
 * Thin client for the metaforge service. The editor does no validation or
 * serialization of its own: issues and canonical instance bytes always come
 * from these endpoints.
 */
export class ServiceClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch.bind(globalThis),
  ) {}

  private async request(
    path: string,
    init?: RequestInit,
    signal?: AbortSignal,
  ): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      ...init,
      signal,
    });
    const text = await response.text();
    let body: unknown = null;
    try {
      body = text ? JSON.parse(text) : null;
    } catch {
      body = null;
    }
    if (!response.ok) {
      const envelope = (body ?? {}) as Record<string, unknown>;
      throw new ServiceError(
        response.status,
        String(envelope.code ?? "UPSTREAM_ERROR"),
        String(envelope.message ?? `HTTP ${response.status}`),
        (envelope.issues as ValidationIssue[]) ?? [],
      );
    }
    return body;
  }

  private post(path: string, payload: unknown, signal?: AbortSignal): Promise<unknown> {
    return this.request(
      path,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      },
      signal,
    );
  }

  async registerTemplate(document: Record<string, unknown>): Promise<{ id: string; fingerprint: string }> {
    return (await this.post("/v1/templates", document)) as { id: string; fingerprint: string };
  }

  async renderPlan(
    templateId: string,
    body: { instance?: InstanceDocument; mode: Mode; language: string },
  ): Promise<RenderPlan> {
    const encoded = encodeURIComponent(templateId);
    return (await this.post(`/v1/templates/${encoded}/render-plan`, body)) as RenderPlan;
  }

  async validate(
    templateId: string,
    instance: InstanceDocument,
    strict: boolean,
  ): Promise<ValidationIssue[]> {
    const encoded = encodeURIComponent(templateId);
    const suffix = strict ? "?strict=1" : "";
    const body = (await this.post(`/v1/templates/${encoded}/validate${suffix}`, instance)) as {
      issues: ValidationIssue[];
    };
    return body.issues;
  }

  async serialize(templateId: string, instance: InstanceDocument): Promise<InstanceDocument> {
    const encoded = encodeURIComponent(templateId);
    return (await this.post(`/v1/templates/${encoded}/serialize`, instance)) as InstanceDocument;
  }

  async searchAuthority(
    source: string,
    query: string,
    limit: number,
    signal?: AbortSignal,
  ): Promise<AuthoritySuggestion[]> {
    const params = new URLSearchParams({ source, q: query, limit: String(limit) });
    const body = (await this.request(`/v1/search/authority?${params}`, undefined, signal)) as {
      suggestions: AuthoritySuggestion[];
    };
    return body.suggestions;
  }

  async searchOntology(
    acronym: string,
    query: string,
    limit: number,
    signal?: AbortSignal,
  ): Promise<TermSuggestion[]> {
    const params = new URLSearchParams({ acronym, q: query, limit: String(limit) });
    const body = (await this.request(`/v1/search/ontology?${params}`, undefined, signal)) as {
      suggestions: TermSuggestion[];
    };
    return body.suggestions;
  }
}
