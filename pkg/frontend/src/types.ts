// Wire types mirroring the metaforge service responses.

export type Mode = "entry" | "edit" | "view";

export interface ValidationIssue {
  severity: "error" | "warning";
  path: string;
  code: string;
  message: string;
  expected?: string;
  actual?: string;
}

export interface WidgetOption {
  label: string;
  iri?: string;
}

export interface Widget {
  path: string;
  widgetType: string; // field type, "group", or "repeat_controls"
  label: string;
  help: string;
  required: boolean;
  editable: boolean;
  hidden: boolean;
  state: "valid" | "invalid" | "incomplete";
  currentValue: unknown;
  options?: WidgetOption[];
  authority?: "orcid" | "ror" | "comptox";
  termSources?: string[];
}

export interface RenderPlan {
  templateId: string;
  mode: Mode;
  language: string;
  widgets: Widget[];
  issues: ValidationIssue[];
  fallbacks: Array<Record<string, string>>;
}

export interface AuthoritySuggestion {
  source: string;
  id: string;
  label: string;
  detail: Record<string, string>;
}

export interface TermSuggestion {
  iri: string;
  label: string;
  synonyms: string[];
  sourceAcronym: string;
}

/** JSON-LD value object: either a typed literal or an IRI + label pair. */
export type ValueObject =
  | { "@value": string; "@type"?: string }
  | { "@id": string; "rdfs:label": string };

export type InstanceDocument = Record<string, unknown> & { "@type": string };

export interface EditorEventMap {
  "cee:ready": CustomEvent<Record<string, never>>;
  "cee:change": CustomEvent<{ instance: InstanceDocument; issues: ValidationIssue[] }>;
  "cee:validation": CustomEvent<{ issues: ValidationIssue[] }>;
  "cee:submit": CustomEvent<{ instance: InstanceDocument }>;
}
