import { ServiceClient, ServiceError } from "./api.js";
import { resolveConfig, type EditorConfig, type EditorConfigInput } from "./config.js";
import { WorkingDocument } from "./doc.js";
import type {
  InstanceDocument,
  RenderPlan,
  ValidationIssue,
  ValueObject,
  Widget,
} from "./types.js";
import {
  buildFieldWidget,
  buildGroup,
  buildRepeatControls,
  type WidgetContext,
} from "./widgets.js";

const AUTOCOMPLETE_DEBOUNCE_MS = 250;
const MAX_SUGGESTIONS = 10;

function parentContainerKey(path: string): string {
  if (path.endsWith("]")) {
    return path.slice(0, path.lastIndexOf("["));
  }
  const slash = path.lastIndexOf("/");
  return slash === -1 ? "" : path.slice(0, slash);
}

/**
 * `<metaforge-editor>`: renders the service's render plans into a live form.
 * The element computes nothing itself: plans, validation issues, and the
 * emitted JSON-LD all come from the backing service. Renders into light DOM
 * with `cee-*` scoped class names so host styles apply.
 */
export class MetaforgeEditor extends HTMLElement {
  static observedAttributes = ["language", "mode"];

  #config: EditorConfig | null = null;
  #client: ServiceClient | null = null;
  #doc: WorkingDocument | null = null;
  #templateId = "";
  #plan: RenderPlan | null = null;
  #issues: ValidationIssue[] = [];
  #queue: Promise<void> = Promise.resolve();
  #started = false;
  #instanceSent = false;
  #fetchImpl: typeof fetch | null = null;
  #slotted: { header: Element[]; footer: Element[] } = { header: [], footer: [] };

  formEl: HTMLFormElement | null = null;
  ribbonEl: HTMLElement | null = null;
  submitButton: HTMLButtonElement | null = null;

  /** Test hook: inject a fetch implementation before setting config. */
  set fetchImplementation(impl: typeof fetch) {
    this.#fetchImpl = impl;
  }

  set config(input: EditorConfigInput) {
    this.#config = resolveConfig(input);
    if (this.isConnected) void this.#start();
  }

  get mode(): string {
    return this.#config?.mode ?? "entry";
  }

  get issues(): ValidationIssue[] {
    return [...this.#issues];
  }

  connectedCallback(): void {
    if (!this.#config && this.getAttribute("service-base-url")) {
      this.config = {
        serviceBaseUrl: this.getAttribute("service-base-url") ?? "",
        templateId: this.getAttribute("template-id") ?? undefined,
        mode: (this.getAttribute("mode") as EditorConfig["mode"]) ?? undefined,
        language: this.getAttribute("language") ?? undefined,
        showHeader: this.getAttribute("show-header") !== "false",
        showFooter: this.getAttribute("show-footer") !== "false",
        showValidationRibbon: this.getAttribute("show-validation-ribbon") !== "false",
      };
      return;
    }
    if (this.#config) void this.#start();
  }

  attributeChangedCallback(name: string, _old: string | null, value: string | null): void {
    if (!this.#started || !this.#config || value === null) return;
    if (name === "language") void this.setLanguage(value);
    if (name === "mode") {
      this.#config = { ...this.#config, mode: value as EditorConfig["mode"] };
      this.#enqueue(() => this.#refreshPlan());
    }
  }

  /** Re-render labels in another language; entered values are preserved. */
  async setLanguage(language: string): Promise<void> {
    if (!this.#config) return;
    this.#config = { ...this.#config, language };
    await this.#enqueue(() => this.#refreshPlan());
  }

  whenIdle(): Promise<void> {
    return this.#queue.then(() => undefined);
  }

  #enqueue(step: () => Promise<void>): Promise<void> {
    this.#queue = this.#queue.then(step, step);
    return this.#queue;
  }

  async #start(): Promise<void> {
    if (this.#started || !this.#config) return;
    this.#started = true;
    // light-DOM slot hooks: host content marked slot=header/footer survives renders
    this.#slotted.header = [...this.querySelectorAll('[slot="header"]')];
    this.#slotted.footer = [...this.querySelectorAll('[slot="footer"]')];
    await this.#enqueue(async () => {
      const config = this.#config!;
      this.#client = new ServiceClient(
        config.serviceBaseUrl,
        this.#fetchImpl ?? fetch.bind(globalThis),
      );
      try {
        if (config.template) {
          const registered = await this.#client.registerTemplate(config.template);
          this.#templateId = registered.id;
        } else {
          this.#templateId = config.templateId!;
        }
        this.#doc = new WorkingDocument(this.#templateId);
        if (config.instance) {
          this.#seedFromInstance(config.instance);
        }
        await this.#refreshPlan();
        await this.#revalidate(false);
        this.#emit("cee:ready", {});
      } catch (error) {
        this.#renderError(error);
      }
    });
  }

  /** Adopt an existing JSON-LD document as the working state (edit mode). */
  #seedFromInstance(instance: InstanceDocument): void {
    const doc = this.#doc!;
    const walk = (node: Record<string, unknown>, base: string) => {
      for (const [key, raw] of Object.entries(node)) {
        if (key.startsWith("@")) continue;
        const path = base ? `${base}/${key}` : key;
        if (Array.isArray(raw)) {
          if (raw.every((entry) => typeof entry === "object" && entry !== null &&
              !("@value" in (entry as object)) && !("@id" in (entry as object)))) {
            doc.registerRepeat(path, "element", raw.length);
            raw.forEach((entry, index) =>
              walk(entry as Record<string, unknown>, `${path}[${index}]`));
          } else if (raw.every((entry) => typeof entry === "object" && entry !== null)) {
            // ambiguous: a checkbox selection list or a multi-valued field
            doc.setValue(path, raw as ValueObject[]);
          }
        } else if (typeof raw === "object" && raw !== null) {
          const record = raw as Record<string, unknown>;
          if ("@value" in record || "@id" in record) {
            doc.setValue(path, record as ValueObject);
          } else {
            walk(record, path);
          }
        }
      }
    };
    walk(instance, "");
  }

  async #refreshPlan(): Promise<void> {
    const config = this.#config!;
    const body: { instance?: InstanceDocument; mode: EditorConfig["mode"]; language: string } = {
      mode: config.mode,
      language: config.language,
    };
    if (this.#instanceSent || config.instance) {
      body.instance = this.#doc!.toDocument();
    }
    this.#instanceSent = true;
    this.#plan = await this.#client!.renderPlan(this.#templateId, body);
    this.#seedFromPlan(this.#plan);
    this.#renderAll();
  }

  /** Adopt widget values the service materialized (e.g. template defaults)
   * into paths the user has not touched yet. */
  #seedFromPlan(plan: RenderPlan): void {
    const doc = this.#doc!;
    for (const widget of plan.widgets) {
      if (widget.widgetType === "group" || widget.widgetType === "repeat_controls") continue;
      if (widget.currentValue == null || doc.getValue(widget.path) !== undefined) continue;
      const toValueObject = (plain: Record<string, unknown>): ValueObject | null => {
        if (plain.kind === "literal") return { "@value": String(plain.value ?? "") };
        if (plain.kind === "term") {
          return { "@id": String(plain.iri), "rdfs:label": String(plain.label ?? "") };
        }
        if (plain.kind === "authority") {
          return { "@id": String(plain.id), "rdfs:label": String(plain.label ?? "") };
        }
        return null;
      };
      if (Array.isArray(widget.currentValue)) {
        const values = widget.currentValue
          .map((entry) => toValueObject(entry as Record<string, unknown>))
          .filter((entry): entry is ValueObject => entry !== null);
        if (values.length) doc.setValue(widget.path, values);
      } else {
        const value = toValueObject(widget.currentValue as Record<string, unknown>);
        if (value) doc.setValue(widget.path, value);
      }
    }
  }

  #widgetContext(): WidgetContext {
    return {
      client: this.#client!,
      readOnly: this.#config!.mode === "view",
      autocompleteDebounceMs: AUTOCOMPLETE_DEBOUNCE_MS,
      maxSuggestions: MAX_SUGGESTIONS,
      valueAt: (path) => this.#doc!.getValue(path),
      onValue: (path, value) => {
        this.#doc!.setValue(path, value);
        void this.#enqueue(() => this.#revalidate(true));
      },
      onAddRepetition: (base) => {
        this.#doc!.addRepetition(base);
        void this.#enqueue(async () => {
          await this.#refreshPlan();
          await this.#revalidate(true);
        });
      },
      onRemoveRepetition: (base, index) => {
        const doc = this.#doc!;
        if (doc.repeatCount(base) <= 1) {
          // keep one visible row; clearing beats removing the last one
          doc.removeRepetition(base, index);
          doc.addRepetition(base);
        } else {
          doc.removeRepetition(base, index);
        }
        void this.#enqueue(async () => {
          await this.#refreshPlan();
          await this.#revalidate(true);
        });
      },
    };
  }

  #renderAll(): void {
    const config = this.#config!;
    const plan = this.#plan!;
    this.textContent = "";

    if (config.showHeader) {
      const header = document.createElement("header");
      header.className = "cee-header";
      if (this.#slotted.header.length) {
        for (const slotted of this.#slotted.header) header.appendChild(slotted);
      } else {
        const title = document.createElement("h2");
        title.className = "cee-title";
        title.textContent = this.#templateId;
        header.appendChild(title);
      }
      this.appendChild(header);
    }

    const form = document.createElement("form");
    form.className = "cee-form";
    form.addEventListener("submit", (event) => event.preventDefault());
    this.formEl = form;

    const containers = new Map<string, HTMLElement>();
    const ctx = this.#widgetContext();
    const parentOf = (path: string): HTMLElement => {
      let key = parentContainerKey(path);
      while (key) {
        const hit = containers.get(key);
        if (hit) return hit;
        key = parentContainerKey(key);
      }
      return form;
    };

    const fieldRowPrototypes = new Map<string, Widget>();
    for (const widget of plan.widgets) {
      if (widget.widgetType === "repeat_controls") {
        const kind = plan.widgets.some(
          (w) => w.widgetType === "group" && w.path.startsWith(`${widget.path}[`))
          ? "element" : "field";
        const serverCount = this.#countReps(plan.widgets, widget.path);
        this.#doc!.registerRepeat(widget.path, kind, serverCount);
        const count = this.#doc!.repeatCount(widget.path);
        const section = buildRepeatControls(widget, count, ctx);
        parentOf(widget.path).appendChild(section);
        containers.set(widget.path, section);
      } else if (widget.widgetType === "group") {
        const section = buildGroup(widget);
        parentOf(widget.path).appendChild(section);
        containers.set(widget.path, section);
      } else {
        parentOf(widget.path).appendChild(buildFieldWidget(widget, ctx));
        if (widget.path.endsWith("]")) {
          fieldRowPrototypes.set(
            widget.path.slice(0, widget.path.lastIndexOf("[")), widget);
        }
      }
    }

    // rows the user added locally that hold no value yet: the service cannot
    // see them (empty field repetitions have no JSON-LD form), so clone the
    // last server row with the next index
    for (const [base, prototype] of fieldRowPrototypes) {
      const section = containers.get(base);
      if (!section) continue;
      const serverCount = this.#countReps(plan.widgets, base);
      const localCount = this.#doc!.repeatCount(base);
      for (let index = serverCount; index < localCount; index += 1) {
        const clone: Widget = {
          ...prototype,
          path: `${base}[${index}]`,
          currentValue: null,
          state: "incomplete",
        };
        section.appendChild(buildFieldWidget(clone, ctx));
      }
    }
    this.appendChild(form);

    if (config.showValidationRibbon && config.mode !== "view") {
      const ribbon = document.createElement("section");
      ribbon.className = "cee-ribbon";
      ribbon.setAttribute("role", "region");
      ribbon.setAttribute("aria-label", "validation summary");
      ribbon.setAttribute("aria-live", "polite");
      this.ribbonEl = ribbon;
      this.appendChild(ribbon);
      this.#renderRibbon();
    } else {
      this.ribbonEl = null;
    }

    if (config.showFooter) {
      const footer = document.createElement("footer");
      footer.className = "cee-footer";
      for (const slotted of this.#slotted.footer) footer.appendChild(slotted);
      if (config.mode !== "view") {
        const submit = document.createElement("button");
        submit.type = "button";
        submit.className = "cee-submit";
        submit.textContent = "Submit metadata";
        submit.addEventListener("click", () => void this.submit());
        this.submitButton = submit;
        footer.appendChild(submit);
      }
      this.appendChild(footer);
    }
    this.#applyIssueDecorations();
  }

  #countReps(widgets: Widget[], base: string): number {
    let count = 0;
    const prefix = `${base}[`;
    for (const widget of widgets) {
      if (!widget.path.startsWith(prefix)) continue;
      const rest = widget.path.slice(prefix.length);
      const closing = rest.indexOf("]");
      if (rest.slice(closing + 1) === "") count += 1;
    }
    return count;
  }

  async #revalidate(emitChange: boolean): Promise<void> {
    if (!this.#client || !this.#doc) return;
    const outbound = this.#doc.toDocument();
    const [issues, serialized] = await Promise.all([
      this.#client.validate(this.#templateId, outbound, true),
      this.#client.serialize(this.#templateId, outbound),
    ]);
    this.#issues = issues;
    this.#renderRibbon();
    this.#applyIssueDecorations();
    this.#emit("cee:validation", { issues });
    if (emitChange) {
      this.#emit("cee:change", { instance: serialized, issues });
    }
  }

  #renderRibbon(): void {
    const ribbon = this.ribbonEl;
    if (!ribbon) return;
    ribbon.textContent = "";
    const issues = this.#issues;
    const toggle = document.createElement("button");
    toggle.type = "button";
    toggle.className = "cee-ribbon-toggle";
    toggle.setAttribute("aria-expanded", "true");
    toggle.textContent = issues.length
      ? `${issues.length} outstanding issue${issues.length === 1 ? "" : "s"}`
      : "No outstanding issues";
    const list = document.createElement("ul");
    list.className = "cee-ribbon-list";
    toggle.addEventListener("click", () => {
      const collapsed = list.hidden;
      list.hidden = !collapsed;
      toggle.setAttribute("aria-expanded", String(collapsed));
    });
    ribbon.appendChild(toggle);
    for (const issue of issues) {
      const item = document.createElement("li");
      item.className = `cee-ribbon-item cee-severity-${issue.severity}`;
      const jump = document.createElement("button");
      jump.type = "button";
      jump.className = "cee-ribbon-jump";
      jump.dataset.path = issue.path;
      jump.textContent = `${issue.path || "(record)"}: ${issue.message}`;
      jump.addEventListener("click", () => this.#focusField(issue.path));
      item.appendChild(jump);
      list.appendChild(item);
    }
    ribbon.appendChild(list);
    this.#updateSubmitGate();
  }

  #updateSubmitGate(): void {
    if (!this.submitButton) return;
    const blocking = this.#issues.filter((x) => x.severity === "error");
    this.submitButton.disabled = blocking.length > 0;
    this.submitButton.title = blocking.length
      ? `resolve ${blocking.length} validation error${blocking.length === 1 ? "" : "s"} first`
      : "";
  }

  #applyIssueDecorations(): void {
    if (!this.formEl) return;
    const bySeverity = new Map<string, ValidationIssue>();
    for (const issue of this.#issues) {
      const existing = bySeverity.get(issue.path);
      if (!existing || (existing.severity !== "error" && issue.severity === "error")) {
        bySeverity.set(issue.path, issue);
      }
    }
    for (const field of this.formEl.querySelectorAll<HTMLElement>(".cee-field")) {
      const path = field.dataset.path ?? "";
      const issue = bySeverity.get(path);
      const control = field.querySelector<HTMLElement>("input, select, textarea");
      const message = field.querySelector<HTMLElement>(".cee-field-message");
      field.classList.remove("cee-state-invalid", "cee-state-incomplete", "cee-state-valid");
      if (issue && issue.severity === "error") {
        field.classList.add(issue.code === "REQUIRED_MISSING"
          ? "cee-state-incomplete" : "cee-state-invalid");
        control?.setAttribute("aria-invalid", "true");
        if (message) {
          message.textContent = issue.message;
          control?.setAttribute("aria-describedby",
            `${control.id}-help ${message.id}`.trim());
        }
      } else {
        field.classList.add("cee-state-valid");
        control?.removeAttribute("aria-invalid");
        if (message) message.textContent = "";
      }
    }
  }

  #focusField(path: string): void {
    const field = this.formEl?.querySelector<HTMLElement>(
      `.cee-field[data-path="${path}"]`);
    const control = field?.querySelector<HTMLElement>("input, select, textarea");
    control?.focus();
  }

  /** Strict server validation, then emit the server-serialized JSON-LD. */
  async submit(): Promise<InstanceDocument | null> {
    let result: InstanceDocument | null = null;
    await this.#enqueue(async () => {
      const outbound = this.#doc!.toDocument();
      const issues = await this.#client!.validate(this.#templateId, outbound, true);
      this.#issues = issues;
      this.#renderRibbon();
      this.#applyIssueDecorations();
      if (issues.some((x) => x.severity === "error")) {
        this.#emit("cee:validation", { issues });
        return;
      }
      const serialized = await this.#client!.serialize(this.#templateId, outbound);
      result = serialized;
      this.#emit("cee:submit", { instance: serialized });
    });
    return result;
  }

  #renderError(error: unknown): void {
    this.textContent = "";
    const panel = document.createElement("div");
    panel.className = "cee-error";
    panel.setAttribute("role", "alert");
    const message = error instanceof ServiceError
      ? `${error.code}: ${error.message}`
      : String((error as Error)?.message ?? error);
    panel.textContent = `The metadata editor could not start: ${message}`;
    this.appendChild(panel);
  }

  #emit(name: string, detail: unknown): void {
    this.dispatchEvent(new CustomEvent(name, { detail, bubbles: true, composed: true }));
  }
}

export interface EditorHandle {
  element: MetaforgeEditor;
  whenReady: Promise<void>;
}

/** Imperative mount helper for hosts that prefer not to write markup. */
export function mount(host: Element, config: EditorConfigInput,
                      fetchImpl?: typeof fetch): EditorHandle {
  const element = document.createElement("metaforge-editor") as MetaforgeEditor;
  const whenReady = new Promise<void>((resolve) => {
    element.addEventListener("cee:ready", () => resolve(), { once: true });
  });
  if (fetchImpl) element.fetchImplementation = fetchImpl;
  host.appendChild(element);
  element.config = config;
  return { element, whenReady };
}
