import type { InstanceDocument, Mode } from "./types.js";

export interface EditorConfig {
  serviceBaseUrl: string;
  mode: Mode;
  language: string;
  showHeader: boolean;
  showFooter: boolean;
  showValidationRibbon: boolean;
  /** Inline template document; mutually exclusive with templateId. */
  template?: Record<string, unknown>;
  templateId?: string;
  instance?: InstanceDocument;
}

export type EditorConfigInput = Partial<EditorConfig> & { serviceBaseUrl: string };

const MODES: Mode[] = ["entry", "edit", "view"];

export function resolveConfig(input: EditorConfigInput): EditorConfig {
  if (!input.serviceBaseUrl) {
    throw new Error("serviceBaseUrl is required");
  }
  const mode = input.mode ?? "entry";
  if (!MODES.includes(mode)) {
    throw new Error(`mode must be one of ${MODES.join(", ")}`);
  }
  let template = input.template;
  let templateId = input.templateId;
  if (template && templateId) {
    // Both supplied: the inline object wins, with a logged warning.
    console.warn("metaforge-editor: both template and templateId supplied; using the inline template");
    templateId = undefined;
  }
  if (!template && !templateId) {
    throw new Error("exactly one of template / templateId is required");
  }
  if (mode === "edit" && !input.instance) {
    throw new Error("mode=edit requires an instance");
  }
  return {
    serviceBaseUrl: input.serviceBaseUrl.replace(/\/+$/, ""),
    mode,
    language: input.language ?? "en",
    showHeader: input.showHeader ?? true,
    showFooter: input.showFooter ?? true,
    showValidationRibbon: input.showValidationRibbon ?? true,
    template,
    templateId,
    instance: input.instance,
  };
}
