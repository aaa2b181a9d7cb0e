import { MetaforgeEditor, mount } from "./editor.js";

export { MetaforgeEditor, mount };
export type { EditorHandle } from "./editor.js";
export { resolveConfig } from "./config.js";
export type { EditorConfig, EditorConfigInput } from "./config.js";
export { ServiceClient, ServiceError } from "./api.js";
export { WorkingDocument, parsePath } from "./doc.js";
export { debounce } from "./debounce.js";
export { auditAccessibility, criticalViolations } from "./a11y.js";
export type * from "./types.js";

export function defineEditorElements(): void {
  if (!customElements.get("metaforge-editor")) {
    customElements.define("metaforge-editor", MetaforgeEditor);
  }
  // compatibility alias so hosts written against the upstream tag keep working
  if (!customElements.get("cedar-embeddable-editor")) {
    customElements.define("cedar-embeddable-editor",
      class extends MetaforgeEditor {});
  }
}

defineEditorElements();
