// Lightweight accessibility audit for rendered forms. Critical findings are
// the ones the acceptance bar treats as failures; warnings are advisory.

export interface AuditFinding {
  severity: "critical" | "warning";
  rule: string;
  message: string;
  element: string;
}

const VALID_ROLES = new Set([
  "alert", "alertdialog", "application", "article", "banner", "button",
  "cell", "checkbox", "columnheader", "combobox", "complementary",
  "contentinfo", "definition", "dialog", "directory", "document", "feed",
  "figure", "form", "grid", "gridcell", "group", "heading", "img", "link",
  "list", "listbox", "listitem", "log", "main", "marquee", "math", "menu",
  "menubar", "menuitem", "menuitemcheckbox", "menuitemradio", "navigation",
  "none", "note", "option", "presentation", "progressbar", "radio",
  "radiogroup", "region", "row", "rowgroup", "rowheader", "scrollbar",
  "search", "searchbox", "separator", "slider", "spinbutton", "status",
  "switch", "tab", "table", "tablist", "tabpanel", "term", "textbox",
  "timer", "toolbar", "tooltip", "tree", "treegrid", "treeitem",
]);

function describe(element: Element): string {
  const id = element.id ? `#${element.id}` : "";
  const cls = element.className ? `.${String(element.className).split(" ")[0]}` : "";
  return `${element.tagName.toLowerCase()}${id}${cls}`;
}

function hasAccessibleName(element: Element): boolean {
  if (element.getAttribute("aria-label")) return true;
  const labelledBy = element.getAttribute("aria-labelledby");
  if (labelledBy) {
    const doc = element.ownerDocument;
    return labelledBy.split(/\s+/).every((ref) => doc.getElementById(ref) !== null);
  }
  if (element.id) {
    const label = element.ownerDocument.querySelector(`label[for="${element.id}"]`);
    if (label && label.textContent?.trim()) return true;
  }
  const wrapping = element.closest("label");
  if (wrapping && wrapping.textContent?.trim()) return true;
  if (element.tagName === "BUTTON" && element.textContent?.trim()) return true;
  if (element.getAttribute("title")) return true;
  return false;
}

export function auditAccessibility(root: Element): AuditFinding[] {
  const findings: AuditFinding[] = [];
  const critical = (rule: string, message: string, element: Element) =>
    findings.push({ severity: "critical", rule, message, element: describe(element) });
  const warn = (rule: string, message: string, element: Element) =>
    findings.push({ severity: "warning", rule, message, element: describe(element) });

  for (const element of root.querySelectorAll("[role]")) {
    const role = element.getAttribute("role") ?? "";
    if (!VALID_ROLES.has(role)) {
      critical("aria-valid-role", `invalid ARIA role: ${role}`, element);
    }
  }

  for (const element of root.querySelectorAll("input, select, textarea")) {
    if ((element as HTMLElement).hidden || element.getAttribute("type") === "hidden") continue;
    if (!hasAccessibleName(element)) {
      critical("control-name", "form control has no accessible name", element);
    }
  }

  for (const element of root.querySelectorAll("button")) {
    if (!hasAccessibleName(element)) {
      critical("button-name", "button has no accessible name", element);
    }
  }

  for (const element of root.querySelectorAll("img")) {
    if (element.getAttribute("alt") === null) {
      critical("img-alt", "image has no alt text", element);
    }
  }

  for (const element of root.querySelectorAll('[role="combobox"]')) {
    if (!element.hasAttribute("aria-expanded")) {
      critical("combobox-expanded", "combobox is missing aria-expanded", element);
    }
    if (!element.hasAttribute("aria-controls")) {
      warn("combobox-controls", "combobox should reference its listbox", element);
    }
  }

  for (const element of root.querySelectorAll('[role="listbox"]')) {
    for (const child of element.children) {
      if (child.getAttribute("role") !== "option") {
        critical("listbox-children", "listbox children must be options", child);
      }
    }
  }

  for (const element of root.querySelectorAll("[aria-invalid='true']")) {
    if (!element.getAttribute("aria-describedby")) {
      warn("invalid-described", "invalid field should reference its message", element);
    }
  }

  return findings;
}

export function criticalViolations(root: Element): AuditFinding[] {
  return auditAccessibility(root).filter((f) => f.severity === "critical");
}
