import { describe, expect, it } from "vitest";

import { auditAccessibility, criticalViolations } from "../src/a11y.js";

function build(html: string): HTMLElement {
  const root = document.createElement("div");
  root.innerHTML = html;
  document.body.appendChild(root);
  return root;
}

describe("auditAccessibility", () => {
  it("flags unlabeled controls as critical", () => {
    const root = build(`<input type="text">`);
    const critical = criticalViolations(root);
    expect(critical.map((f) => f.rule)).toEqual(["control-name"]);
  });

  it("accepts label[for], aria-label, and wrapping labels", () => {
    const root = build(`
      <label for="a">Alpha</label><input id="a" type="text">
      <input type="text" aria-label="Beta">
      <label>Gamma <input type="checkbox"></label>
    `);
    expect(criticalViolations(root)).toEqual([]);
  });

  it("flags invalid ARIA roles", () => {
    const root = build(`<div role="sparkle"></div>`);
    expect(criticalViolations(root).map((f) => f.rule)).toEqual(["aria-valid-role"]);
  });

  it("flags images without alt and empty buttons", () => {
    const root = build(`<img src="x.png"><button></button>`);
    const rules = criticalViolations(root).map((f) => f.rule).sort();
    expect(rules).toEqual(["button-name", "img-alt"]);
  });

  it("requires aria-expanded on comboboxes", () => {
    const root = build(`<input role="combobox" aria-label="Q">`);
    expect(criticalViolations(root).map((f) => f.rule)).toEqual(["combobox-expanded"]);
  });

  it("listbox children must be options", () => {
    const root = build(`<ul role="listbox"><li>loose</li></ul>`);
    expect(criticalViolations(root).map((f) => f.rule)).toEqual(["listbox-children"]);
  });

  it("warnings are not critical", () => {
    const root = build(`<input aria-label="Q" aria-invalid="true">`);
    expect(criticalViolations(root)).toEqual([]);
    const all = auditAccessibility(root);
    expect(all.some((f) => f.severity === "warning")).toBe(true);
  });
});
