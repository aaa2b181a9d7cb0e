import { describe, expect, it, vi } from "vitest";

import { resolveConfig } from "../src/config.js";

const BASE = { serviceBaseUrl: "http://localhost:8000" };

describe("resolveConfig", () => {
  it("requires exactly one of template / templateId", () => {
    expect(() => resolveConfig({ ...BASE })).toThrow(/exactly one/);
    const ok = resolveConfig({ ...BASE, templateId: "https://ex.org/t" });
    expect(ok.templateId).toBe("https://ex.org/t");
  });

  it("prefers the inline template when both are supplied, with a warning", () => {
    const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
    const config = resolveConfig({
      ...BASE,
      template: { id: "https://ex.org/t" },
      templateId: "https://ex.org/other",
    });
    expect(config.template).toEqual({ id: "https://ex.org/t" });
    expect(config.templateId).toBeUndefined();
    expect(warn).toHaveBeenCalledOnce();
    warn.mockRestore();
  });

  it("edit mode requires an instance", () => {
    expect(() => resolveConfig({
      ...BASE, templateId: "https://ex.org/t", mode: "edit",
    })).toThrow(/instance/);
    const ok = resolveConfig({
      ...BASE, templateId: "https://ex.org/t", mode: "edit",
      instance: { "@type": "https://ex.org/t" },
    });
    expect(ok.mode).toBe("edit");
  });

  it("rejects unknown modes and missing base url", () => {
    expect(() => resolveConfig({
      ...BASE, templateId: "x", mode: "banana" as never,
    })).toThrow(/mode/);
    expect(() => resolveConfig({ serviceBaseUrl: "", templateId: "x" })).toThrow(/serviceBaseUrl/);
  });

  it("applies the documented defaults and trims the base url", () => {
    const config = resolveConfig({
      serviceBaseUrl: "http://h:1/",
      templateId: "https://ex.org/t",
    });
    expect(config.mode).toBe("entry");
    expect(config.language).toBe("en");
    expect(config.showHeader).toBe(true);
    expect(config.showFooter).toBe(true);
    expect(config.showValidationRibbon).toBe(true);
    expect(config.serviceBaseUrl).toBe("http://h:1");
  });
});
