// End-to-end acceptance: the editor drives the real (offline) metaforge
// service; the submitted payload must validate strictly via the primary CLI.
// Run with: npm run test:e2e   (spawns `python3 -m metaforge.cli serve`)

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import "../src/index.js";
import { mount, type MetaforgeEditor } from "../src/editor.js";
import { criticalViolations } from "../src/a11y.js";

const here = dirname(fileURLToPath(import.meta.url));
const TEMPLATE_PATH = join(here, "fixtures", "rnaseq_submission_template.json");
const TEMPLATE = JSON.parse(readFileSync(TEMPLATE_PATH, "utf-8"));

let server: ChildProcess;
let baseUrl = "";
let workDir = "";

function waitForLine(child: ChildProcess, pattern: RegExp): Promise<string> {
  return new Promise((resolve, reject) => {
    let buffer = "";
    const timer = setTimeout(() => reject(new Error("server did not start")), 20000);
    child.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = pattern.exec(buffer);
      if (match) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
    child.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
  });
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "metaforge-e2e-"));
  server = spawn("python3", ["-m", "metaforge.cli", "serve", "--port", "0",
    "--data-dir", workDir, "--offline"], {
    stdio: ["ignore", "pipe", "inherit"],
  });
  const port = await waitForLine(server, /listening on http:\/\/127\.0\.0\.1:(\d+)/);
  baseUrl = `http://127.0.0.1:${port}`;
  // wait until healthz answers
  const deadline = Date.now() + 15000;
  for (;;) {
    try {
      const response = await fetch(`${baseUrl}/v1/healthz`);
      if (response.ok) break;
    } catch {
      if (Date.now() > deadline) throw new Error("healthz never came up");
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
});

afterAll(() => {
  server?.kill();
});

function keyboardType(input: HTMLInputElement, text: string): void {
  input.focus();
  for (const char of text) {
    input.dispatchEvent(new KeyboardEvent("keydown", { key: char, bubbles: true }));
  }
  input.value = text;
  input.dispatchEvent(new Event("input", { bubbles: true }));
  for (const char of text) {
    input.dispatchEvent(new KeyboardEvent("keyup", { key: char, bubbles: true }));
  }
}

async function waitUntil(probe: () => boolean, ms = 5000): Promise<void> {
  const deadline = Date.now() + ms;
  while (!probe()) {
    if (Date.now() > deadline) throw new Error("condition never became true");
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
}

describe("editor against the live offline service", () => {
  it("keyboard-only completion submits metadata the primary CLI accepts", async () => {
    const host = document.createElement("div");
    document.body.appendChild(host);
    const { element, whenReady } = mount(host, {
      serviceBaseUrl: baseUrl,
      template: TEMPLATE,
    }, fetch.bind(globalThis));
    await whenReady;
    const editor = element as MetaforgeEditor;
    await editor.whenIdle();

    // the full form is keyboard reachable: nothing relevant is focus-trapped
    const controls = [...editor.querySelectorAll<HTMLElement>(
      ".cee-field input, .cee-field select")];
    expect(controls.length).toBe(7);
    for (const control of controls) {
      expect((control as HTMLInputElement).disabled).toBe(false);
      expect(control.tabIndex).toBeGreaterThanOrEqual(0);
      control.focus();
      expect(document.activeElement).toBe(control);
    }

    // accessibility audit before interaction
    expect(criticalViolations(editor)).toEqual([]);

    keyboardType(editor.querySelector('.cee-field[data-path="parent_sample_id"] input')!,
      "HBM296.DXLM.434");
    keyboardType(editor.querySelector('.cee-field[data-path="lab_id"] input')!,
      "3432_ftR_RNA_A2");
    keyboardType(editor.querySelector('.cee-field[data-path="preparation_protocol_doi"] input')!,
      "https://dx.doi.org/10.17504/protocols.io.4r3l224p3l1y/v1");
    // dataset_type already carries its template default "RNAseq"
    const datasetInput = editor.querySelector<HTMLInputElement>(
      '.cee-field[data-path="dataset_type"] input')!;
    expect(datasetInput.value).toBe("RNAseq");

    const analyte = editor.querySelector<HTMLSelectElement>(
      '.cee-field[data-path="analyte_class"] select')!;
    analyte.focus();
    analyte.value = "DNA";  // keyboard value change on a native select
    analyte.dispatchEvent(new Event("change", { bubbles: true }));

    // ROR autocomplete: type, await the debounced dropdown, pick via keyboard
    const institution = editor.querySelector<HTMLInputElement>(
      '.cee-field[data-path="institution"] input')!;
    expect(institution.getAttribute("role")).toBe("combobox");
    keyboardType(institution, "stanford");
    await waitUntil(() => editor.querySelectorAll(
      '.cee-field[data-path="institution"] [role="option"]').length === 5, 8000);
    for (let k = 0; k < 4; k += 1) {
      institution.dispatchEvent(new KeyboardEvent("keydown", { key: "ArrowDown", bubbles: true }));
    }
    institution.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    expect(institution.value).toBe("Stanford University");

    await editor.whenIdle();
    await waitUntil(() => {
      const submit = editor.querySelector<HTMLButtonElement>(".cee-submit");
      return submit !== null && !submit.disabled;
    }, 8000);

    const submitted: Array<Record<string, unknown>> = [];
    editor.addEventListener("cee:submit", (event) =>
      submitted.push((event as CustomEvent).detail.instance));
    const submitButton = editor.querySelector<HTMLButtonElement>(".cee-submit")!;
    submitButton.focus();
    submitButton.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    const payload = await editor.submit();
    expect(payload).not.toBeNull();
    expect(submitted.length).toBeGreaterThanOrEqual(1);

    const instance = submitted[submitted.length - 1];
    expect(instance.institution).toEqual({
      "@id": "https://ror.org/00f54p054",
      "rdfs:label": "Stanford University",
    });
    expect(instance["@context"]).toBeDefined();

    // the emitted payload validates strictly with zero issues via the CLI
    const instancePath = join(workDir, "submission.jsonld");
    writeFileSync(instancePath, JSON.stringify(instance, null, 2));
    const cli = spawnSync("python3", ["-m", "metaforge.cli", "validate-instance",
      "--template", TEMPLATE_PATH, "--instance", instancePath, "--strict"],
      { encoding: "utf-8" });
    expect(cli.stderr).toBe("");
    expect(cli.stdout).toBe("");
    expect(cli.status).toBe(0);

    // audit again with the filled form and open/closed dropdown residue
    expect(criticalViolations(editor)).toEqual([]);
  }, 60000);

  it("round-trips a stored instance through the demo store", async () => {
    const registered = await fetch(`${baseUrl}/v1/templates`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(TEMPLATE),
    });
    expect([200, 201]).toContain(registered.status);

    const host = document.createElement("div");
    document.body.appendChild(host);
    const { element, whenReady } = mount(host, {
      serviceBaseUrl: baseUrl,
      templateId: TEMPLATE.id,
    }, fetch.bind(globalThis));
    await whenReady;
    const editor = element as MetaforgeEditor;
    await editor.whenIdle();
    // a render plan fetched by templateId shows the same first widget
    expect(editor.querySelector<HTMLElement>(".cee-field")?.dataset.path)
      .toBe("parent_sample_id");
  }, 60000);
});
