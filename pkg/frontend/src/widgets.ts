import { debounce } from "./debounce.js";
import { ServiceClient, ServiceError } from "./api.js";
import type { ValueObject, Widget } from "./types.js";

export interface WidgetContext {
  client: ServiceClient;
  readOnly: boolean;
  autocompleteDebounceMs: number;
  maxSuggestions: number;
  valueAt(path: string): ValueObject | ValueObject[] | undefined;
  onValue(path: string, value: ValueObject | ValueObject[] | null): void;
  onAddRepetition(base: string): void;
  onRemoveRepetition(base: string, index: number): void;
}

let idCounter = 0;
function nextId(prefix: string): string {
  idCounter += 1;
  return `${prefix}-${idCounter}`;
}

function currentText(widget: Widget): string {
  const value = widget.currentValue as Record<string, unknown> | null;
  if (!value) return "";
  if (value.kind === "literal") return String(value.value ?? "");
  if (value.kind === "term" || value.kind === "authority") return String(value.label ?? "");
  return "";
}

function fieldShell(widget: Widget, controlId: string): {
  wrapper: HTMLElement;
  labelEl: HTMLLabelElement;
  message: HTMLElement;
} {
  const doc = document;
  const wrapper = doc.createElement("div");
  wrapper.className = `cee-field cee-field-${widget.widgetType} cee-state-${widget.state}`;
  wrapper.dataset.path = widget.path;
  if (widget.hidden) {
    wrapper.classList.add("cee-hidden");
    (wrapper as HTMLElement).style.display = "none";
    wrapper.setAttribute("aria-hidden", "true");
  }
  const labelEl = doc.createElement("label");
  labelEl.className = "cee-label";
  labelEl.htmlFor = controlId;
  labelEl.textContent = widget.required ? `${widget.label} *` : widget.label;
  wrapper.appendChild(labelEl);
  if (widget.help) {
    const help = doc.createElement("p");
    help.className = "cee-help";
    help.id = `${controlId}-help`;
    help.textContent = widget.help;
    wrapper.appendChild(help);
  }
  const message = doc.createElement("p");
  message.className = "cee-field-message";
  message.id = `${controlId}-message`;
  message.setAttribute("role", "status");
  wrapper.appendChild(message);
  return { wrapper, labelEl, message };
}

function applyControlAria(control: HTMLElement, widget: Widget, controlId: string): void {
  control.id = controlId;
  if (widget.required) control.setAttribute("aria-required", "true");
  if (widget.help) control.setAttribute("aria-describedby", `${controlId}-help`);
}

function textInput(widget: Widget, ctx: WidgetContext): HTMLElement {
  const controlId = nextId("cee-control");
  const { wrapper, message } = fieldShell(widget, controlId);
  const input = document.createElement("input");
  input.type = "text";
  input.className = "cee-input";
  applyControlAria(input, widget, controlId);
  input.value = currentText(widget);
  input.disabled = ctx.readOnly || !widget.editable;
  input.addEventListener("input", () => {
    ctx.onValue(widget.path, input.value === "" ? null : { "@value": input.value });
  });
  wrapper.insertBefore(input, message);
  return wrapper;
}

function booleanSelect(widget: Widget, ctx: WidgetContext): HTMLElement {
  const controlId = nextId("cee-control");
  const { wrapper, message } = fieldShell(widget, controlId);
  const select = document.createElement("select");
  select.className = "cee-input";
  applyControlAria(select, widget, controlId);
  for (const [value, text] of [["", "—"], ["true", "true"], ["false", "false"]]) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = text;
    select.appendChild(option);
  }
  select.value = currentText(widget);
  select.disabled = ctx.readOnly || !widget.editable;
  select.addEventListener("change", () => {
    ctx.onValue(widget.path, select.value === "" ? null : { "@value": select.value });
  });
  wrapper.insertBefore(select, message);
  return wrapper;
}

function listSelect(widget: Widget, ctx: WidgetContext): HTMLElement {
  const controlId = nextId("cee-control");
  const { wrapper, message } = fieldShell(widget, controlId);
  const select = document.createElement("select");
  select.className = "cee-input";
  applyControlAria(select, widget, controlId);
  const blank = document.createElement("option");
  blank.value = "";
  blank.textContent = "—";
  select.appendChild(blank);
  for (const option of widget.options ?? []) {
    const el = document.createElement("option");
    el.value = option.label;
    el.textContent = option.label;
    select.appendChild(el);
  }
  select.value = currentText(widget);
  select.disabled = ctx.readOnly || !widget.editable;
  select.addEventListener("change", () => {
    ctx.onValue(widget.path, select.value === "" ? null : { "@value": select.value });
  });
  wrapper.insertBefore(select, message);
  return wrapper;
}

function checkboxGroup(widget: Widget, ctx: WidgetContext): HTMLElement {
  const controlId = nextId("cee-control");
  const { wrapper, labelEl, message } = fieldShell(widget, controlId);
  labelEl.id = `${controlId}-legend`;
  const group = document.createElement("div");
  group.className = "cee-checkbox-group";
  group.setAttribute("role", "group");
  group.setAttribute("aria-labelledby", labelEl.id);
  group.id = controlId;
  const selected = new Set<string>();
  const existing = widget.currentValue as Array<Record<string, unknown>> | null;
  for (const entry of existing ?? []) {
    if (entry && entry.kind === "literal") selected.add(String(entry.value));
  }
  for (const option of widget.options ?? []) {
    const itemId = nextId("cee-check");
    const item = document.createElement("label");
    item.className = "cee-checkbox";
    item.htmlFor = itemId;
    const box = document.createElement("input");
    box.type = "checkbox";
    box.id = itemId;
    box.value = option.label;
    box.checked = selected.has(option.label);
    box.disabled = ctx.readOnly || !widget.editable;
    box.addEventListener("change", () => {
      if (box.checked) selected.add(option.label);
      else selected.delete(option.label);
      const values: ValueObject[] = (widget.options ?? [])
        .filter((o) => selected.has(o.label))
        .map((o) => ({ "@value": o.label }));
      ctx.onValue(widget.path, values.length ? values : null);
    });
    item.appendChild(box);
    item.appendChild(document.createTextNode(` ${option.label}`));
    group.appendChild(item);
  }
  wrapper.insertBefore(group, message);
  return wrapper;
}

function mediaWidget(widget: Widget): HTMLElement {
  const controlId = nextId("cee-control");
  const { wrapper, message } = fieldShell(widget, controlId);
  const iri = currentText(widget);
  if (widget.widgetType === "image") {
    const img = document.createElement("img");
    img.className = "cee-media";
    img.alt = widget.label;
    if (iri) img.src = iri;
    img.id = controlId;
    wrapper.insertBefore(img, message);
  } else {
    const video = document.createElement("video");
    video.className = "cee-media";
    video.setAttribute("controls", "");
    video.setAttribute("aria-label", widget.label);
    if (iri) video.src = iri;
    video.id = controlId;
    wrapper.insertBefore(video, message);
  }
  return wrapper;
}

/** Combobox with a debounced suggestion dropdown (terms and authorities). */
function autocompleteWidget(widget: Widget, ctx: WidgetContext): HTMLElement {
  const controlId = nextId("cee-control");
  const { wrapper, message } = fieldShell(widget, controlId);
  const input = document.createElement("input");
  input.type = "text";
  input.className = "cee-input cee-autocomplete";
  applyControlAria(input, widget, controlId);
  input.setAttribute("role", "combobox");
  input.setAttribute("aria-expanded", "false");
  input.setAttribute("aria-autocomplete", "list");
  const listId = `${controlId}-listbox`;
  input.setAttribute("aria-controls", listId);
  input.value = currentText(widget);
  input.disabled = ctx.readOnly || !widget.editable;

  const current = ctx.valueAt(widget.path) as Record<string, unknown> | undefined;
  if (input.value && (!current || !("@id" in (current ?? {})))) {
    wrapper.classList.add("cee-unresolved");
  }

  const listbox = document.createElement("ul");
  listbox.className = "cee-suggestions";
  listbox.id = listId;
  listbox.setAttribute("role", "listbox");
  listbox.hidden = true;

  const notice = document.createElement("p");
  notice.className = "cee-source-notice";
  notice.setAttribute("role", "status");
  notice.hidden = true;

  let activeIndex = -1;
  let suggestions: Array<{ id: string; label: string }> = [];
  let controller: AbortController | null = null;

  const close = () => {
    listbox.hidden = true;
    input.setAttribute("aria-expanded", "false");
    input.removeAttribute("aria-activedescendant");
    activeIndex = -1;
  };

  const renderOptions = () => {
    listbox.textContent = "";
    suggestions.forEach((suggestion, index) => {
      const option = document.createElement("li");
      option.setAttribute("role", "option");
      option.id = `${listId}-opt-${index}`;
      option.className = "cee-suggestion";
      option.setAttribute("aria-selected", String(index === activeIndex));
      option.textContent = `${suggestion.label} — ${suggestion.id}`;
      option.addEventListener("mousedown", (event) => {
        event.preventDefault();
        choose(index);
      });
      listbox.appendChild(option);
    });
    listbox.hidden = suggestions.length === 0;
    input.setAttribute("aria-expanded", String(suggestions.length > 0));
  };

  const choose = (index: number) => {
    const suggestion = suggestions[index];
    if (!suggestion) return;
    input.value = suggestion.label;
    wrapper.classList.remove("cee-unresolved");
    ctx.onValue(widget.path, { "@id": suggestion.id, "rdfs:label": suggestion.label });
    close();
  };

  const search = async (query: string) => {
    controller?.abort();
    controller = new AbortController();
    notice.hidden = true;
    try {
      if (widget.widgetType === "external_authority" && widget.authority) {
        const results = await ctx.client.searchAuthority(
          widget.authority, query, ctx.maxSuggestions, controller.signal);
        suggestions = results.map((s) => ({ id: s.id, label: s.label }));
      } else {
        const acronyms = widget.termSources ?? [];
        const merged: Array<{ id: string; label: string }> = [];
        for (const acronym of acronyms) {
          const results = await ctx.client.searchOntology(
            acronym, query, ctx.maxSuggestions, controller.signal);
          for (const term of results) merged.push({ id: term.iri, label: term.label });
        }
        suggestions = merged.slice(0, ctx.maxSuggestions);
      }
      activeIndex = suggestions.length ? 0 : -1;
      renderOptions();
      if (activeIndex >= 0) {
        input.setAttribute("aria-activedescendant", `${listId}-opt-${activeIndex}`);
      }
    } catch (error) {
      if ((error as Error).name === "AbortError") return;
      if (error instanceof ServiceError && error.status >= 500) {
        notice.textContent = "source unavailable";
        notice.hidden = false;
        close();
        return;
      }
      if (error instanceof ServiceError) {
        close();
        return; // empty query and such: just keep the dropdown shut
      }
      throw error;
    }
  };

  const debouncedSearch = debounce((query: string) => {
    void search(query);
  }, ctx.autocompleteDebounceMs);

  input.addEventListener("input", () => {
    const text = input.value;
    // free text is retained but stays flagged unresolved until a pick
    ctx.onValue(widget.path, text === "" ? null : { "@value": text });
    wrapper.classList.toggle("cee-unresolved", text !== "");
    if (text.trim() === "") {
      debouncedSearch.cancel();
      close();
      return;
    }
    debouncedSearch(text);
  });

  input.addEventListener("keydown", (event) => {
    const key = (event as KeyboardEvent).key;
    if (key === "Escape") {
      close();
      event.preventDefault();
    } else if (key === "ArrowDown" && !listbox.hidden) {
      activeIndex = Math.min(activeIndex + 1, suggestions.length - 1);
      renderOptions();
      input.setAttribute("aria-activedescendant", `${listId}-opt-${activeIndex}`);
      event.preventDefault();
    } else if (key === "ArrowUp" && !listbox.hidden) {
      activeIndex = Math.max(activeIndex - 1, 0);
      renderOptions();
      input.setAttribute("aria-activedescendant", `${listId}-opt-${activeIndex}`);
      event.preventDefault();
    } else if (key === "Enter") {
      if (!listbox.hidden && activeIndex >= 0) {
        choose(activeIndex);
        event.preventDefault();
      } else if (input.value.trim()) {
        debouncedSearch.cancel();
        void search(input.value);
        event.preventDefault();
      }
    }
  });

  wrapper.insertBefore(input, message);
  wrapper.insertBefore(listbox, message);
  wrapper.insertBefore(notice, message);
  return wrapper;
}

export function buildFieldWidget(widget: Widget, ctx: WidgetContext): HTMLElement {
  switch (widget.widgetType) {
    case "checkbox":
      return checkboxGroup(widget, ctx);
    case "list":
      return listSelect(widget, ctx);
    case "boolean":
      return booleanSelect(widget, ctx);
    case "image":
    case "video":
      return mediaWidget(widget);
    case "controlled_term":
    case "external_authority":
      return autocompleteWidget(widget, ctx);
    default:
      return textInput(widget, ctx);
  }
}

export function buildGroup(widget: Widget): HTMLElement {
  const section = document.createElement("section");
  section.className = "cee-group";
  section.dataset.path = widget.path;
  section.setAttribute("role", "group");
  section.setAttribute("aria-label", widget.label);
  const heading = document.createElement("h3");
  heading.className = "cee-group-title";
  heading.textContent = widget.label;
  section.appendChild(heading);
  return section;
}

export function buildRepeatControls(
  widget: Widget,
  count: number,
  ctx: WidgetContext,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "cee-repeat";
  section.dataset.path = widget.path;
  const bar = document.createElement("div");
  bar.className = "cee-repeat-bar";
  const title = document.createElement("span");
  title.className = "cee-repeat-title";
  title.textContent = `${widget.label} (${count})`;
  bar.appendChild(title);

  const addButton = document.createElement("button");
  addButton.type = "button";
  addButton.className = "cee-repeat-add";
  addButton.textContent = "+";
  addButton.setAttribute("aria-label", `add ${widget.label}`);
  addButton.addEventListener("click", () => ctx.onAddRepetition(widget.path));
  bar.appendChild(addButton);

  const removeButton = document.createElement("button");
  removeButton.type = "button";
  removeButton.className = "cee-repeat-remove";
  removeButton.textContent = "−";
  removeButton.setAttribute("aria-label", `remove last ${widget.label}`);
  removeButton.disabled = count <= 1;
  removeButton.addEventListener("click", () => ctx.onRemoveRepetition(widget.path, count - 1));
  bar.appendChild(removeButton);

  section.appendChild(bar);
  return section;
}
