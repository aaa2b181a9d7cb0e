"""Deterministic render plans: the serializable description of a form.

Widgets follow depth-first template order expanded by the instance's
current repetitions. Multi-valued nodes get a repeat_controls widget ahead
of their repetitions (the +/- affordances); view mode drops those and
renders everything read-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from metaforge.errors import MetaforgeError
from metaforge.instance.engine import MetadataInstance, ValidationIssue, walk_instance
from metaforge.instance.validation import check_fingerprint, validate_instance
from metaforge.template.model import (
    FieldType,
    NodeKind,
    RENDER_ONLY_TYPES,
    Template,
    TemplateNode,
    localized_label,
)
from metaforge.values import FieldValue, is_empty, value_to_plain

MODES = ("entry", "edit", "view")


@dataclass(frozen=True)
class Widget:
    path: str
    widget_type: str  # field type value, "group", or "repeat_controls"
    label: str
    help: str
    required: bool
    editable: bool
    hidden: bool
    state: str  # valid | invalid | incomplete
    current_value: object = None
    options: tuple[dict, ...] | None = None
    authority: str | None = None
    term_sources: tuple[str, ...] | None = None  # lookup keys for autocomplete

    def to_dict(self) -> dict:
        out: dict = {
            "path": self.path,
            "widgetType": self.widget_type,
            "label": self.label,
            "help": self.help,
            "required": self.required,
            "editable": self.editable,
            "hidden": self.hidden,
            "state": self.state,
            "currentValue": self.current_value,
        }
        if self.options is not None:
            out["options"] = list(self.options)
        if self.authority is not None:
            out["authority"] = self.authority
        if self.term_sources is not None:
            out["termSources"] = list(self.term_sources)
        return out


@dataclass(frozen=True)
class RenderPlan:
    template_id: str
    mode: str
    language: str
    widgets: tuple[Widget, ...]
    issues: tuple[ValidationIssue, ...]
    fallbacks: tuple[dict, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "templateId": self.template_id,
            "mode": self.mode,
            "language": self.language,
            "widgets": [w.to_dict() for w in self.widgets],
            "issues": [x.to_dict() for x in self.issues],
            "fallbacks": list(self.fallbacks),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _slot_value(node: TemplateNode, slot: tuple[FieldValue, ...]) -> object:
    filled = [v for v in slot if not is_empty(v)]
    if not filled:
        return None
    if node.field_type is FieldType.CHECKBOX:
        return [value_to_plain(v) for v in filled]
    return value_to_plain(filled[0])


def render_plan(t: Template, i: MetadataInstance, mode: str,
                language_chain: list[str]) -> RenderPlan:
    if mode not in MODES:
        raise MetaforgeError("BAD_MODE", f"mode must be one of {', '.join(MODES)}")
    if not language_chain:
        language_chain = ["en"]
    check_fingerprint(t, i)

    issues = validate_instance(t, i, strict=False)
    severity_at: dict[str, str] = {}
    codes_at: dict[str, set[str]] = {}
    for issue in issues:
        codes_at.setdefault(issue.path, set()).add(issue.code)
        if issue.severity == "error":
            severity_at[issue.path] = "error"
        else:
            severity_at.setdefault(issue.path, "warning")

    fallbacks: list[dict] = []

    def label_of(node: TemplateNode, path: str) -> str:
        text, diagnostics = localized_label(node, language_chain)
        for diag in diagnostics:
            fallbacks.append({"path": path, **diag.to_dict()})
        return text

    def help_of(node: TemplateNode) -> str:
        helps = {tag.lower(): v for tag, v in node.help.items() if v}
        for tag in language_chain:
            if tag.lower() in helps:
                return helps[tag.lower()]
        if "en" in helps:
            return helps["en"]
        return min(helps.values()) if helps else ""

    def state_of(path: str) -> str:
        if severity_at.get(path) == "error":
            return "invalid"
        if "REQUIRED_MISSING" in codes_at.get(path, ()):
            return "incomplete"
        return "valid"

    widgets: list[Widget] = []
    view = mode == "view"
    for step in walk_instance(t, i):
        node = step.node
        if step.kind == "repeat":
            if view:
                continue
            widgets.append(Widget(
                path=step.path, widget_type="repeat_controls",
                label=label_of(node, step.path), help=help_of(node),
                required=bool(node.required), editable=True, hidden=node.hidden,
                state=state_of(step.path)))
        elif step.kind == "group":
            widgets.append(Widget(
                path=step.path, widget_type="group",
                label=label_of(node, step.path), help=help_of(node),
                required=False, editable=not view, hidden=node.hidden,
                state=state_of(step.path)))
        else:
            ft = node.field_type
            assert ft is not None
            editable = not view and ft not in RENDER_ONLY_TYPES
            options = None
            if ft in (FieldType.LIST, FieldType.CHECKBOX) and node.constraints:
                options = tuple(
                    {"label": o.label, "iri": o.iri} if o.iri else {"label": o.label}
                    for o in node.constraints.literals)
            authority = node.constraints.authority \
                if ft is FieldType.EXTERNAL_AUTHORITY and node.constraints else None
            term_sources = None
            if ft is FieldType.CONTROLLED_TERM and node.constraints:
                term_sources = tuple(
                    s.value_set_id if s.value_set_id else s.acronym
                    for s in node.constraints.sources)
            widgets.append(Widget(
                path=step.path, widget_type=ft.value,
                label=label_of(node, step.path), help=help_of(node),
                required=node.required, editable=editable, hidden=node.hidden,
                state=state_of(step.path),
                current_value=_slot_value(node, i.values.get(step.path, ())),
                options=options, authority=authority, term_sources=term_sources))

    return RenderPlan(
        template_id=t.id,
        mode=mode,
        language=language_chain[0],
        widgets=tuple(widgets),
        issues=tuple(issues),
        fallbacks=tuple(fallbacks),
    )
