"""Template sanity checks and node resolution.

`validate_template` returns findings instead of raising: valid templates get
an empty list, and every broken invariant maps to exactly one issue code.
"""

from __future__ import annotations

import re

from metaforge import paths
from metaforge.errors import MetaforgeError
from metaforge.iri import is_absolute_iri
from metaforge.lexical import grammar_problem
from metaforge.template.model import (
    KEY_RE,
    SEMVER_RE,
    FieldType,
    NodeKind,
    RENDER_ONLY_TYPES,
    SourceType,
    Template,
    TemplateIssue,
    TemplateNode,
)
from metaforge.values import Literal


def resolve_node(t: Template, path: str) -> TemplateNode:
    """Look up a node by slash-joined keys (no repetition indices)."""
    if not path:
        raise MetaforgeError("UNKNOWN_PATH", "empty path", path=path)
    current = t.children
    node = None
    for segment in path.split("/"):
        if not KEY_RE.match(segment):
            raise MetaforgeError("UNKNOWN_PATH", f"bad path segment {segment!r}", path=path)
        node = next((n for n in current if n.key == segment), None)
        if node is None:
            raise MetaforgeError("UNKNOWN_PATH", f"no node at {path!r}", path=path)
        current = node.children
    return node


def validate_template(t: Template) -> list[TemplateIssue]:
    issues: list[TemplateIssue] = []

    def err(path: str, code: str, message: str):
        issues.append(TemplateIssue("error", path, code, message))

    def warn(path: str, code: str, message: str):
        issues.append(TemplateIssue("warning", path, code, message))

    if not is_absolute_iri(t.id):
        err("", "BAD_IRI", f"template id {t.id!r} is not an absolute IRI")
    if not SEMVER_RE.match(t.version):
        warn("", "SCHEMA_VIOLATION", f"version {t.version!r} is not a semver string")
    for key, iri in t.property_context.items():
        if not is_absolute_iri(iri):
            err("", "BAD_IRI", f"propertyContext[{key!r}] is not an absolute IRI")

    def check_children(nodes: tuple[TemplateNode, ...], prefix: str):
        seen: set[str] = set()
        for node in nodes:
            path = f"{prefix}/{node.key}" if prefix else node.key
            if node.key in seen:
                err(path, "DUPLICATE_KEY", f"sibling key {node.key!r} appears twice")
            seen.add(node.key)
            check_node(node, path)

    def check_node(node: TemplateNode, path: str):
        if not KEY_RE.match(node.key):
            err(path, "SCHEMA_VIOLATION", f"key {node.key!r} must match [a-z][a-z0-9_]*")
        c = node.cardinality
        if c.min < 0 or (c.max is not None and c.max < 1):
            err(path, "BAD_CARDINALITY", "min must be >= 0 and max >= 1")
        elif c.max is not None and c.min > c.max:
            err(path, "BAD_CARDINALITY", f"min {c.min} exceeds max {c.max}")
        if not node.hidden and not any(v for v in node.label.values()):
            warn(path, "SCHEMA_VIOLATION", "visible node has no label; key will be shown")
        if any(not v for v in node.label.values()):
            err(path, "SCHEMA_VIOLATION", "label map values must be non-empty")

        if node.kind is NodeKind.FIELD:
            check_field(node, path)
        else:
            if node.field_type is not None or node.constraints is not None:
                err(path, "SCHEMA_VIOLATION", "elements cannot carry fieldType or constraints")
            check_children(node.children, path)

    def check_field(node: TemplateNode, path: str):
        if node.children:
            err(path, "SCHEMA_VIOLATION", "fields cannot have children")
        ft = node.field_type
        if ft is None:
            err(path, "SCHEMA_VIOLATION", "field is missing a fieldType")
            return
        if node.required and node.hidden:
            warn(path, "SCHEMA_VIOLATION", "hidden field is required; authors cannot see it")
        if node.required and ft in RENDER_ONLY_TYPES:
            err(path, "SCHEMA_VIOLATION", f"{ft.value} fields are render-only and never required")
        cs = node.constraints
        if cs is None:
            return
        if ft is FieldType.TEXT:
            if cs.regex is not None:
                try:
                    re.compile(cs.regex)
                except re.error as exc:
                    err(path, "BAD_REGEX", f"regex does not compile: {exc}")
            if cs.min_length is not None and cs.max_length is not None \
                    and cs.min_length > cs.max_length:
                err(path, "SCHEMA_VIOLATION", "minLength exceeds maxLength")
        elif ft is FieldType.NUMBER:
            if cs.min_value is not None and cs.max_value is not None \
                    and cs.min_value > cs.max_value:
                err(path, "SCHEMA_VIOLATION", "minValue exceeds maxValue")
        elif ft in (FieldType.CHECKBOX, FieldType.LIST):
            if not cs.literals:
                err(path, "EMPTY_LITERALS", f"{ft.value} field has no literals")
            labels = [opt.label for opt in cs.literals]
            if len(labels) != len(set(labels)):
                err(path, "SCHEMA_VIOLATION", "literal labels must be unique within a field")
            for opt in cs.literals:
                if opt.iri is not None and not is_absolute_iri(opt.iri):
                    err(path, "BAD_IRI", f"literal {opt.label!r} has a malformed IRI")
        elif ft is FieldType.CONTROLLED_TERM:
            if not cs.sources:
                err(path, "EMPTY_TERM_SOURCES", "controlled_term field has no term sources")
            for s in cs.sources:
                if s.source_type is SourceType.BRANCH:
                    if not s.root_iri:
                        err(path, "SCHEMA_VIOLATION", "branch source requires rootIri")
                    elif not is_absolute_iri(s.root_iri):
                        err(path, "BAD_IRI", "branch rootIri is not an absolute IRI")
                if s.source_type is SourceType.VALUE_SET and not s.value_set_id:
                    err(path, "SCHEMA_VIOLATION", "value_set source requires valueSetId")
        elif ft is FieldType.EXTERNAL_AUTHORITY:
            if cs.authority not in ("orcid", "ror", "comptox"):
                err(path, "SCHEMA_VIOLATION", "external_authority requires exactly one authority")
        if isinstance(node.default, Literal):
            problem = grammar_problem(ft, cs, node.default.value)
            if problem:
                err(path, "SCHEMA_VIOLATION", f"default value: {problem}")

    check_children(t.children, "")
    issues.sort(key=lambda i: (paths.sort_key(i.path) if i.path else ((), ), i.code, i.message))
    return issues
