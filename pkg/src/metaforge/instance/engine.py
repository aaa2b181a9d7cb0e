"""Incremental construction of metadata instances.

An instance is value-semantic: every operation returns a new instance and
leaves its input observably unchanged. Values live in a flat map from value
path to an ordered slot of field values; one slot holds exactly one value,
except checkbox fields whose slot is the current selection set. Multi-valued
nodes are expanded into indexed paths (`authors[0]/name`); repetition counts
for elements are tracked alongside because empty element repetitions leave
no trace in the value map.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Iterator

from metaforge import paths
from metaforge.errors import MetaforgeError
from metaforge.lexical import grammar_problem
from metaforge.template.model import (
    FieldType,
    NodeKind,
    RENDER_ONLY_TYPES,
    Template,
    TemplateNode,
)
from metaforge.template.parser import literal_datatype, template_fingerprint
from metaforge.values import (
    EMPTY,
    Authority,
    EmptyValue,
    FieldValue,
    Literal,
    Term,
    is_empty,
)

Slot = tuple[FieldValue, ...]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # error | warning
    path: str
    code: str
    message: str
    expected: str | None = None
    actual: str | None = None

    def to_dict(self) -> dict:
        out = {"severity": self.severity, "path": self.path,
               "code": self.code, "message": self.message}
        if self.expected is not None:
            out["expected"] = self.expected
        if self.actual is not None:
            out["actual"] = self.actual
        return out


@dataclass(frozen=True)
class MetadataInstance:
    template_id: str
    template_fingerprint: str
    values: dict[str, Slot]
    element_counts: dict[str, int]
    created_at: str = field(compare=False, default="")
    updated_at: str = field(compare=False, default="")
    parse_warnings: tuple[ValidationIssue, ...] = field(compare=False, default=())

    def slot(self, path: str) -> Slot:
        return self.values.get(path, (EMPTY,))

    def slot_is_empty(self, path: str) -> bool:
        slot = self.values.get(path, (EMPTY,))
        return all(is_empty(v) for v in slot) if slot else True


def _empty_slot(node: TemplateNode) -> Slot:
    if node.field_type is FieldType.CHECKBOX:
        return ()
    return (EMPTY,)


def _default_slot(node: TemplateNode) -> Slot:
    if node.default is not None:
        return (node.default,)
    return _empty_slot(node)


def _materialize(node: TemplateNode, base: str, values: dict[str, Slot],
                 counts: dict[str, int], *, with_defaults: bool) -> None:
    make = _default_slot if with_defaults else _empty_slot
    if node.cardinality.is_multi:
        n = max(node.cardinality.min, 1)
        if node.kind is NodeKind.ELEMENT:
            counts[base] = n
        for i in range(n):
            rep = f"{base}[{i}]"
            if node.kind is NodeKind.FIELD:
                values[rep] = make(node)
            else:
                for child in node.children:
                    _materialize(child, f"{rep}/{child.key}", values, counts,
                                 with_defaults=with_defaults)
    else:
        if node.kind is NodeKind.FIELD:
            values[base] = make(node)
        else:
            for child in node.children:
                _materialize(child, f"{base}/{child.key}", values, counts,
                             with_defaults=with_defaults)


def new_instance(t: Template, *, with_defaults: bool = True) -> MetadataInstance:
    """Fresh instance: defaults applied, every multi-valued node materialized
    with max(min, 1) empty repetitions, everything else Empty."""
    values: dict[str, Slot] = {}
    counts: dict[str, int] = {}
    for child in t.children:
        _materialize(child, child.key, values, counts, with_defaults=with_defaults)
    now = _now()
    return MetadataInstance(
        template_id=t.id,
        template_fingerprint=template_fingerprint(t),
        values=values,
        element_counts=counts,
        created_at=now,
        updated_at=now,
    )


def field_repetition_count(i: MetadataInstance, base: str) -> int:
    """Number of materialized repetitions of a multi-valued field at `base`."""
    n = 0
    while f"{base}[{n}]" in i.values:
        n += 1
    return n


def repetition_count(i: MetadataInstance, node: TemplateNode, base: str) -> int:
    if node.kind is NodeKind.ELEMENT:
        return i.element_counts.get(base, 0)
    return field_repetition_count(i, base)


def _resolve_field_path(t: Template, i: MetadataInstance, path: str) -> TemplateNode:
    """Resolve a value path to its field node, checking indices against the
    instance's current repetition counts."""
    segments = paths.parse_value_path(path)
    nodes = t.children
    node: TemplateNode | None = None
    base = ""
    for key, idx in segments:
        node = next((n for n in nodes if n.key == key), None)
        if node is None:
            raise MetaforgeError("UNKNOWN_PATH", f"no node at {path!r}", path=path)
        base = f"{base}/{key}" if base else key
        if node.cardinality.is_multi:
            if idx is None:
                raise MetaforgeError("UNKNOWN_PATH",
                                     f"multi-valued node {key!r} needs an index", path=path)
            if idx >= repetition_count(i, node, base):
                raise MetaforgeError("UNKNOWN_PATH",
                                     f"repetition {idx} not materialized at {base!r}", path=path)
            base = f"{base}[{idx}]"
        elif idx is not None:
            raise MetaforgeError("UNKNOWN_PATH",
                                 f"single-valued node {key!r} takes no index", path=path)
        nodes = node.children
    assert node is not None
    return node


def _coerce(node: TemplateNode, value: FieldValue, path: str) -> FieldValue:
    ft = node.field_type
    assert ft is not None
    if isinstance(value, EmptyValue):
        return value
    if isinstance(value, Literal):
        problem = grammar_problem(ft, node.constraints, value.value)
        if problem:
            raise MetaforgeError("TYPE_MISMATCH", f"{path}: {problem}", path=path)
        if ft in (FieldType.CONTROLLED_TERM, FieldType.EXTERNAL_AUTHORITY):
            # Free text is retained on semantic fields; it stays flagged as
            # unresolved until replaced by a term or authority value.
            return Literal(value.value, "xsd:string")
        return Literal(value.value, literal_datatype(ft, node.constraints))
    if isinstance(value, Term):
        if ft is not FieldType.CONTROLLED_TERM:
            raise MetaforgeError("TYPE_MISMATCH",
                                 f"{path}: term values only fit controlled_term fields",
                                 path=path)
        return value
    if isinstance(value, Authority):
        if ft is not FieldType.EXTERNAL_AUTHORITY:
            raise MetaforgeError("TYPE_MISMATCH",
                                 f"{path}: authority values only fit external_authority fields",
                                 path=path)
        expected = node.constraints.authority if node.constraints else None
        if expected and value.source != expected:
            raise MetaforgeError("TYPE_MISMATCH",
                                 f"{path}: field expects {expected} identifiers, got {value.source}",
                                 path=path)
        return value
    raise MetaforgeError("TYPE_MISMATCH", f"{path}: unsupported value", path=path)


def set_value(t: Template, i: MetadataInstance, path: str,
              value: FieldValue | list[FieldValue] | tuple[FieldValue, ...]) -> MetadataInstance:
    """Store a value (checkbox fields accept a selection list). Pure update."""
    node = _resolve_field_path(t, i, path)
    if node.kind is not NodeKind.FIELD:
        raise MetaforgeError("UNKNOWN_PATH", f"{path!r} is an element, not a field", path=path)
    if node.field_type in RENDER_ONLY_TYPES:
        raise MetaforgeError("READ_ONLY_FIELD",
                             f"{path}: {node.field_type.value} fields are render-only", path=path)

    incoming = list(value) if isinstance(value, (list, tuple)) else [value]
    if node.field_type is FieldType.CHECKBOX:
        slot = tuple(_coerce(node, v, path) for v in incoming if not is_empty(v))
    else:
        if len(incoming) > 1:
            raise MetaforgeError("TYPE_MISMATCH",
                                 f"{path}: only checkbox fields take multiple values", path=path)
        slot = (_coerce(node, incoming[0] if incoming else EMPTY, path),)

    values = dict(i.values)
    values[path] = slot
    return replace(i, values=values, updated_at=_now())


def _resolve_repeat_node(t: Template, i: MetadataInstance,
                         base_path: str) -> tuple[TemplateNode, str]:
    segments = paths.parse_value_path(base_path)
    *prefix, (last_key, last_idx) = segments
    if last_idx is not None:
        raise MetaforgeError("UNKNOWN_PATH",
                             "address the node itself, without a final index", path=base_path)
    nodes = t.children
    node: TemplateNode | None = None
    base = ""
    for key, idx in prefix:
        node = next((n for n in nodes if n.key == key), None)
        if node is None:
            raise MetaforgeError("UNKNOWN_PATH", f"no node at {base_path!r}", path=base_path)
        base = f"{base}/{key}" if base else key
        if node.cardinality.is_multi:
            if idx is None or idx >= repetition_count(i, node, base):
                raise MetaforgeError("UNKNOWN_PATH",
                                     f"repetition missing at {base!r}", path=base_path)
            base = f"{base}[{idx}]"
        elif idx is not None:
            raise MetaforgeError("UNKNOWN_PATH",
                                 f"single-valued node {key!r} takes no index", path=base_path)
        nodes = node.children
    node = next((n for n in nodes if n.key == last_key), None)
    if node is None:
        raise MetaforgeError("UNKNOWN_PATH", f"no node at {base_path!r}", path=base_path)
    base = f"{base}/{last_key}" if base else last_key
    return node, base


def add_repetition(t: Template, i: MetadataInstance, base_path: str) -> MetadataInstance:
    """Append one repetition of a multi-valued node (Fig-style `+` control)."""
    node, base = _resolve_repeat_node(t, i, base_path)
    count = repetition_count(i, node, base)
    if node.cardinality.max is not None and count + 1 > node.cardinality.max:
        raise MetaforgeError("CARDINALITY_OVERFLOW",
                             f"{base}: already at max {node.cardinality.max}", path=base)
    values = dict(i.values)
    counts = dict(i.element_counts)
    rep = f"{base}[{count}]"
    if node.kind is NodeKind.FIELD:
        values[rep] = _default_slot(node)
    else:
        counts[base] = count + 1
        for child in node.children:
            _materialize(child, f"{rep}/{child.key}", values, counts, with_defaults=True)
    return replace(i, values=values, element_counts=counts, updated_at=_now())


def remove_repetition(t: Template, i: MetadataInstance, path: str) -> MetadataInstance:
    """Remove the repetition addressed by a final `[i]`; higher indices shift down."""
    segments = paths.parse_value_path(path)
    *_, (last_key, last_idx) = segments
    if last_idx is None:
        raise MetaforgeError("UNKNOWN_PATH", "removal path must end in an index", path=path)
    base_path = paths.join_segments(segments[:-1] + [(last_key, None)])
    node, base = _resolve_repeat_node(t, i, base_path)
    count = repetition_count(i, node, base)
    if last_idx >= count:
        raise MetaforgeError("UNKNOWN_PATH", f"repetition {last_idx} not materialized", path=path)
    if count - 1 < node.cardinality.min:
        raise MetaforgeError("CARDINALITY_UNDERFLOW",
                             f"{base}: already at min {node.cardinality.min}", path=base)

    removed_prefix = f"{base}[{last_idx}]"
    values: dict[str, Slot] = {}
    counts: dict[str, int] = {}

    def shift(p: str) -> str | None:
        if p == removed_prefix or p.startswith(removed_prefix + "/"):
            return None
        if p.startswith(f"{base}["):
            rest = p[len(base) + 1:]
            idx_text, _, tail = rest.partition("]")
            idx = int(idx_text)
            if idx > last_idx:
                return f"{base}[{idx - 1}]{tail}"
        return p

    for k, slot in i.values.items():
        nk = shift(k)
        if nk is not None:
            values[nk] = slot
    for k, n in i.element_counts.items():
        nk = shift(k)
        if nk is not None:
            counts[nk] = n
    if node.kind is NodeKind.ELEMENT:
        counts[base] = count - 1
    return replace(i, values=values, element_counts=counts, updated_at=_now())


@dataclass(frozen=True)
class WalkStep:
    """One stop in instance order: a repeat anchor, an element instance, or a field slot."""

    kind: str  # repeat | group | slot
    node: TemplateNode
    path: str
    count: int = 0


def walk_instance(t: Template, i: MetadataInstance) -> Iterator[WalkStep]:
    """Depth-first template order expanded by the instance's repetitions."""

    def visit(node: TemplateNode, base: str) -> Iterator[WalkStep]:
        if node.cardinality.is_multi:
            count = repetition_count(i, node, base)
            yield WalkStep("repeat", node, base, count)
            for idx in range(count):
                rep = f"{base}[{idx}]"
                if node.kind is NodeKind.ELEMENT:
                    yield WalkStep("group", node, rep)
                    for child in node.children:
                        yield from visit(child, f"{rep}/{child.key}")
                else:
                    yield WalkStep("slot", node, rep)
        else:
            if node.kind is NodeKind.ELEMENT:
                yield WalkStep("group", node, base)
                for child in node.children:
                    yield from visit(child, f"{base}/{child.key}")
            else:
                yield WalkStep("slot", node, base)

    for child in t.children:
        yield from visit(child, child.key)
