"""Parse, canonically serialize, and fingerprint template documents.

The canonical file format is documented in the README. Parsing is strict
about structure (kind/key/fieldType/cardinality shapes) and raises; semantic
invariants are reported by `validate_template` instead.
"""

from __future__ import annotations

import hashlib
import json
from decimal import Decimal, InvalidOperation

from metaforge.errors import MetaforgeError
from metaforge.template.model import (
    KEY_RE,
    Cardinality,
    Constraints,
    FieldType,
    Granularity,
    LiteralOption,
    NodeKind,
    NumberKind,
    SourceType,
    Template,
    TemplateNode,
    TermSourceSpec,
)
from metaforge.values import (
    XSD_ANYURI,
    XSD_BOOLEAN,
    XSD_DATE,
    XSD_DATETIME,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    XSD_TIME,
    Authority,
    FieldValue,
    Literal,
    Term,
)

_TOP_LEVEL_KEYS = {"id", "name", "description", "version", "propertyContext", "children"}

# Literal datatype implied by each field type (number/temporal refined by constraints).
FIELD_DATATYPES = {
    FieldType.TEXT: XSD_STRING,
    FieldType.BOOLEAN: XSD_BOOLEAN,
    FieldType.LINK: XSD_ANYURI,
    FieldType.LIST: XSD_STRING,
    FieldType.CHECKBOX: XSD_STRING,
    FieldType.IMAGE: XSD_ANYURI,
    FieldType.VIDEO: XSD_ANYURI,
    FieldType.CONTROLLED_TERM: XSD_STRING,
    FieldType.EXTERNAL_AUTHORITY: XSD_STRING,
}


def literal_datatype(field_type: FieldType, constraints: Constraints | None) -> str:
    if field_type is FieldType.NUMBER:
        kind = constraints.number_kind if constraints else NumberKind.DECIMAL
        return XSD_INTEGER if kind is NumberKind.INTEGER else XSD_DECIMAL
    if field_type is FieldType.TEMPORAL:
        gran = constraints.granularity if constraints else Granularity.DATE
        return {Granularity.DATE: XSD_DATE, Granularity.DATETIME: XSD_DATETIME,
                Granularity.TIME: XSD_TIME}[gran]
    return FIELD_DATATYPES[field_type]


def _fail(code: str, message: str, path: str = "") -> MetaforgeError:
    return MetaforgeError(code, message, path=path or None)


def _language_map(obj, what: str, path: str) -> dict[str, str]:
    if obj is None:
        return {}
    if not isinstance(obj, dict):
        raise _fail("SCHEMA_VIOLATION", f"{what} must be an object of language tags", path)
    out = {}
    for tag, text in obj.items():
        if not isinstance(tag, str) or not isinstance(text, str):
            raise _fail("SCHEMA_VIOLATION", f"{what} entries must map tag strings to strings", path)
        out[tag.lower()] = text
    return out


def _cardinality(obj, *, required: bool, kind: NodeKind, path: str) -> Cardinality:
    if obj is None:
        if kind is NodeKind.ELEMENT:
            return Cardinality(1, 1)
        return Cardinality(1 if required else 0, 1)
    if not isinstance(obj, dict):
        raise _fail("SCHEMA_VIOLATION", "cardinality must be an object", path)
    mn = obj.get("min", 0)
    mx = obj.get("max")  # omitted max means unbounded
    if not isinstance(mn, int) or isinstance(mn, bool) or mn < 0:
        raise _fail("SCHEMA_VIOLATION", "cardinality min must be a non-negative integer", path)
    if mx is not None and (not isinstance(mx, int) or isinstance(mx, bool) or mx < 1):
        raise _fail("SCHEMA_VIOLATION", "cardinality max must be a positive integer", path)
    return Cardinality(mn, mx)


def _decimal(raw, what: str, path: str) -> Decimal | None:
    if raw is None:
        return None
    if isinstance(raw, bool) or not isinstance(raw, (int, float, str)):
        raise _fail("SCHEMA_VIOLATION", f"{what} must be a number", path)
    try:
        return Decimal(str(raw))
    except InvalidOperation:
        raise _fail("SCHEMA_VIOLATION", f"{what} is not a valid decimal", path) from None


def _term_source(obj, path: str) -> TermSourceSpec:
    if not isinstance(obj, dict):
        raise _fail("SCHEMA_VIOLATION", "term source must be an object", path)
    raw_type = obj.get("sourceType")
    try:
        source_type = SourceType(raw_type)
    except ValueError:
        raise _fail("SCHEMA_VIOLATION", f"unknown sourceType {raw_type!r}", path) from None
    acronym = obj.get("acronym")
    if not isinstance(acronym, str) or not acronym:
        raise _fail("SCHEMA_VIOLATION", "term source needs an acronym", path)
    root_iri = obj.get("rootIri")
    value_set_id = obj.get("valueSetId")
    if root_iri is not None and not isinstance(root_iri, str):
        raise _fail("SCHEMA_VIOLATION", "rootIri must be a string", path)
    if value_set_id is not None and not isinstance(value_set_id, str):
        raise _fail("SCHEMA_VIOLATION", "valueSetId must be a string", path)
    return TermSourceSpec(source_type, acronym, root_iri, value_set_id)


def _literal_option(obj, path: str) -> LiteralOption:
    if isinstance(obj, str):
        return LiteralOption(obj)
    if isinstance(obj, dict) and isinstance(obj.get("label"), str):
        iri = obj.get("iri")
        if iri is not None and not isinstance(iri, str):
            raise _fail("SCHEMA_VIOLATION", "literal iri must be a string", path)
        return LiteralOption(obj["label"], iri)
    raise _fail("SCHEMA_VIOLATION", "literals entries must be strings or {label, iri} objects", path)


def _constraints(obj, field_type: FieldType, path: str) -> Constraints:
    raw = obj or {}
    if not isinstance(raw, dict):
        raise _fail("SCHEMA_VIOLATION", "constraints must be an object", path)
    if field_type is FieldType.TEXT:
        for k in ("minLength", "maxLength"):
            v = raw.get(k)
            if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
                raise _fail("SCHEMA_VIOLATION", f"{k} must be a non-negative integer", path)
        regex = raw.get("regex")
        if regex is not None and not isinstance(regex, str):
            raise _fail("SCHEMA_VIOLATION", "regex must be a string", path)
        return Constraints(min_length=raw.get("minLength"), max_length=raw.get("maxLength"),
                           regex=regex)
    if field_type is FieldType.NUMBER:
        raw_kind = raw.get("numberKind", "decimal")
        try:
            kind = NumberKind(raw_kind)
        except ValueError:
            raise _fail("SCHEMA_VIOLATION", f"unknown numberKind {raw_kind!r}", path) from None
        return Constraints(number_kind=kind,
                           min_value=_decimal(raw.get("minValue"), "minValue", path),
                           max_value=_decimal(raw.get("maxValue"), "maxValue", path))
    if field_type is FieldType.TEMPORAL:
        raw_gran = raw.get("granularity", "date")
        try:
            gran = Granularity(raw_gran)
        except ValueError:
            raise _fail("SCHEMA_VIOLATION", f"unknown granularity {raw_gran!r}", path) from None
        return Constraints(granularity=gran)
    if field_type in (FieldType.CHECKBOX, FieldType.LIST):
        literals = raw.get("literals", [])
        if not isinstance(literals, list):
            raise _fail("SCHEMA_VIOLATION", "literals must be an array", path)
        return Constraints(literals=tuple(_literal_option(o, path) for o in literals))
    if field_type is FieldType.CONTROLLED_TERM:
        sources = raw.get("sources", [])
        if not isinstance(sources, list):
            raise _fail("SCHEMA_VIOLATION", "sources must be an array", path)
        return Constraints(sources=tuple(_term_source(s, path) for s in sources))
    if field_type is FieldType.EXTERNAL_AUTHORITY:
        authority = raw.get("authority")
        if authority not in ("orcid", "ror", "comptox"):
            raise _fail("SCHEMA_VIOLATION",
                        "external_authority requires authority orcid|ror|comptox", path)
        return Constraints(authority=authority)
    return Constraints()


def _default_value(raw, field_type: FieldType, constraints: Constraints,
                   path: str) -> FieldValue | None:
    if raw is None:
        return None
    if field_type is FieldType.CONTROLLED_TERM and isinstance(raw, dict):
        iri, label = raw.get("iri"), raw.get("label")
        if not isinstance(iri, str) or not isinstance(label, str):
            raise _fail("SCHEMA_VIOLATION", "term default needs iri and label", path)
        return Term(iri, label)
    if field_type is FieldType.EXTERNAL_AUTHORITY and isinstance(raw, dict):
        ident, label = raw.get("id", raw.get("iri")), raw.get("label")
        if not isinstance(ident, str) or not isinstance(label, str):
            raise _fail("SCHEMA_VIOLATION", "authority default needs id and label", path)
        return Authority(constraints.authority or "orcid", ident, label)
    if isinstance(raw, bool):
        raw = "true" if raw else "false"
    if isinstance(raw, (int, float)):
        raw = str(raw)
    if not isinstance(raw, str):
        raise _fail("SCHEMA_VIOLATION", "default must be a scalar or term/authority object", path)
    return Literal(raw, literal_datatype(field_type, constraints))


def _parse_node(obj, path_prefix: str) -> TemplateNode:
    if not isinstance(obj, dict):
        raise _fail("SCHEMA_VIOLATION", "template node must be an object", path_prefix)
    key = obj.get("key")
    if not isinstance(key, str) or not KEY_RE.match(key):
        raise _fail("SCHEMA_VIOLATION",
                    f"node key {key!r} missing or not matching [a-z][a-z0-9_]*", path_prefix)
    path = f"{path_prefix}/{key}" if path_prefix else key
    raw_kind = obj.get("kind")
    try:
        kind = NodeKind(raw_kind)
    except ValueError:
        raise _fail("SCHEMA_VIOLATION", f"node kind missing or unknown: {raw_kind!r}", path) from None
    label = _language_map(obj.get("label"), "label", path)
    help_map = _language_map(obj.get("help"), "help", path)
    hidden = obj.get("hidden", False)
    if not isinstance(hidden, bool):
        raise _fail("SCHEMA_VIOLATION", "hidden must be a boolean", path)

    if kind is NodeKind.FIELD:
        if obj.get("children"):
            raise _fail("SCHEMA_VIOLATION", "fields cannot have children", path)
        required = obj.get("required", False)
        if not isinstance(required, bool):
            raise _fail("SCHEMA_VIOLATION", "required must be a boolean", path)
        raw_type = obj.get("fieldType")
        try:
            field_type = FieldType(raw_type)
        except ValueError:
            raise _fail("SCHEMA_VIOLATION",
                        f"fieldType missing or unknown: {raw_type!r}", path) from None
        constraints = _constraints(obj.get("constraints"), field_type, path)
        cardinality = _cardinality(obj.get("cardinality"), required=required,
                                   kind=kind, path=path)
        default = _default_value(obj.get("default"), field_type, constraints, path)
        return TemplateNode(kind=kind, key=key, label=label, help=help_map,
                            cardinality=cardinality, hidden=hidden, field_type=field_type,
                            required=required, default=default, constraints=constraints)

    if "fieldType" in obj or "constraints" in obj:
        raise _fail("SCHEMA_VIOLATION", "elements cannot carry fieldType or constraints", path)
    cardinality = _cardinality(obj.get("cardinality"), required=False, kind=kind, path=path)
    raw_children = obj.get("children", [])
    if not isinstance(raw_children, list):
        raise _fail("SCHEMA_VIOLATION", "children must be an array", path)
    children = _parse_children(raw_children, path)
    return TemplateNode(kind=kind, key=key, label=label, help=help_map,
                        cardinality=cardinality, hidden=hidden, children=children)


def _parse_children(raw_children: list, path_prefix: str) -> tuple[TemplateNode, ...]:
    children = []
    seen: set[str] = set()
    for raw in raw_children:
        node = _parse_node(raw, path_prefix)
        if node.key in seen:
            dup_path = f"{path_prefix}/{node.key}" if path_prefix else node.key
            raise _fail("DUPLICATE_KEY", f"sibling key {node.key!r} appears twice", dup_path)
        seen.add(node.key)
        children.append(node)
    return tuple(children)


def parse_template(doc) -> Template:
    """Parse a template document (JSON text, bytes, or an already-decoded dict)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise _fail("MALFORMED_JSON", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise _fail("SCHEMA_VIOLATION", "template document must be a JSON object")

    template_id = doc.get("id")
    if not isinstance(template_id, str) or not template_id:
        raise _fail("SCHEMA_VIOLATION", "template id is required")
    version = doc.get("version", "1.0.0")
    if not isinstance(version, str):
        raise _fail("SCHEMA_VIOLATION", "version must be a string")
    raw_context = doc.get("propertyContext", {})
    if not isinstance(raw_context, dict):
        raise _fail("SCHEMA_VIOLATION", "propertyContext must be an object")
    property_context = {}
    for k, v in raw_context.items():
        if not isinstance(k, str) or not isinstance(v, str):
            raise _fail("SCHEMA_VIOLATION", "propertyContext must map keys to IRI strings")
        property_context[k] = v
    raw_children = doc.get("children", [])
    if not isinstance(raw_children, list):
        raise _fail("SCHEMA_VIOLATION", "children must be an array")
    children = _parse_children(raw_children, "")

    # Every node key resolves in the context; absentees fall back to <id>#<key>.
    def fill_context(nodes):
        for node in nodes:
            property_context.setdefault(node.key, f"{template_id}#{node.key}")
            fill_context(node.children)
    fill_context(children)

    extras = {k: v for k, v in doc.items() if k not in _TOP_LEVEL_KEYS}
    return Template(
        id=template_id,
        name=_language_map(doc.get("name"), "name", ""),
        description=_language_map(doc.get("description"), "description", ""),
        version=version,
        property_context=property_context,
        children=children,
        extras=extras,
    )


def _cardinality_to_canonical(c: Cardinality) -> dict:
    out: dict = {"min": c.min}
    if c.max is not None:
        out["max"] = c.max
    return out


def _default_to_canonical(value: FieldValue) -> object:
    if isinstance(value, Literal):
        return value.value
    if isinstance(value, Term):
        return {"iri": value.iri, "label": value.label}
    if isinstance(value, Authority):
        return {"id": value.id, "label": value.label, "source": value.source}
    return None


def _constraints_to_canonical(node: TemplateNode) -> dict | None:
    c = node.constraints
    ft = node.field_type
    if c is None or ft is None:
        return None
    if ft is FieldType.TEXT:
        out = {}
        if c.min_length is not None:
            out["minLength"] = c.min_length
        if c.max_length is not None:
            out["maxLength"] = c.max_length
        if c.regex is not None:
            out["regex"] = c.regex
        return out or None
    if ft is FieldType.NUMBER:
        out = {}
        if c.number_kind is not NumberKind.DECIMAL or c.min_value is not None \
                or c.max_value is not None:
            out["numberKind"] = c.number_kind.value
        if c.min_value is not None:
            out["minValue"] = str(c.min_value)
        if c.max_value is not None:
            out["maxValue"] = str(c.max_value)
        return out or None
    if ft is FieldType.TEMPORAL:
        if c.granularity is Granularity.DATE:
            return None
        return {"granularity": c.granularity.value}
    if ft in (FieldType.CHECKBOX, FieldType.LIST):
        lits = []
        for opt in c.literals:
            entry: dict = {"label": opt.label}
            if opt.iri is not None:
                entry["iri"] = opt.iri
            lits.append(entry)
        return {"literals": lits}
    if ft is FieldType.CONTROLLED_TERM:
        sources = []
        for s in c.sources:
            entry = {"sourceType": s.source_type.value, "acronym": s.acronym}
            if s.root_iri is not None:
                entry["rootIri"] = s.root_iri
            if s.value_set_id is not None:
                entry["valueSetId"] = s.value_set_id
            sources.append(entry)
        return {"sources": sources}
    if ft is FieldType.EXTERNAL_AUTHORITY:
        return {"authority": c.authority}
    return None


def _node_to_canonical(node: TemplateNode) -> dict:
    out: dict = {"kind": node.kind.value, "key": node.key}
    if node.label:
        out["label"] = dict(sorted(node.label.items()))
    if node.help:
        out["help"] = dict(sorted(node.help.items()))
    if node.hidden:
        out["hidden"] = True
    out["cardinality"] = _cardinality_to_canonical(node.cardinality)
    if node.kind is NodeKind.FIELD:
        out["fieldType"] = node.field_type.value if node.field_type else None
        if node.required:
            out["required"] = True
        constraints = _constraints_to_canonical(node)
        if constraints:
            out["constraints"] = constraints
        if node.default is not None:
            out["default"] = _default_to_canonical(node.default)
    else:
        out["children"] = [_node_to_canonical(c) for c in node.children]
    return out


def serialize_template(t: Template) -> dict:
    """Canonical document form: defaults materialized, key order irrelevant."""
    context = dict(t.property_context)
    for _path, node in _walk(t.children):
        context.setdefault(node.key, f"{t.id}#{node.key}")
    doc: dict = {
        "id": t.id,
        "version": t.version,
        "propertyContext": dict(sorted(context.items())),
        "children": [_node_to_canonical(c) for c in t.children],
    }
    if t.name:
        doc["name"] = dict(sorted(t.name.items()))
    if t.description:
        doc["description"] = dict(sorted(t.description.items()))
    for k, v in t.extras.items():
        doc.setdefault(k, v)
    return doc


def _walk(nodes, prefix=""):
    for node in nodes:
        path = f"{prefix}/{node.key}" if prefix else node.key
        yield path, node
        yield from _walk(node.children, path)


def canonical_json(doc: dict) -> str:
    """Sorted object keys, arrays in declared order, no whitespace."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def template_fingerprint(t: Template) -> str:
    """SHA-256 over the canonical serialization; stable across runs and platforms."""
    return hashlib.sha256(canonical_json(serialize_template(t)).encode("utf-8")).hexdigest()
