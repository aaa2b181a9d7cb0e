"""JSON-LD serialization of metadata instances, and the reverse binding.

Output skeleton:

    { "@context": { "rdfs": ..., "xsd": ..., "<key>": {"@id": "<propertyIRI>"} },
      "@type": "<templateId>",
      "<key>": {"@value": "...", "@type": "xsd:string"},      literal
      "<key>": {"@id": "<IRI>", "rdfs:label": "..."},          term / authority
      "<elementKey>": [ { ... per repetition ... } ] }         multi-valued

Empty values are omitted; timestamps are envelope metadata and never appear.
"""

from __future__ import annotations

import json

from metaforge.errors import MetaforgeError
from metaforge.instance.engine import (
    MetadataInstance,
    Slot,
    ValidationIssue,
    _materialize,
    _now,
    repetition_count,
)
from metaforge.instance.validation import has_errors, validate_instance
from metaforge.template.model import FieldType, NodeKind, Template, TemplateNode, walk
from metaforge.template.parser import literal_datatype, template_fingerprint
from metaforge.values import (
    EMPTY,
    Authority,
    FieldValue,
    Literal,
    Term,
    is_empty,
)

RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"


def _value_to_jsonld(value: FieldValue) -> dict:
    if isinstance(value, Literal):
        return {"@value": value.value, "@type": value.datatype}
    if isinstance(value, (Term, Authority)):
        iri = value.iri if isinstance(value, Term) else value.id
        return {"@id": iri, "rdfs:label": value.label}
    raise MetaforgeError("TYPE_MISMATCH", f"cannot serialize {value!r}")


def _field_entry(node: TemplateNode, slot: Slot) -> object | None:
    filled = [v for v in slot if not is_empty(v)]
    if not filled:
        return None
    if node.field_type is FieldType.CHECKBOX:
        return [_value_to_jsonld(v) for v in filled]
    return _value_to_jsonld(filled[0])


def _build_object(t: Template, i: MetadataInstance, nodes, base: str) -> dict:
    out: dict = {}
    for node in nodes:
        path = f"{base}/{node.key}" if base else node.key
        if node.cardinality.is_multi:
            count = repetition_count(i, node, path)
            items = []
            for idx in range(count):
                rep = f"{path}[{idx}]"
                if node.kind is NodeKind.FIELD:
                    entry = _field_entry(node, i.values.get(rep, ()))
                else:
                    entry = _build_object(t, i, node.children, rep) or None
                if entry is not None:
                    items.append(entry)
            if items:
                out[node.key] = items
        else:
            if node.kind is NodeKind.FIELD:
                entry = _field_entry(node, i.values.get(path, ()))
                if entry is not None:
                    out[node.key] = entry
            else:
                nested = _build_object(t, i, node.children, path)
                if nested:
                    out[node.key] = nested
    return out


def serialize_jsonld(t: Template, i: MetadataInstance, strict: bool = False) -> dict:
    """Render the instance as a JSON-LD document. With strict=True the
    instance must validate without errors (VALIDATION_FAILED otherwise)."""
    if strict:
        issues = validate_instance(t, i, strict=True)
        if has_errors(issues):
            raise MetaforgeError("VALIDATION_FAILED",
                                 "instance has validation errors",
                                 issues=[x.to_dict() for x in issues
                                         if x.severity == "error"])
    context: dict = {"rdfs": RDFS_NS, "xsd": XSD_NS}
    for _path, node in walk(t.children):
        context[node.key] = {"@id": t.property_iri(node.key)}
    doc = {"@context": context, "@type": t.id}
    doc.update(_build_object(t, i, t.children, ""))
    return doc


def serialize_jsonld_text(t: Template, i: MetadataInstance, strict: bool = False) -> str:
    return json.dumps(serialize_jsonld(t, i, strict=strict), sort_keys=True,
                      indent=2, ensure_ascii=False) + "\n"


def _parse_value(node: TemplateNode, raw, path: str,
                 warnings: list[ValidationIssue]) -> FieldValue | None:
    if isinstance(raw, dict) and "@id" in raw:
        iri = str(raw["@id"])
        label = str(raw.get("rdfs:label", ""))
        if node.field_type is FieldType.EXTERNAL_AUTHORITY:
            source = node.constraints.authority if node.constraints else "orcid"
            return Authority(source or "orcid", iri, label)
        return Term(iri, label)
    if isinstance(raw, dict) and "@value" in raw:
        value = raw["@value"]
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif not isinstance(value, str):
            value = str(value)
        datatype = raw.get("@type") or literal_datatype(node.field_type, node.constraints)
        return Literal(value, str(datatype))
    if isinstance(raw, str):
        return Literal(raw, literal_datatype(node.field_type, node.constraints))
    if isinstance(raw, bool):
        return Literal("true" if raw else "false",
                       literal_datatype(node.field_type, node.constraints))
    if isinstance(raw, (int, float)):
        return Literal(str(raw), literal_datatype(node.field_type, node.constraints))
    warnings.append(ValidationIssue("warning", path, "UNKNOWN_FIELD",
                                    "value shape not recognized; ignored"))
    return None


def _as_slot(node: TemplateNode, raw, path: str,
             warnings: list[ValidationIssue]) -> Slot:
    if node.field_type is FieldType.CHECKBOX:
        items = raw if isinstance(raw, list) else [raw]
        parsed = [_parse_value(node, item, path, warnings) for item in items]
        return tuple(v for v in parsed if v is not None)
    items = raw if isinstance(raw, list) else [raw]
    parsed = [_parse_value(node, item, path, warnings) for item in items]
    slot = tuple(v for v in parsed if v is not None)
    return slot or (EMPTY,)


def _bind(t: Template, nodes, obj: dict, base: str,
          values: dict[str, Slot], counts: dict[str, int],
          warnings: list[ValidationIssue]) -> None:
    by_key = {n.key: n for n in nodes}
    for key, raw in obj.items():
        if base == "" and key in ("@context", "@type", "@id"):
            continue
        node = by_key.get(key)
        path = f"{base}/{key}" if base else key
        if node is None:
            warnings.append(ValidationIssue("warning", path, "UNKNOWN_FIELD",
                                            f"key {key!r} is not defined by the template"))
            continue
        if node.cardinality.is_multi:
            items = raw if isinstance(raw, list) else [raw]
            if node.kind is NodeKind.FIELD and node.field_type is FieldType.CHECKBOX \
                    and items and not isinstance(items[0], list):
                items = [items]  # one repetition holding a selection list
            count = max(len(items), max(node.cardinality.min, 1))
            if node.kind is NodeKind.ELEMENT:
                counts[path] = count
                for idx in range(count):
                    rep = f"{path}[{idx}]"
                    for child in node.children:
                        _materialize(child, f"{rep}/{child.key}", values, counts,
                                     with_defaults=False)
                for idx, item in enumerate(items):
                    if isinstance(item, dict):
                        _bind(t, node.children, item, f"{path}[{idx}]", values, counts,
                              warnings)
                    else:
                        warnings.append(ValidationIssue(
                            "warning", f"{path}[{idx}]", "UNKNOWN_FIELD",
                            "expected a nested object for this element"))
            else:
                for idx in range(count):
                    values.setdefault(f"{path}[{idx}]",
                                      () if node.field_type is FieldType.CHECKBOX else (EMPTY,))
                for idx, item in enumerate(items):
                    values[f"{path}[{idx}]"] = _as_slot(node, item, f"{path}[{idx}]", warnings)
        else:
            if node.kind is NodeKind.ELEMENT:
                if isinstance(raw, dict):
                    _bind(t, node.children, raw, path, values, counts, warnings)
                else:
                    warnings.append(ValidationIssue("warning", path, "UNKNOWN_FIELD",
                                                    "expected a nested object for this element"))
            else:
                values[path] = _as_slot(node, raw, path, warnings)


def parse_instance(t: Template, doc) -> MetadataInstance:
    """Re-bind a JSON-LD document to template paths.

    Unknown keys become UNKNOWN_FIELD warnings on the returned instance;
    a different template id in @type is a CONTEXT_MISMATCH error.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MetaforgeError("MALFORMED_JSON", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MetaforgeError("MALFORMED_JSON", "instance document must be a JSON object")
    doc_type = doc.get("@type")
    if doc_type != t.id:
        raise MetaforgeError("CONTEXT_MISMATCH",
                             f"document @type {doc_type!r} is not template {t.id!r}")

    values: dict[str, Slot] = {}
    counts: dict[str, int] = {}
    for child in t.children:
        _materialize(child, child.key, values, counts, with_defaults=False)
    warnings: list[ValidationIssue] = []
    _bind(t, t.children, doc, "", values, counts, warnings)
    now = _now()
    return MetadataInstance(
        template_id=t.id,
        template_fingerprint=template_fingerprint(t),
        values=values,
        element_counts=counts,
        created_at=now,
        updated_at=now,
        parse_warnings=tuple(warnings),
    )
