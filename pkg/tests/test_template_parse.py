from __future__ import annotations

import json

import pytest

from metaforge.errors import MetaforgeError
from metaforge.template import (
    FieldType,
    parse_template,
    resolve_node,
    serialize_template,
)
from metaforge.values import Literal


def test_empty_template_parses(template_docs):
    t = parse_template(template_docs["empty"])
    assert t.id == "https://ex.org/t/empty"
    assert t.children == ()
    assert t.name == {"en": "Empty"}


def test_fig2_analyte_class_literals(fig2_template):
    node = resolve_node(fig2_template, "analyte_class")
    assert node.field_type is FieldType.LIST
    assert node.required is True
    assert [o.label for o in node.constraints.literals] == [
        "Chromatin", "Collagen", "DNA", "DNA + RNA",
        "Endogenous fluorophore", "Fluorochrome", "Lipid"]


def test_omitted_max_means_unbounded(psych_template):
    node = resolve_node(psych_template, "variable_measured")
    assert node.cardinality.min == 1
    assert node.cardinality.max is None
    assert node.cardinality.is_multi


def test_omitted_cardinality_defaults_follow_required(fig2_template):
    required = resolve_node(fig2_template, "parent_sample_id")
    optional = resolve_node(fig2_template, "acquisition_instrument_model")
    assert (required.cardinality.min, required.cardinality.max) == (1, 1)
    assert (optional.cardinality.min, optional.cardinality.max) == (0, 1)


def test_children_order_preserved(fig2_template):
    assert [n.key for n in fig2_template.children] == [
        "parent_sample_id", "lab_id", "preparation_protocol_doi",
        "dataset_type", "analyte_class", "acquisition_instrument_model"]


def test_default_value_parsed(fig2_template):
    node = resolve_node(fig2_template, "dataset_type")
    assert node.default == Literal("RNAseq", "xsd:string")


def test_unknown_top_level_keys_preserved():
    doc = {"id": "https://ex.org/t/x", "version": "1.0.0", "children": [],
           "x-custom": {"a": 1}}
    t = parse_template(doc)
    assert t.extras == {"x-custom": {"a": 1}}
    assert serialize_template(t)["x-custom"] == {"a": 1}


def test_property_context_fallback():
    doc = {"id": "https://ex.org/t/x", "children": [
        {"kind": "field", "key": "plain", "label": {"en": "Plain"}, "fieldType": "text"}]}
    t = parse_template(doc)
    assert t.property_context["plain"] == "https://ex.org/t/x#plain"


def test_malformed_json_raises():
    with pytest.raises(MetaforgeError) as exc:
        parse_template("{not json")
    assert exc.value.code == "MALFORMED_JSON"


@pytest.mark.parametrize("mutation", [
    {"kind": None},                       # missing kind
    {"key": None},                        # missing key
    {"key": "Bad Key"},                   # key grammar
    {"fieldType": None},                  # missing fieldType
    {"fieldType": "sparkline"},           # unknown fieldType
    {"cardinality": {"min": -1}},         # negative min
    {"cardinality": {"min": 0, "max": 0}},  # max below 1
    {"cardinality": "twice"},             # wrong shape
])
def test_schema_violations(mutation):
    node = {"kind": "field", "key": "ok", "label": {"en": "Ok"}, "fieldType": "text"}
    node.update({k: v for k, v in mutation.items()})
    for key, value in list(node.items()):
        if value is None:
            del node[key]
    doc = {"id": "https://ex.org/t/x", "version": "1.0.0", "children": [node]}
    with pytest.raises(MetaforgeError) as exc:
        parse_template(doc)
    assert exc.value.code == "SCHEMA_VIOLATION"


def test_duplicate_sibling_keys_raise():
    doc = {"id": "https://ex.org/t/x", "children": [
        {"kind": "field", "key": "name", "fieldType": "text"},
        {"kind": "field", "key": "name", "fieldType": "text"}]}
    with pytest.raises(MetaforgeError) as exc:
        parse_template(doc)
    assert exc.value.code == "DUPLICATE_KEY"


def test_parse_canonical_serialize_parse_is_fixed_point(templates):
    for name, t in templates.items():
        doc = serialize_template(t)
        again = parse_template(json.dumps(doc))
        assert again == t, name
        assert serialize_template(again) == doc, name


def test_element_rejects_field_type():
    doc = {"id": "https://ex.org/t/x", "children": [
        {"kind": "element", "key": "grp", "fieldType": "text", "children": []}]}
    with pytest.raises(MetaforgeError) as exc:
        parse_template(doc)
    assert exc.value.code == "SCHEMA_VIOLATION"
