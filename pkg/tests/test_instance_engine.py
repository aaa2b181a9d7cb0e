from __future__ import annotations

import random

import pytest

from metaforge.errors import MetaforgeError
from metaforge.instance import new_instance, set_value, walk_instance
from metaforge.values import EMPTY, Authority, Literal, Term

import instance_gen


def test_empty_template_has_no_paths(empty_template):
    i = new_instance(empty_template)
    assert i.values == {}
    assert i.element_counts == {}


def test_min_one_multi_field_materializes_one_repetition(psych_template):
    i = new_instance(psych_template)
    assert "variable_measured[0]" in i.values
    assert i.values["variable_measured[0]"] == (EMPTY,)
    assert "variable_measured" not in i.values


def test_defaults_applied(fig2_template):
    i = new_instance(fig2_template)
    assert i.values["dataset_type"] == (Literal("RNAseq", "xsd:string"),)


def test_multi_element_materializes_children(psych_template):
    i = new_instance(psych_template)
    assert i.element_counts["authors"] == 1
    assert i.values["authors[0]/name"] == (EMPTY,)
    assert i.values["authors[0]/orcid"] == (EMPTY,)


def test_set_text_value(fig2_template):
    i = new_instance(fig2_template)
    i2 = set_value(fig2_template, i, "parent_sample_id", Literal("HBM296.DXLM.434"))
    assert i2.values["parent_sample_id"] == (Literal("HBM296.DXLM.434", "xsd:string"),)
    # frame property: the original instance is unchanged
    assert i.values["parent_sample_id"] == (EMPTY,)


def test_set_value_coerces_datatype(sink_template):
    i = new_instance(sink_template)
    i = set_value(sink_template, i, "replicate_count", Literal("7"))
    assert i.values["replicate_count"][0].datatype == "xsd:integer"
    i = set_value(sink_template, i, "collected_on", Literal("2025-03-01"))
    assert i.values["collected_on"][0].datatype == "xsd:date"


def test_non_numeric_into_number_field(sink_template):
    i = new_instance(sink_template)
    with pytest.raises(MetaforgeError) as exc:
        set_value(sink_template, i, "replicate_count", Literal("abc"))
    assert exc.value.code == "TYPE_MISMATCH"


def test_decimal_into_integer_field(sink_template):
    i = new_instance(sink_template)
    with pytest.raises(MetaforgeError) as exc:
        set_value(sink_template, i, "replicate_count", Literal("1.5"))
    assert exc.value.code == "TYPE_MISMATCH"


def test_authority_value_stored(contacts_template):
    i = new_instance(contacts_template)
    pi = Authority("orcid", "https://orcid.org/0000-0002-2256-2421", "Martin O'Connor")
    i = set_value(contacts_template, i, "pi", pi)
    assert i.values["pi"] == (pi,)


def test_authority_source_mismatch(contacts_template):
    i = new_instance(contacts_template)
    ror_value = Authority("ror", "https://ror.org/00f54p054", "Stanford University")
    with pytest.raises(MetaforgeError) as exc:
        set_value(contacts_template, i, "pi", ror_value)
    assert exc.value.code == "TYPE_MISMATCH"


def test_term_only_on_controlled_term(fig2_template):
    i = new_instance(fig2_template)
    with pytest.raises(MetaforgeError) as exc:
        set_value(fig2_template, i, "lab_id", Term("https://ex.org/x", "X"))
    assert exc.value.code == "TYPE_MISMATCH"


def test_free_text_retained_on_semantic_fields(contacts_template):
    i = new_instance(contacts_template)
    i = set_value(contacts_template, i, "pi", Literal("Martin O'Connor"))
    assert i.values["pi"] == (Literal("Martin O'Connor", "xsd:string"),)


def test_image_fields_are_read_only(sink_template):
    i = new_instance(sink_template)
    with pytest.raises(MetaforgeError) as exc:
        set_value(sink_template, i, "logo", Literal("https://ex.org/new.png"))
    assert exc.value.code == "READ_ONLY_FIELD"


def test_unknown_path(fig2_template):
    i = new_instance(fig2_template)
    with pytest.raises(MetaforgeError) as exc:
        set_value(fig2_template, i, "nope", Literal("x"))
    assert exc.value.code == "UNKNOWN_PATH"


def test_checkbox_accepts_selection_list(sink_template):
    i = new_instance(sink_template)
    i = set_value(sink_template, i, "tags", [Literal("pilot"), Literal("replication")])
    assert [v.value for v in i.values["tags"]] == ["pilot", "replication"]


def test_multiple_values_on_non_checkbox_rejected(sink_template):
    i = new_instance(sink_template)
    with pytest.raises(MetaforgeError) as exc:
        set_value(sink_template, i, "title", [Literal("a"), Literal("b")])
    assert exc.value.code == "TYPE_MISMATCH"


def test_set_value_requires_index_on_multi(psych_template):
    i = new_instance(psych_template)
    with pytest.raises(MetaforgeError):
        set_value(psych_template, i, "variable_measured", Literal("RT"))
    i = set_value(psych_template, i, "variable_measured[0]", Literal("RT"))
    assert i.values["variable_measured[0]"] == (Literal("RT", "xsd:string"),)


def test_set_value_frame_property(sink_template):
    rng = random.Random(7)
    i = instance_gen.build_random_instance(sink_template, rng)
    slots = [s.path for s in walk_instance(sink_template, i) if s.kind == "slot"]
    for _ in range(25):
        target = rng.choice(slots)
        node_path = [s for s in walk_instance(sink_template, i)
                     if s.kind == "slot" and s.path == target][0]
        value = instance_gen.random_value(node_path.node, rng)
        if value is None or node_path.node.field_type.value in ("image", "video"):
            continue
        before = dict(i.values)
        i = set_value(sink_template, i, target, value)
        for path, slot in before.items():
            if path != target:
                assert i.values[path] == slot, f"{path} changed when setting {target}"


def test_updated_at_refreshes(fig2_template):
    i = new_instance(fig2_template)
    i2 = set_value(fig2_template, i, "lab_id", Literal("L1"))
    assert i2.updated_at >= i.updated_at
    assert i2.created_at == i.created_at
