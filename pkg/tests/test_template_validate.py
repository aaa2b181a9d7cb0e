from __future__ import annotations

from dataclasses import replace

import pytest

from metaforge.template import parse_template, validate_template
from metaforge.template.model import Cardinality


def _mutate_child(t, key: str, **changes):
    children = tuple(replace(n, **changes) if n.key == key else n for n in t.children)
    return replace(t, children=children)


def test_all_fixture_templates_are_clean(templates):
    for name, t in templates.items():
        assert validate_template(t) == [], name


def test_empty_template_is_clean(empty_template):
    assert validate_template(empty_template) == []


def test_duplicate_sibling_keys(fig2_template):
    first = fig2_template.children[0]
    clone = replace(fig2_template.children[1], key=first.key)
    broken = replace(fig2_template, children=(first, clone) + fig2_template.children[2:])
    issues = validate_template(broken)
    assert [x.code for x in issues] == ["DUPLICATE_KEY"]
    assert issues[0].severity == "error"
    assert issues[0].path == first.key


def test_empty_term_sources(contacts_template):
    keywords = next(n for n in contacts_template.children if n.key == "keywords")
    broken = _mutate_child(contacts_template, "keywords",
                           constraints=replace(keywords.constraints, sources=()))
    issues = validate_template(broken)
    assert [x.code for x in issues] == ["EMPTY_TERM_SOURCES"]


def test_empty_literals(fig2_template):
    analyte = next(n for n in fig2_template.children if n.key == "analyte_class")
    broken = _mutate_child(fig2_template, "analyte_class",
                           constraints=replace(analyte.constraints, literals=()))
    issues = validate_template(broken)
    assert [x.code for x in issues] == ["EMPTY_LITERALS"]


def test_bad_regex():
    doc = {"id": "https://ex.org/t/x", "children": [
        {"kind": "field", "key": "code", "label": {"en": "Code"}, "fieldType": "text",
         "constraints": {"regex": "(unclosed"}}]}
    issues = validate_template(parse_template(doc))
    assert [x.code for x in issues] == ["BAD_REGEX"]


def test_bad_template_iri(fig2_template):
    broken = replace(fig2_template, id="not an iri")
    codes = {x.code for x in validate_template(broken)}
    assert codes == {"BAD_IRI"}


def test_bad_cardinality(fig2_template):
    broken = _mutate_child(fig2_template, "lab_id", cardinality=Cardinality(3, 2))
    issues = validate_template(broken)
    assert [x.code for x in issues] == ["BAD_CARDINALITY"]
    assert issues[0].path == "lab_id"


def test_bad_key_grammar(fig2_template):
    children = tuple(replace(n, key="Lab-ID") if n.key == "lab_id" else n
                     for n in fig2_template.children)
    broken = replace(fig2_template, children=children)
    codes = [x.code for x in validate_template(broken)]
    assert "SCHEMA_VIOLATION" in codes


def test_required_render_only_field(sink_template):
    broken = _mutate_child(sink_template, "logo", required=True)
    issues = [x for x in validate_template(broken) if x.path == "logo"]
    assert [x.code for x in issues] == ["SCHEMA_VIOLATION"]
    assert issues[0].severity == "error"


def test_hidden_required_is_a_warning(sink_template):
    broken = _mutate_child(sink_template, "internal_tracking_id", required=True)
    issues = [x for x in validate_template(broken) if x.path == "internal_tracking_id"]
    assert len(issues) == 1
    assert issues[0].severity == "warning"


def test_issues_sorted_by_path_then_code(fig2_template):
    analyte = next(n for n in fig2_template.children if n.key == "analyte_class")
    broken = replace(fig2_template, id="nope",
                     children=tuple(
                         replace(n, cardinality=Cardinality(5, 2)) if n.key == "lab_id"
                         else n for n in fig2_template.children))
    broken = _mutate_child(broken, "analyte_class",
                           constraints=replace(analyte.constraints, literals=()))
    issues = validate_template(broken)
    keys = [(x.path, x.code) for x in issues]
    assert keys == sorted(keys)


@pytest.mark.parametrize("version,expect_warning", [
    ("1.0.0", False), ("2.1.3-rc.1", False), ("v1", True), ("1.0", True)])
def test_version_semver_check(empty_template, version, expect_warning):
    t = replace(empty_template, version=version)
    warnings = [x for x in validate_template(t) if x.severity == "warning"]
    assert bool(warnings) == expect_warning
