from __future__ import annotations

import random

import pytest

from metaforge.errors import MetaforgeError
from metaforge.instance import new_instance, set_value, walk_instance
from metaforge.report import generate_report, render_report_figure, render_report_text
from metaforge.values import EMPTY, Literal

import instance_gen


def _fig2_four_of_five(t):
    """Fig-style state: the four first fields completed, analyte_class empty."""
    i = new_instance(t)
    i = set_value(t, i, "parent_sample_id", Literal("HBM296.DXLM.434"))
    i = set_value(t, i, "lab_id", Literal("3432_ftR_RNA_A2"))
    i = set_value(t, i, "preparation_protocol_doi",
                  Literal("https://dx.doi.org/10.17504/protocols.io.4r3l224p3l1y/v1"))
    # dataset_type already holds its default "RNAseq"
    return i


def test_fully_empty_completeness_zero(fig2_template):
    i = new_instance(fig2_template)
    i = set_value(fig2_template, i, "dataset_type", EMPTY)
    report = generate_report(fig2_template, i)
    assert report.completeness == 0.0
    assert report.required_filled == 0
    assert report.required_total == 5
    assert report.optional_total == 1


def test_four_of_five_is_point_eight(fig2_template):
    report = generate_report(fig2_template, _fig2_four_of_five(fig2_template))
    assert report.required_filled == 4
    assert report.required_total == 5
    assert report.completeness == 0.8


def test_unresolved_term_status(contacts_template):
    i = new_instance(contacts_template)
    i = set_value(contacts_template, i, "pi", Literal("Martin O'Connor"))
    report = generate_report(contacts_template, i)
    statuses = {s.path: s.status for s in report.field_statuses}
    assert statuses["pi"] == "unresolved_term"


def test_statuses_partition_all_slots(sink_template):
    rng = random.Random(21)
    i = instance_gen.build_random_instance(sink_template, rng)
    report = generate_report(sink_template, i)
    slot_paths = [s.path for s in walk_instance(sink_template, i) if s.kind == "slot"]
    assert [s.path for s in report.field_statuses] == slot_paths
    assert all(s.status in ("complete", "missing", "invalid", "unresolved_term")
               for s in report.field_statuses)


def test_invalid_iff_error_issue(fig2_template):
    i = new_instance(fig2_template)
    i = set_value(fig2_template, i, "analyte_class", Literal("Granite"))
    report = generate_report(fig2_template, i)
    statuses = {s.path: s.status for s in report.field_statuses}
    error_paths = {x.path for x in report.issues if x.severity == "error"}
    for s in report.field_statuses:
        assert (s.status == "invalid") == (s.path in error_paths)
    assert statuses["analyte_class"] == "invalid"


def test_counts_consistent(fig2_template):
    report = generate_report(fig2_template, _fig2_four_of_five(fig2_template))
    by_status = {}
    for s in report.field_statuses:
        by_status[s.status] = by_status.get(s.status, 0) + 1
    assert report.invalid == by_status.get("invalid", 0)
    assert report.required_filled + report.optional_filled == by_status.get("complete", 0)


def test_completeness_monotone_under_random_fill(fig2_template):
    rng = random.Random(17)
    for _round in range(10):
        i = new_instance(fig2_template)
        i = set_value(fig2_template, i, "dataset_type", EMPTY)
        fills = [
            ("parent_sample_id", Literal("HBM296.DXLM.434")),
            ("lab_id", Literal("L1")),
            ("preparation_protocol_doi", Literal("https://doi.org/10.1/x")),
            ("dataset_type", Literal("RNAseq")),
            ("analyte_class", Literal("DNA")),
            ("acquisition_instrument_model", Literal("NovaSeq 6000")),
        ]
        rng.shuffle(fills)
        last = generate_report(fig2_template, i).completeness
        for path, value in fills:
            i = set_value(fig2_template, i, path, value)
            current = generate_report(fig2_template, i).completeness
            assert current >= last
            last = current
        assert last == 1.0


def test_fingerprint_mismatch(fig2_template, psych_template):
    with pytest.raises(MetaforgeError) as exc:
        generate_report(fig2_template, new_instance(psych_template))
    assert exc.value.code == "FINGERPRINT_MISMATCH"


def test_text_report_shape(fig2_template):
    report = generate_report(fig2_template, _fig2_four_of_five(fig2_template))
    text = render_report_text(report)
    lines = text.splitlines()
    assert lines[0] == "Quality report: https://metaforge.example/templates/rnaseq-assay"
    detail = [line for line in lines[1:-1]]
    assert detail == ["  analyte_class: missing",
                      "  acquisition_instrument_model: missing"]
    assert lines[-1] == ("Required 4/5 filled, optional 0/1 filled, "
                         "0 invalid; completeness 0.80")


def test_text_report_all_complete_has_no_detail_lines(empty_template):
    report = generate_report(empty_template, new_instance(empty_template))
    lines = render_report_text(report).splitlines()
    assert len(lines) == 2  # header + totals
    assert "completeness 1.00" in lines[1]


def test_text_report_byte_identical_across_calls(fig2_template):
    i = _fig2_four_of_five(fig2_template)
    a = render_report_text(generate_report(fig2_template, i))
    b = render_report_text(generate_report(fig2_template, i))
    assert a == b


def test_report_figure_written(tmp_path, fig2_template):
    report = generate_report(fig2_template, _fig2_four_of_five(fig2_template))
    out = tmp_path / "report.png"
    render_report_figure(report, str(out))
    assert out.exists()
    assert out.stat().st_size > 1000
