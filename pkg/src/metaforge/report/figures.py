"""Render a quality report as a figure file next to the text/JSON output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from metaforge.report.quality import QualityReport

_STATUS_ORDER = ("complete", "missing", "invalid", "unresolved_term")
_STATUS_COLORS = {
    "complete": "#2a9d3c",
    "missing": "#b0b0b0",
    "invalid": "#d03a2b",
    "unresolved_term": "#e6a400",
}


def render_report_figure(report: QualityReport, path: str) -> None:
    """Write a field-status summary chart (format chosen by file extension)."""
    counts = {status: 0 for status in _STATUS_ORDER}
    for fs in report.field_statuses:
        counts[fs.status] = counts.get(fs.status, 0) + 1

    fig, ax = plt.subplots(figsize=(6.4, 2.8))
    labels = [s.replace("_", " ") for s in _STATUS_ORDER]
    values = [counts[s] for s in _STATUS_ORDER]
    bars = ax.barh(labels, values,
                   color=[_STATUS_COLORS[s] for s in _STATUS_ORDER])
    ax.bar_label(bars, padding=3)
    ax.invert_yaxis()
    ax.set_xlabel("fields")
    ax.set_xlim(0, max(values + [1]) * 1.2)
    ax.set_title(f"completeness {report.completeness:.0%} "
                 f"({report.required_filled}/{report.required_total} required)")
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
