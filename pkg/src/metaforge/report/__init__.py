"""Quality reporting: structured reports, text rendering, and figures."""

from metaforge.report.figures import render_report_figure
from metaforge.report.quality import (
    FieldStatus,
    QualityReport,
    generate_report,
    render_report_text,
)

__all__ = ["FieldStatus", "QualityReport", "generate_report",
           "render_report_text", "render_report_figure"]
