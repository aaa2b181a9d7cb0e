"""Data-quality reports: per-field statuses, counts, and a completeness score.

Statuses partition the field slots:
  invalid          an error-severity validation issue exists at the path
  unresolved_term  a controlled_term / external_authority slot holds free text
  missing          the slot is empty
  complete         a valid, non-empty value

Completeness is requiredFilled / requiredTotal over required slots only
(1.0 when a template has no required slots); each materialized repetition
counts as one slot. Validation runs in draft mode so that empty required
slots read as `missing` rather than `invalid`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone

from metaforge.instance.engine import MetadataInstance, ValidationIssue, walk_instance
from metaforge.instance.validation import check_fingerprint, validate_instance
from metaforge.template.model import FieldType, Template
from metaforge.values import Literal, is_empty

_SEMANTIC_TYPES = (FieldType.CONTROLLED_TERM, FieldType.EXTERNAL_AUTHORITY)


@dataclass(frozen=True)
class FieldStatus:
    path: str
    status: str  # complete | missing | invalid | unresolved_term

    def to_dict(self) -> dict:
        return {"path": self.path, "status": self.status}


@dataclass(frozen=True)
class QualityReport:
    template_id: str
    instance_ref: str | None
    generated_at: str
    field_statuses: tuple[FieldStatus, ...]
    issues: tuple[ValidationIssue, ...]
    required_total: int
    required_filled: int
    optional_total: int
    optional_filled: int
    invalid: int
    completeness: float

    def to_dict(self) -> dict:
        return {
            "templateId": self.template_id,
            "instanceRef": self.instance_ref,
            "generatedAt": self.generated_at,
            "fieldStatuses": [s.to_dict() for s in self.field_statuses],
            "issues": [x.to_dict() for x in self.issues],
            "counts": {
                "requiredTotal": self.required_total,
                "requiredFilled": self.required_filled,
                "optionalTotal": self.optional_total,
                "optionalFilled": self.optional_filled,
                "invalid": self.invalid,
            },
            "completeness": self.completeness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def generate_report(t: Template, i: MetadataInstance,
                    instance_ref: str | None = None) -> QualityReport:
    check_fingerprint(t, i)
    issues = validate_instance(t, i, strict=False)
    error_paths = {x.path for x in issues if x.severity == "error"}

    statuses: list[FieldStatus] = []
    required_total = required_filled = optional_total = optional_filled = invalid = 0
    for step in walk_instance(t, i):
        if step.kind != "slot":
            continue
        node, path = step.node, step.path
        slot = i.values.get(path, ())
        filled = [v for v in slot if not is_empty(v)]
        if path in error_paths:
            status = "invalid"
            invalid += 1
        elif not filled:
            status = "missing"
        elif node.field_type in _SEMANTIC_TYPES and any(
                isinstance(v, Literal) for v in filled):
            status = "unresolved_term"
        else:
            status = "complete"
        statuses.append(FieldStatus(path, status))
        if node.required:
            required_total += 1
            if status == "complete":
                required_filled += 1
        else:
            optional_total += 1
            if status == "complete":
                optional_filled += 1

    completeness = required_filled / required_total if required_total else 1.0
    return QualityReport(
        template_id=t.id,
        instance_ref=instance_ref,
        generated_at=datetime.now(timezone.utc).isoformat(),
        field_statuses=tuple(statuses),
        issues=tuple(issues),
        required_total=required_total,
        required_filled=required_filled,
        optional_total=optional_total,
        optional_filled=optional_filled,
        invalid=invalid,
        completeness=completeness,
    )


def render_report_text(report: QualityReport) -> str:
    """Stable line-oriented summary; generatedAt is deliberately excluded so
    two reports over the same state render byte-identically."""
    lines = [f"Quality report: {report.template_id}"]
    for status in report.field_statuses:
        if status.status != "complete":
            lines.append(f"  {status.path}: {status.status}")
    lines.append(
        f"Required {report.required_filled}/{report.required_total} filled, "
        f"optional {report.optional_filled}/{report.optional_total} filled, "
        f"{report.invalid} invalid; completeness {report.completeness:.2f}")
    return "\n".join(lines) + "\n"
