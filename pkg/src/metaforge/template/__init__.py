"""Machine-actionable template model: parse, validate, resolve, fingerprint."""

from metaforge.template.model import (
    Cardinality,
    Constraints,
    FallbackDiagnostic,
    FieldType,
    Granularity,
    LiteralOption,
    NodeKind,
    NumberKind,
    SourceType,
    Template,
    TemplateIssue,
    TemplateNode,
    TermSourceSpec,
    localized_label,
    walk,
)
from metaforge.template.parser import (
    canonical_json,
    literal_datatype,
    parse_template,
    serialize_template,
    template_fingerprint,
)
from metaforge.template.validator import resolve_node, validate_template

__all__ = [
    "Cardinality", "Constraints", "FallbackDiagnostic", "FieldType", "Granularity",
    "LiteralOption", "NodeKind", "NumberKind", "SourceType", "Template",
    "TemplateIssue", "TemplateNode", "TermSourceSpec", "localized_label", "walk",
    "canonical_json", "literal_datatype", "parse_template", "serialize_template",
    "template_fingerprint", "resolve_node", "validate_template",
]
