"""Instance engine: build, validate, serialize, and render metadata records."""

from metaforge.instance.engine import (
    MetadataInstance,
    ValidationIssue,
    add_repetition,
    field_repetition_count,
    new_instance,
    remove_repetition,
    repetition_count,
    set_value,
    walk_instance,
)
from metaforge.instance.jsonld import (
    parse_instance,
    serialize_jsonld,
    serialize_jsonld_text,
)
from metaforge.instance.render import MODES, RenderPlan, Widget, render_plan
from metaforge.instance.validation import has_errors, validate_instance

__all__ = [
    "MetadataInstance", "ValidationIssue", "add_repetition", "field_repetition_count",
    "new_instance", "remove_repetition", "repetition_count", "set_value",
    "walk_instance", "parse_instance", "serialize_jsonld", "serialize_jsonld_text",
    "MODES", "RenderPlan", "Widget", "render_plan", "has_errors", "validate_instance",
]
