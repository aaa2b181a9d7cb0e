"""Instance validation against a template.

Findings are returned, deterministic, and path-sorted. Draft mode (strict
False) downgrades required-missing to warnings so a half-finished form is
a representable state; everything else keeps its severity.

Free text on controlled_term / external_authority fields is deliberately
not a validation finding: the quality report tracks those slots as
unresolved terms.
"""

from __future__ import annotations

import re

from metaforge import paths
from metaforge.authorities import matches_shape
from metaforge.errors import MetaforgeError
from metaforge.instance.engine import (
    MetadataInstance,
    ValidationIssue,
    walk_instance,
)
from metaforge.iri import is_absolute_iri
from metaforge.lexical import as_decimal, grammar_problem
from metaforge.template.model import FieldType, Template, TemplateNode
from metaforge.template.parser import literal_datatype, template_fingerprint
from metaforge.values import Authority, EmptyValue, Literal, Term, is_empty


def check_fingerprint(t: Template, i: MetadataInstance) -> None:
    expected = template_fingerprint(t)
    if i.template_fingerprint != expected:
        raise MetaforgeError(
            "FINGERPRINT_MISMATCH",
            f"instance was built against fingerprint {i.template_fingerprint[:12]}..., "
            f"template is {expected[:12]}...")


def _check_literal(node: TemplateNode, path: str, value: Literal,
                   out: list[ValidationIssue]) -> None:
    ft = node.field_type
    assert ft is not None
    cs = node.constraints

    if ft in (FieldType.CONTROLLED_TERM, FieldType.EXTERNAL_AUTHORITY):
        return  # unresolved free text; surfaced by the quality report

    problem = grammar_problem(ft, cs, value.value)
    if problem:
        out.append(ValidationIssue("error", path, "TYPE_MISMATCH", problem,
                                   expected=literal_datatype(ft, cs), actual=value.value))
        return
    expected_dt = literal_datatype(ft, cs)
    if value.datatype != expected_dt:
        out.append(ValidationIssue("error", path, "TYPE_MISMATCH",
                                   f"datatype {value.datatype} does not match field",
                                   expected=expected_dt, actual=value.datatype))
        return

    if ft is FieldType.TEXT and cs is not None:
        length = len(value.value)
        if cs.min_length is not None and length < cs.min_length:
            out.append(ValidationIssue("error", path, "RANGE_VIOLATION",
                                       f"shorter than minLength {cs.min_length}",
                                       expected=f">= {cs.min_length} chars", actual=str(length)))
        if cs.max_length is not None and length > cs.max_length:
            out.append(ValidationIssue("error", path, "RANGE_VIOLATION",
                                       f"longer than maxLength {cs.max_length}",
                                       expected=f"<= {cs.max_length} chars", actual=str(length)))
        if cs.regex is not None:
            try:
                if not re.fullmatch(cs.regex, value.value):
                    out.append(ValidationIssue("error", path, "PATTERN_MISMATCH",
                                               "value does not match the field pattern",
                                               expected=cs.regex, actual=value.value))
            except re.error:
                pass  # unparseable pattern is a template issue, reported there
    elif ft is FieldType.NUMBER and cs is not None:
        number = as_decimal(value.value)
        if cs.min_value is not None and number < cs.min_value:
            out.append(ValidationIssue("error", path, "RANGE_VIOLATION",
                                       f"below minimum {cs.min_value}",
                                       expected=f">= {cs.min_value}", actual=value.value))
        if cs.max_value is not None and number > cs.max_value:
            out.append(ValidationIssue("error", path, "RANGE_VIOLATION",
                                       f"above maximum {cs.max_value}",
                                       expected=f"<= {cs.max_value}", actual=value.value))
    elif ft in (FieldType.LIST, FieldType.CHECKBOX) and cs is not None:
        allowed = {opt.label for opt in cs.literals}
        if value.value not in allowed:
            out.append(ValidationIssue("error", path, "NOT_IN_ALLOWED_VALUES",
                                       f"{value.value!r} is not one of the allowed values",
                                       actual=value.value))


def _check_value(node: TemplateNode, path: str, value, out: list[ValidationIssue]) -> None:
    ft = node.field_type
    assert ft is not None
    if isinstance(value, Literal):
        _check_literal(node, path, value, out)
    elif isinstance(value, Term):
        if ft is not FieldType.CONTROLLED_TERM:
            out.append(ValidationIssue("error", path, "TERM_SOURCE_MISMATCH",
                                       "term values only fit controlled_term fields"))
        if not is_absolute_iri(value.iri) or not value.label:
            out.append(ValidationIssue("error", path, "INVALID_IDENTIFIER",
                                       "terms need an absolute IRI and a label",
                                       actual=value.iri))
    elif isinstance(value, Authority):
        if ft is not FieldType.EXTERNAL_AUTHORITY:
            out.append(ValidationIssue("error", path, "TERM_SOURCE_MISMATCH",
                                       "authority values only fit external_authority fields"))
        else:
            expected = node.constraints.authority if node.constraints else None
            if expected and value.source != expected:
                out.append(ValidationIssue("error", path, "TERM_SOURCE_MISMATCH",
                                           f"field expects {expected} identifiers",
                                           expected=expected, actual=value.source))
        if not value.label or not matches_shape(value.source, value.id):
            out.append(ValidationIssue("error", path, "INVALID_IDENTIFIER",
                                       f"not a canonical {value.source} identifier",
                                       actual=value.id))


def validate_instance(t: Template, i: MetadataInstance,
                      strict: bool = True) -> list[ValidationIssue]:
    check_fingerprint(t, i)
    out: list[ValidationIssue] = []
    visited: set[str] = set()

    for step in walk_instance(t, i):
        if step.kind == "repeat":
            c = step.node.cardinality
            if step.count < c.min:
                out.append(ValidationIssue("error", step.path, "CARDINALITY_UNDERFLOW",
                                           f"{step.count} repetitions, minimum is {c.min}",
                                           expected=f">= {c.min}", actual=str(step.count)))
            if c.max is not None and step.count > c.max:
                out.append(ValidationIssue("error", step.path, "CARDINALITY_OVERFLOW",
                                           f"{step.count} repetitions, maximum is {c.max}",
                                           expected=f"<= {c.max}", actual=str(step.count)))
            continue
        if step.kind != "slot":
            continue
        node, path = step.node, step.path
        visited.add(path)
        slot = i.values.get(path, (EmptyValue(),) if node.field_type is not FieldType.CHECKBOX else ())
        filled = [v for v in slot if not is_empty(v)]
        if node.required and not filled:
            severity = "error" if strict else "warning"
            out.append(ValidationIssue(severity, path, "REQUIRED_MISSING",
                                       "required field has no value"))
        if node.field_type is not FieldType.CHECKBOX and len(slot) > 1:
            out.append(ValidationIssue("error", path, "CARDINALITY_OVERFLOW",
                                       "single slot holds multiple values",
                                       expected="1", actual=str(len(slot))))
        for value in filled:
            _check_value(node, path, value, out)

    # values at paths the template walk never reached
    for path in i.values:
        if path not in visited and not i.slot_is_empty(path):
            out.append(ValidationIssue("warning", path, "UNKNOWN_FIELD",
                                       "value does not correspond to a template field"))
    out.extend(i.parse_warnings)

    out.sort(key=lambda issue: (paths.sort_key(issue.path) if issue.path else ((),),
                                issue.code, issue.message))
    return out


def has_errors(issues: list[ValidationIssue]) -> bool:
    return any(issue.severity == "error" for issue in issues)
