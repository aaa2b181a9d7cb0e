"""Lexical grammars for literal values.

Numbers are checked as text and compared as exact decimals, never floats.
Temporal values are ISO 8601; the granularity picks the grammar.
"""

from __future__ import annotations

import re
from datetime import date, datetime, time
from decimal import Decimal

from metaforge.template.model import Constraints, FieldType, Granularity, NumberKind
from metaforge.iri import is_absolute_iri

INTEGER_RE = re.compile(r"^[+-]?\d+$")
DECIMAL_RE = re.compile(r"^[+-]?\d+(?:\.\d+)?$")
DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
DATETIME_RE = re.compile(
    r"^\d{4}-\d{2}-\d{2}[Tt]\d{2}:\d{2}:\d{2}(?:\.\d+)?(?:[Zz]|[+-]\d{2}:\d{2})$")
TIME_RE = re.compile(r"^\d{2}:\d{2}(?::\d{2})?$")


def _valid_date(text: str) -> bool:
    try:
        date.fromisoformat(text)
        return True
    except ValueError:
        return False


def _valid_datetime(text: str) -> bool:
    normalized = text.replace("z", "Z").replace("Z", "+00:00").replace("t", "T")
    try:
        datetime.fromisoformat(normalized)
        return True
    except ValueError:
        return False


def _valid_time(text: str) -> bool:
    try:
        time.fromisoformat(text)
        return True
    except ValueError:
        return False


def grammar_problem(field_type: FieldType, constraints: Constraints | None,
                    value: str) -> str | None:
    """Why `value` does not fit the field type's lexical grammar, or None."""
    if field_type is FieldType.NUMBER:
        kind = constraints.number_kind if constraints else NumberKind.DECIMAL
        pattern = INTEGER_RE if kind is NumberKind.INTEGER else DECIMAL_RE
        if not pattern.match(value):
            return f"not a valid {kind.value} literal"
        return None
    if field_type is FieldType.TEMPORAL:
        gran = constraints.granularity if constraints else Granularity.DATE
        if gran is Granularity.DATE:
            if not (DATE_RE.match(value) and _valid_date(value)):
                return "not a valid ISO 8601 date (YYYY-MM-DD)"
        elif gran is Granularity.DATETIME:
            if not (DATETIME_RE.match(value) and _valid_datetime(value)):
                return "not a valid RFC 3339 date-time"
        else:
            if not (TIME_RE.match(value) and _valid_time(value)):
                return "not a valid time (HH:MM[:SS])"
        return None
    if field_type is FieldType.BOOLEAN:
        if value not in ("true", "false"):
            return "boolean literals must be 'true' or 'false'"
        return None
    if field_type in (FieldType.LINK, FieldType.IMAGE, FieldType.VIDEO):
        if not is_absolute_iri(value):
            return "not an absolute IRI"
        return None
    return None


def as_decimal(value: str) -> Decimal:
    return Decimal(value)
