"""Field values: typed literals, controlled terms, authority identifiers.

Values are immutable. Literal datatypes use the prefixed `xsd:` form; the
JSON-LD @context binds the prefix to the full XML Schema namespace.
"""

from __future__ import annotations

from dataclasses import dataclass

XSD_STRING = "xsd:string"
XSD_INTEGER = "xsd:integer"
XSD_DECIMAL = "xsd:decimal"
XSD_DATE = "xsd:date"
XSD_DATETIME = "xsd:dateTime"
XSD_TIME = "xsd:time"
XSD_BOOLEAN = "xsd:boolean"
XSD_ANYURI = "xsd:anyURI"

AUTHORITY_SOURCES = ("orcid", "ror", "comptox")


@dataclass(frozen=True)
class Literal:
    value: str
    datatype: str = XSD_STRING


@dataclass(frozen=True)
class Term:
    """Controlled-vocabulary value; always carries both IRI and label."""

    iri: str
    label: str


@dataclass(frozen=True)
class Authority:
    """Persistent identifier from an external registry."""

    source: str
    id: str
    label: str


@dataclass(frozen=True)
class EmptyValue:
    pass


EMPTY = EmptyValue()

FieldValue = Literal | Term | Authority | EmptyValue


def is_empty(value: FieldValue) -> bool:
    return isinstance(value, EmptyValue)


def value_to_plain(value: FieldValue) -> object:
    """Stable dict form used in render plans and reports."""
    if isinstance(value, Literal):
        return {"kind": "literal", "value": value.value, "datatype": value.datatype}
    if isinstance(value, Term):
        return {"kind": "term", "iri": value.iri, "label": value.label}
    if isinstance(value, Authority):
        return {"kind": "authority", "source": value.source, "id": value.id,
                "label": value.label}
    return None
