"""Domain model for machine-actionable metadata templates.

A template is an ordered tree of fields and elements. Everything here is
immutable after parsing; parsing and validation are pure functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum

from metaforge.values import FieldValue

KEY_RE = re.compile(r"^[a-z][a-z0-9_]*$")
SEMVER_RE = re.compile(r"^\d+\.\d+\.\d+(?:-[0-9A-Za-z.-]+)?(?:\+[0-9A-Za-z.-]+)?$")

LanguageMap = dict[str, str]


class NodeKind(str, Enum):
    FIELD = "field"
    ELEMENT = "element"


class FieldType(str, Enum):
    TEXT = "text"
    NUMBER = "number"
    TEMPORAL = "temporal"
    BOOLEAN = "boolean"
    CHECKBOX = "checkbox"
    LIST = "list"
    LINK = "link"
    CONTROLLED_TERM = "controlled_term"
    EXTERNAL_AUTHORITY = "external_authority"
    IMAGE = "image"
    VIDEO = "video"


# Render-only field types: their value is a content IRI and they are never required.
RENDER_ONLY_TYPES = (FieldType.IMAGE, FieldType.VIDEO)


class SourceType(str, Enum):
    ONTOLOGY = "ontology"
    BRANCH = "branch"
    VALUE_SET = "value_set"


class Granularity(str, Enum):
    DATE = "date"
    DATETIME = "datetime"
    TIME = "time"


class NumberKind(str, Enum):
    INTEGER = "integer"
    DECIMAL = "decimal"


@dataclass(frozen=True)
class Cardinality:
    """Allowed repetition count; max=None means unbounded."""

    min: int = 1
    max: int | None = 1

    @property
    def is_multi(self) -> bool:
        return self.max is None or self.max > 1

    def contains(self, count: int) -> bool:
        if count < self.min:
            return False
        return self.max is None or count <= self.max


@dataclass(frozen=True)
class TermSourceSpec:
    source_type: SourceType
    acronym: str
    root_iri: str | None = None       # branch only
    value_set_id: str | None = None   # value_set only


@dataclass(frozen=True)
class LiteralOption:
    label: str
    iri: str | None = None


@dataclass(frozen=True)
class Constraints:
    """Per-field-type constraints; only the slots for the field's type are set."""

    min_length: int | None = None
    max_length: int | None = None
    regex: str | None = None                      # anchored whole-string match
    number_kind: NumberKind = NumberKind.DECIMAL
    min_value: Decimal | None = None
    max_value: Decimal | None = None
    granularity: Granularity = Granularity.DATE
    literals: tuple[LiteralOption, ...] = ()
    sources: tuple[TermSourceSpec, ...] = ()
    authority: str | None = None


@dataclass(frozen=True)
class TemplateNode:
    kind: NodeKind
    key: str
    label: LanguageMap = field(default_factory=dict)
    help: LanguageMap = field(default_factory=dict)
    cardinality: Cardinality = Cardinality()
    hidden: bool = False
    field_type: FieldType | None = None           # fields only
    required: bool = False                        # fields only
    default: FieldValue | None = None             # fields only
    constraints: Constraints | None = None        # fields only
    children: tuple[TemplateNode, ...] = ()       # elements only

    @property
    def is_field(self) -> bool:
        return self.kind is NodeKind.FIELD


@dataclass(frozen=True)
class Template:
    id: str
    name: LanguageMap
    description: LanguageMap
    version: str
    property_context: dict[str, str]
    children: tuple[TemplateNode, ...]
    extras: dict = field(default_factory=dict)    # unknown top-level keys, preserved

    def property_iri(self, key: str) -> str:
        return self.property_context.get(key, f"{self.id}#{key}")


@dataclass(frozen=True)
class TemplateIssue:
    severity: str  # error | warning
    path: str
    code: str
    message: str

    def to_dict(self) -> dict:
        return {"severity": self.severity, "path": self.path,
                "code": self.code, "message": self.message}


@dataclass(frozen=True)
class FallbackDiagnostic:
    """Records one label-language fallback: requested tag -> served tag or node key."""

    requested_tag: str
    served_tag: str | None = None
    key: str | None = None

    def to_dict(self) -> dict:
        out: dict = {"requestedTag": self.requested_tag}
        if self.served_tag is not None:
            out["servedTag"] = self.served_tag
        if self.key is not None:
            out["key"] = self.key
        return out


def localized_label(node: TemplateNode, chain: list[str]) -> tuple[str, list[FallbackDiagnostic]]:
    """Resolve a display label along a language chain.

    Falls back: requested chain -> `en` -> lexicographically smallest
    available tag -> the node key. Never returns an empty string. One
    diagnostic is appended per requested tag that could not be served.
    """
    if not chain:
        raise ValueError("language chain must be non-empty")
    labels = {tag.lower(): text for tag, text in node.label.items() if text}
    served_tag: str | None = None
    missed: list[str] = []
    for tag in chain:
        tag_l = tag.lower()
        if tag_l in labels:
            served_tag = tag_l
            break
        missed.append(tag)
    if served_tag is None and "en" in labels:
        served_tag = "en"
    if served_tag is None and labels:
        served_tag = min(labels)
    if served_tag is None:
        text = node.key
        diagnostics = [FallbackDiagnostic(requested_tag=t, key=node.key) for t in missed]
        return text, diagnostics
    diagnostics = [FallbackDiagnostic(requested_tag=t, served_tag=served_tag) for t in missed]
    return labels[served_tag], diagnostics


def walk(nodes: tuple[TemplateNode, ...], prefix: str = ""):
    """Depth-first (node_path, node) pairs in declared order."""
    for node in nodes:
        path = f"{prefix}/{node.key}" if prefix else node.key
        yield path, node
        if node.children:
            yield from walk(node.children, path)
