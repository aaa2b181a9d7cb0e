"""Normalized suggestion records returned by the gateway."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AuthoritySuggestion:
    source: str          # orcid | ror | comptox
    id: str              # canonical IRI
    label: str
    detail: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"source": self.source, "id": self.id, "label": self.label,
                "detail": dict(self.detail)}


@dataclass(frozen=True)
class TermSuggestion:
    iri: str
    label: str
    synonyms: tuple[str, ...] = ()
    source_acronym: str = ""

    def to_dict(self) -> dict:
        return {"iri": self.iri, "label": self.label,
                "synonyms": list(self.synonyms), "sourceAcronym": self.source_acronym}
