"""Local term index standing in for a live ontology repository.

Vocabulary files are JSON arrays of
`{iri, label, synonyms, sourceAcronym, parentIri?}`. Branch sources are
restricted to the recorded descendants of their root IRI (transitive,
root excluded). Ranking is a fixed tier order — exact label, label prefix,
label substring, synonym match — with ties broken lexicographically by
label, so results are a total order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from metaforge.errors import GatewayError
from metaforge.gateway.models import TermSuggestion
from metaforge.template.model import SourceType, TermSourceSpec

DEFAULT_VOCABULARY = Path(__file__).parent / "fixture_data" / "vocabulary.json"


@dataclass(frozen=True)
class VocabEntry:
    iri: str
    label: str
    synonyms: tuple[str, ...]
    source_acronym: str
    parent_iri: str | None = None

    def to_suggestion(self) -> TermSuggestion:
        return TermSuggestion(self.iri, self.label, self.synonyms, self.source_acronym)


class OntologyIndex:
    def __init__(self, entries: list[VocabEntry]):
        self._by_acronym: dict[str, list[VocabEntry]] = {}
        for entry in entries:
            self._by_acronym.setdefault(entry.source_acronym, []).append(entry)

    @classmethod
    def from_files(cls, *paths: Path | str) -> OntologyIndex:
        entries: list[VocabEntry] = []
        for path in paths or (DEFAULT_VOCABULARY,):
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
            for item in raw:
                entries.append(VocabEntry(
                    iri=item["iri"],
                    label=item["label"],
                    synonyms=tuple(item.get("synonyms", [])),
                    source_acronym=item["sourceAcronym"],
                    parent_iri=item.get("parentIri"),
                ))
        return cls(entries)

    def acronyms(self) -> list[str]:
        return sorted(self._by_acronym)

    def _entries_for(self, spec: TermSourceSpec) -> list[VocabEntry]:
        # Value sets are looked up by their set id; ontologies and branches
        # by the repository acronym.
        key = spec.value_set_id if spec.source_type is SourceType.VALUE_SET \
            and spec.value_set_id else spec.acronym
        entries = self._by_acronym.get(key)
        if entries is None:
            raise GatewayError("UNKNOWN_SOURCE_ACRONYM",
                               f"no vocabulary loaded for {key!r}")
        if spec.source_type is SourceType.BRANCH and spec.root_iri:
            descendants: set[str] = set()
            frontier = {spec.root_iri}
            while frontier:
                children = {e.iri for e in entries
                            if e.parent_iri in frontier and e.iri not in descendants}
                descendants.update(children)
                frontier = children
            return [e for e in entries if e.iri in descendants]
        return entries

    def search(self, sources: list[TermSourceSpec], query: str,
               limit: int = 10) -> list[TermSuggestion]:
        if not sources:
            raise GatewayError("UNKNOWN_SOURCE_ACRONYM", "no term sources given")
        needle = query.strip().casefold()
        if not needle:
            raise GatewayError("QUERY_EMPTY", "query is empty after trimming")

        best_tier: dict[str, tuple[int, VocabEntry]] = {}
        for spec in sources:
            for entry in self._entries_for(spec):
                label = entry.label.casefold()
                if label == needle:
                    tier = 0
                elif label.startswith(needle):
                    tier = 1
                elif needle in label:
                    tier = 2
                elif any(needle in syn.casefold() for syn in entry.synonyms):
                    tier = 3
                else:
                    continue
                seen = best_tier.get(entry.iri)
                if seen is None or tier < seen[0]:
                    best_tier[entry.iri] = (tier, entry)

        ranked = sorted(best_tier.values(),
                        key=lambda te: (te[0], te[1].label.casefold(), te[1].label,
                                        te[1].iri))
        return [entry.to_suggestion() for _tier, entry in ranked[:max(limit, 0)]]
