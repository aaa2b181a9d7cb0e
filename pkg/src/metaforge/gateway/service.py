"""The normalizing gateway in front of external identifier registries.

One facade serves search and resolution for every supported source,
normalizes each upstream payload shape into `AuthoritySuggestion` records,
caches search results (TTL + LRU), and bounds in-flight upstream calls.
Upstream ranking is preserved: registries own relevance, this layer owns
normalization.
"""

from __future__ import annotations

import os
import threading

from metaforge.authorities import (
    canonical_comptox,
    canonical_identifier,
    canonical_orcid,
    canonical_ror,
    matches_shape,
    validate_orcid_checksum,
)
from metaforge.errors import GatewayError, MetaforgeError
from metaforge.gateway.adapters import (
    AuthorityAdapter,
    fixture_adapters,
    live_adapters,
)
from metaforge.gateway.cache import ResponseCache
from metaforge.gateway.models import AuthoritySuggestion, TermSuggestion
from metaforge.gateway.ontology import OntologyIndex
from metaforge.template.model import TermSourceSpec

__all__ = ["Gateway", "build_gateway", "normalize_response", "validate_orcid_checksum"]

SOURCES = ("orcid", "ror", "comptox")
MAX_LIMIT = 50
DEFAULT_PARALLELISM = 8


def _detail(**pairs: object) -> dict[str, str]:
    return {k: str(v) for k, v in pairs.items() if v not in (None, "", [], {})}


def _normalize_orcid(raw) -> list[AuthoritySuggestion]:
    if not isinstance(raw, dict) or not isinstance(raw.get("expanded-result"), list):
        raise GatewayError("UPSTREAM_SHAPE_ERROR",
                           "orcid payload is missing 'expanded-result'")
    out = []
    for item in raw["expanded-result"]:
        if not isinstance(item, dict) or not item.get("orcid-id"):
            raise GatewayError("UPSTREAM_SHAPE_ERROR", "orcid result item lacks 'orcid-id'")
        orcid_id = str(item["orcid-id"])
        given = item.get("given-names") or ""
        family = item.get("family-names") or ""
        label = " ".join(part for part in (given, family) if part) or orcid_id
        institutions = item.get("institution-name") or []
        out.append(AuthoritySuggestion(
            source="orcid",
            id=f"https://orcid.org/{orcid_id}" if not orcid_id.startswith("http") else orcid_id,
            label=label,
            detail=_detail(givenNames=given, familyNames=family,
                           institutions="; ".join(institutions)),
        ))
    return out


def _normalize_ror(raw) -> list[AuthoritySuggestion]:
    if not isinstance(raw, dict) or not isinstance(raw.get("items"), list):
        raise GatewayError("UPSTREAM_SHAPE_ERROR", "ror payload is missing 'items'")
    out = []
    for item in raw["items"]:
        if not isinstance(item, dict) or not item.get("id"):
            raise GatewayError("UPSTREAM_SHAPE_ERROR", "ror item lacks 'id'")
        country = (item.get("country") or {}).get("country_name")
        out.append(AuthoritySuggestion(
            source="ror",
            id=str(item["id"]),
            label=str(item.get("name") or item["id"]),
            detail=_detail(country=country,
                           aliases="; ".join(item.get("aliases") or []),
                           acronyms="; ".join(item.get("acronyms") or [])),
        ))
    return out


def _normalize_comptox(raw) -> list[AuthoritySuggestion]:
    if not isinstance(raw, list):
        raise GatewayError("UPSTREAM_SHAPE_ERROR", "comptox payload must be an array")
    out = []
    for item in raw:
        if not isinstance(item, dict) or not item.get("dtxsid"):
            raise GatewayError("UPSTREAM_SHAPE_ERROR", "comptox item lacks 'dtxsid'")
        dtxsid = str(item["dtxsid"])
        out.append(AuthoritySuggestion(
            source="comptox",
            id=canonical_comptox(dtxsid),
            label=str(item.get("preferredName") or dtxsid),
            detail=_detail(casrn=item.get("casrn")),
        ))
    return out


_NORMALIZERS = {"orcid": _normalize_orcid, "ror": _normalize_ror,
                "comptox": _normalize_comptox}


def normalize_response(source: str, raw) -> list[AuthoritySuggestion]:
    """Map one raw upstream payload into normalized suggestions."""
    if source not in _NORMALIZERS:
        raise GatewayError("UNKNOWN_SOURCE", f"unknown authority source {source!r}")
    return _NORMALIZERS[source](raw)


def _bare_id(source: str, canonical: str) -> str:
    if source == "orcid":
        return canonical.rsplit("/", 1)[1]
    if source == "ror":
        return canonical.rsplit("/", 1)[1]
    return canonical.rsplit("/", 1)[1]  # comptox DTXSID


class Gateway:
    def __init__(self, adapters: dict[str, AuthorityAdapter],
                 ontology_index: OntologyIndex | None = None,
                 cache: ResponseCache | None = None,
                 max_parallel: int = DEFAULT_PARALLELISM):
        self.adapters = adapters
        self.ontology_index = ontology_index or OntologyIndex([])
        self.cache = cache if cache is not None else ResponseCache()
        self._upstream_slots = threading.BoundedSemaphore(max_parallel)

    def _adapter(self, source: str) -> AuthorityAdapter:
        adapter = self.adapters.get(source)
        if adapter is None:
            raise GatewayError("UNKNOWN_SOURCE", f"unknown authority source {source!r}")
        return adapter

    def search_authority(self, source: str, query: str,
                         limit: int = 10) -> list[AuthoritySuggestion]:
        adapter = self._adapter(source)
        normalized_query = query.strip().casefold()
        if not normalized_query:
            raise GatewayError("QUERY_EMPTY", "query is empty after trimming")
        limit = max(1, min(int(limit), MAX_LIMIT))
        key = (source, normalized_query, limit)
        cached = self.cache.get(key)
        if cached is not None:
            return list(cached)
        with self._upstream_slots:
            raw = adapter.search(normalized_query, limit)
        suggestions = normalize_response(source, raw)[:limit]
        self.cache.put(key, tuple(suggestions))
        return suggestions

    def resolve_identifier(self, source: str, raw_id: str) -> AuthoritySuggestion:
        adapter = self._adapter(source)
        if not raw_id or not raw_id.strip():
            raise GatewayError("INVALID_IDENTIFIER", "identifier is empty")
        try:
            canonical = canonical_identifier(source, raw_id)
        except GatewayError:
            raise
        except MetaforgeError as exc:
            raise GatewayError(exc.code, exc.message) from exc
        with self._upstream_slots:
            raw = adapter.resolve(_bare_id(source, canonical))
        suggestions = normalize_response(source, raw)
        for suggestion in suggestions:
            if suggestion.id == canonical:
                return suggestion
        if suggestions:
            first = suggestions[0]
            return AuthoritySuggestion(source, canonical, first.label, first.detail)
        raise GatewayError("NOT_FOUND", f"{canonical} has no record at {source}")

    def search_ontology(self, sources: list[TermSourceSpec], query: str,
                        limit: int = 10) -> list[TermSuggestion]:
        return self.ontology_index.search(sources, query, max(1, min(int(limit), MAX_LIMIT)))


def offline_from_env() -> bool:
    return os.environ.get("GATEWAY_OFFLINE", "") == "1"


def build_gateway(offline: bool | None = None,
                  fixtures_root=None,
                  vocabulary_paths: list | None = None,
                  cache: ResponseCache | None = None) -> Gateway:
    """Assemble a gateway; offline defaults to the GATEWAY_OFFLINE env flag."""
    if offline is None:
        offline = offline_from_env()
    if offline:
        adapters = fixture_adapters(fixtures_root) if fixtures_root else fixture_adapters()
    else:
        adapters = live_adapters()
    index = OntologyIndex.from_files(*(vocabulary_paths or ()))
    return Gateway(adapters, index, cache=cache)


def suggestion_matches_shape(s: AuthoritySuggestion) -> bool:
    return matches_shape(s.source, s.id)


# Canonicalizers re-exported for callers that only need syntax handling.
canonicalize = {"orcid": canonical_orcid, "ror": canonical_ror,
                "comptox": canonical_comptox}
