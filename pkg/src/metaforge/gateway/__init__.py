"""Authority gateway: normalized search/resolve over ORCID, ROR, CompTox,
plus the local ontology term index."""

from metaforge.authorities import (
    canonical_identifier,
    canonical_orcid,
    canonical_ror,
    validate_orcid_checksum,
)
from metaforge.gateway.adapters import (
    AuthorityAdapter,
    FailOnContactAdapter,
    FixtureAdapter,
    fixture_adapters,
    live_adapters,
)
from metaforge.gateway.cache import ResponseCache
from metaforge.gateway.models import AuthoritySuggestion, TermSuggestion
from metaforge.gateway.ontology import OntologyIndex, VocabEntry
from metaforge.gateway.service import (
    Gateway,
    build_gateway,
    normalize_response,
    offline_from_env,
)

__all__ = [
    "AuthorityAdapter", "AuthoritySuggestion", "FailOnContactAdapter", "FixtureAdapter",
    "Gateway", "OntologyIndex", "ResponseCache", "TermSuggestion", "VocabEntry",
    "build_gateway", "canonical_identifier", "canonical_orcid", "canonical_ror",
    "fixture_adapters", "live_adapters", "normalize_response", "offline_from_env",
    "validate_orcid_checksum",
]
