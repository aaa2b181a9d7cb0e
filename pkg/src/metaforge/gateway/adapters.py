"""Authority adapters: live REST clients and recorded-fixture replacements.

Adapters return raw upstream payloads in each source's documented shape;
normalization happens in the gateway. Fixture adapters serve one JSON file
per (source, query) and never touch the network, which is what all tests
and `GATEWAY_OFFLINE=1` run against.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from urllib.parse import quote

import requests

from metaforge.errors import GatewayError

DEFAULT_TIMEOUT_SECONDS = 2.0
FIXTURE_ROOT = Path(__file__).parent / "fixture_data"

EMPTY_PAYLOADS = {
    "orcid": {"expanded-result": [], "num-found": 0},
    "ror": {"items": [], "number_of_results": 0},
    "comptox": [],
}


def query_slug(query: str) -> str:
    return quote(query.strip().casefold(), safe="")


class AuthorityAdapter:
    """Stateless search/resolve against one registry."""

    source: str = ""

    def search(self, query: str, limit: int):
        raise NotImplementedError

    def resolve(self, bare_id: str):
        raise NotImplementedError


class _LiveAdapter(AuthorityAdapter):
    def __init__(self, timeout: float = DEFAULT_TIMEOUT_SECONDS):
        self.timeout = timeout

    def _get(self, url: str, *, params=None, headers=None):
        last_exc = None
        for _attempt in range(2):  # one retry on timeout
            try:
                response = requests.get(url, params=params, headers=headers,
                                        timeout=self.timeout)
                break
            except requests.Timeout as exc:
                last_exc = exc
        else:
            raise GatewayError("UPSTREAM_TIMEOUT",
                               f"{self.source} did not answer within {self.timeout}s") \
                from last_exc
        if response.status_code >= 400:
            raise GatewayError("UPSTREAM_ERROR",
                               f"{self.source} returned HTTP {response.status_code}")
        try:
            return response.json()
        except ValueError as exc:
            raise GatewayError("UPSTREAM_ERROR",
                               f"{self.source} returned a non-JSON body") from exc


class OrcidLiveAdapter(_LiveAdapter):
    source = "orcid"
    base_url = "https://pub.orcid.org/v3.0/expanded-search/"

    def search(self, query: str, limit: int):
        return self._get(self.base_url,
                         params={"q": query, "rows": limit},
                         headers={"Accept": "application/json"})

    def resolve(self, bare_id: str):
        return self._get(self.base_url,
                         params={"q": f"orcid:{bare_id}", "rows": 1},
                         headers={"Accept": "application/json"})


class RorLiveAdapter(_LiveAdapter):
    source = "ror"
    base_url = "https://api.ror.org/organizations"

    def search(self, query: str, limit: int):
        return self._get(self.base_url, params={"query": query})

    def resolve(self, bare_id: str):
        record = self._get(f"{self.base_url}/{bare_id}")
        return {"items": [record], "number_of_results": 1}


class ComptoxLiveAdapter(_LiveAdapter):
    source = "comptox"
    base_url = "https://api-ccte.epa.gov/chemical"
    api_key_env = "COMPTOX_API_KEY"

    def _headers(self):
        key = os.environ.get(self.api_key_env)
        if not key:
            raise GatewayError("UPSTREAM_ERROR",
                               f"{self.api_key_env} is not set; live CompTox needs a key")
        return {"x-api-key": key, "Accept": "application/json"}

    def search(self, query: str, limit: int):
        return self._get(f"{self.base_url}/search/start-with/{quote(query)}",
                         headers=self._headers())

    def resolve(self, bare_id: str):
        record = self._get(f"{self.base_url}/detail/search/by-dtxsid/{quote(bare_id)}",
                           headers=self._headers())
        return record if isinstance(record, list) else [record]


class FixtureAdapter(AuthorityAdapter):
    """Serves recorded payloads from `<root>/<source>/<slug>.json`."""

    def __init__(self, source: str, root: Path | str = FIXTURE_ROOT):
        self.source = source
        self.root = Path(root)

    def _load(self, slug: str):
        path = self.root / self.source / f"{slug}.json"
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def search(self, query: str, limit: int):
        payload = self._load(query_slug(query))
        if payload is None:
            return EMPTY_PAYLOADS[self.source]
        return payload

    def resolve(self, bare_id: str):
        payload = self._load(quote(bare_id, safe=""))
        if payload is None:
            raise GatewayError("NOT_FOUND",
                               f"no recorded {self.source} record for {bare_id!r}")
        return payload


class FailOnContactAdapter(AuthorityAdapter):
    """Trips the moment anything calls it; proves a code path stayed offline."""

    def __init__(self, source: str):
        self.source = source

    def search(self, query: str, limit: int):
        raise AssertionError(f"network adapter contacted for {self.source} search")

    def resolve(self, bare_id: str):
        raise AssertionError(f"network adapter contacted for {self.source} resolve")


def live_adapters(timeout: float = DEFAULT_TIMEOUT_SECONDS) -> dict[str, AuthorityAdapter]:
    return {"orcid": OrcidLiveAdapter(timeout), "ror": RorLiveAdapter(timeout),
            "comptox": ComptoxLiveAdapter(timeout)}


def fixture_adapters(root: Path | str = FIXTURE_ROOT) -> dict[str, AuthorityAdapter]:
    return {source: FixtureAdapter(source, root) for source in ("orcid", "ror", "comptox")}
