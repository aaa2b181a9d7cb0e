"""Canonical identifier shapes for the supported external authorities.

ORCID check digits follow ISO 7064 MOD 11-2 over the 15 base digits, with
`X` standing for a check value of 10.
"""

from __future__ import annotations

import re

from metaforge.errors import MetaforgeError

ORCID_IRI_RE = re.compile(r"^https://orcid\.org/\d{4}-\d{4}-\d{4}-\d{3}[\dX]$")
ROR_IRI_RE = re.compile(r"^https://ror\.org/0[a-hj-km-np-tv-z0-9]{6}\d{2}$")
COMPTOX_IRI_RE = re.compile(
    r"^https://comptox\.epa\.gov/dashboard/chemical/details/DTXSID\d+$")

IRI_SHAPES = {"orcid": ORCID_IRI_RE, "ror": ROR_IRI_RE, "comptox": COMPTOX_IRI_RE}

_ORCID_BARE_RE = re.compile(r"^\d{15}[\dX]$")
_ROR_BARE_RE = re.compile(r"^0[a-hj-km-np-tv-z0-9]{6}\d{2}$")
_DTXSID_RE = re.compile(r"^DTXSID\d+$")

COMPTOX_PREFIX = "https://comptox.epa.gov/dashboard/chemical/details/"


def matches_shape(source: str, iri: str) -> bool:
    shape = IRI_SHAPES.get(source)
    return bool(shape and shape.match(iri))


def validate_orcid_checksum(digits: str) -> bool:
    """True iff the 16th character is the MOD 11-2 check of the first 15 digits."""
    if not _ORCID_BARE_RE.match(digits):
        raise MetaforgeError("MALFORMED_ID",
                             "expected 15 digits plus a digit-or-X check character")
    total = 0
    for ch in digits[:15]:
        total = (total + int(ch)) * 2
    result = (12 - total % 11) % 11
    expected = "X" if result == 10 else str(result)
    return digits[15] == expected


def canonical_orcid(raw: str) -> str:
    """Accepts bare digits, hyphenated form, or a full IRI; returns the
    canonical IRI. Raises INVALID_IDENTIFIER on shape or checksum failure."""
    text = raw.strip()
    for prefix in ("https://orcid.org/", "http://orcid.org/", "orcid.org/"):
        if text.startswith(prefix):
            text = text[len(prefix):]
            break
    digits = text.replace("-", "").upper()
    try:
        ok = validate_orcid_checksum(digits)
    except MetaforgeError:
        raise MetaforgeError("INVALID_IDENTIFIER",
                             f"{raw!r} is not an ORCID identifier") from None
    if not ok:
        raise MetaforgeError("INVALID_IDENTIFIER", f"{raw!r} fails the ORCID checksum")
    grouped = "-".join(digits[k:k + 4] for k in range(0, 16, 4))
    return f"https://orcid.org/{grouped}"


def canonical_ror(raw: str) -> str:
    text = raw.strip()
    for prefix in ("https://ror.org/", "http://ror.org/", "ror.org/"):
        if text.startswith(prefix):
            text = text[len(prefix):]
            break
    if not _ROR_BARE_RE.match(text):
        raise MetaforgeError("INVALID_IDENTIFIER", f"{raw!r} is not a ROR identifier")
    return f"https://ror.org/{text}"


def canonical_comptox(raw: str) -> str:
    text = raw.strip()
    if text.startswith(COMPTOX_PREFIX):
        text = text[len(COMPTOX_PREFIX):]
    if not _DTXSID_RE.match(text):
        raise MetaforgeError("INVALID_IDENTIFIER", f"{raw!r} is not a DTXSID identifier")
    return f"{COMPTOX_PREFIX}{text}"


CANONICALIZERS = {"orcid": canonical_orcid, "ror": canonical_ror, "comptox": canonical_comptox}


def canonical_identifier(source: str, raw: str) -> str:
    if source not in CANONICALIZERS:
        raise MetaforgeError("UNKNOWN_SOURCE", f"unknown authority source {source!r}")
    return CANONICALIZERS[source](raw)
