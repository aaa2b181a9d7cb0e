"""Minimal IRI syntax checks (pragmatic, not a full RFC 3987 parser)."""

from __future__ import annotations

import re
from urllib.parse import urlsplit

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*$")
_FORBIDDEN = re.compile(r"[\x00-\x20<>\"{}|\\^`]")


def is_absolute_iri(value: str) -> bool:
    """True for `scheme:rest` with a sane scheme and no whitespace/control chars."""
    if not isinstance(value, str) or not value:
        return False
    if _FORBIDDEN.search(value):
        return False
    try:
        parts = urlsplit(value)
    except ValueError:
        return False
    if not parts.scheme or not _SCHEME_RE.match(parts.scheme):
        return False
    return bool(parts.netloc or parts.path or parts.fragment or parts.query)
