"""Node and value path handling.

A node path addresses a template node by slash-joined keys (`authors/name`).
A value path additionally carries zero-based repetition indices on
multi-valued nodes (`authors[1]/name`).
"""

from __future__ import annotations

import re

from metaforge.errors import MetaforgeError

_SEGMENT_RE = re.compile(r"^([a-z][a-z0-9_]*)(?:\[(\d+)\])?$")

Segment = tuple[str, "int | None"]


def parse_value_path(path: str) -> list[Segment]:
    """Split a value path into (key, index-or-None) segments.

    Raises UNKNOWN_PATH on empty or ungrammatical paths.
    """
    if not path:
        raise MetaforgeError("UNKNOWN_PATH", "empty path", path=path)
    segments: list[Segment] = []
    for raw in path.split("/"):
        m = _SEGMENT_RE.match(raw)
        if not m:
            raise MetaforgeError("UNKNOWN_PATH", f"bad path segment {raw!r}", path=path)
        key, idx = m.group(1), m.group(2)
        segments.append((key, int(idx) if idx is not None else None))
    return segments


def join_segments(segments: list[Segment]) -> str:
    parts = []
    for key, idx in segments:
        parts.append(key if idx is None else f"{key}[{idx}]")
    return "/".join(parts)


def node_path_of(path: str) -> str:
    """Strip repetition indices: `authors[1]/name` -> `authors/name`."""
    return "/".join(key for key, _ in parse_value_path(path))


def sort_key(path: str) -> tuple:
    """Deterministic ordering key: compare segment-wise, indices numerically."""
    try:
        segs = parse_value_path(path)
    except MetaforgeError:
        return ((path, -1),)
    return tuple((key, -1 if idx is None else idx) for key, idx in segs)
