"""File-backed template registry.

One canonical-JSON file per template fingerprint; entries are immutable
(re-registering the same document is a no-op, a changed document under the
same id needs `force` and lands in a new file). Writes are atomic
(temp file + rename) and serialized; reads run against in-memory snapshots.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from metaforge.errors import MetaforgeError
from metaforge.template import (
    Template,
    canonical_json,
    parse_template,
    serialize_template,
    template_fingerprint,
    validate_template,
)


@dataclass(frozen=True)
class RegistryEntry:
    id: str
    fingerprint: str
    document: dict
    template: Template
    registered_at: str

    def summary(self) -> dict:
        return {"id": self.id, "fingerprint": self.fingerprint,
                "registeredAt": self.registered_at}


def _mtime_iso(path: Path) -> str:
    return datetime.fromtimestamp(path.stat().st_mtime, tz=timezone.utc).isoformat()


class TemplateRegistry:
    def __init__(self, data_dir: Path | str):
        self.root = Path(data_dir) / "templates"
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._by_fingerprint: dict[str, RegistryEntry] = {}
        self._by_id: dict[str, RegistryEntry] = {}
        self._load()

    def _load(self) -> None:
        for path in sorted(self.root.glob("*.json"), key=lambda p: p.stat().st_mtime):
            try:
                template = parse_template(path.read_text(encoding="utf-8"))
            except MetaforgeError:
                continue  # foreign file in the data dir; skip rather than crash
            entry = RegistryEntry(
                id=template.id,
                fingerprint=template_fingerprint(template),
                document=serialize_template(template),
                template=template,
                registered_at=_mtime_iso(path),
            )
            self._by_fingerprint[entry.fingerprint] = entry
            self._by_id[entry.id] = entry  # newest mtime wins

    def register(self, document, *, force: bool = False) -> tuple[RegistryEntry, bool]:
        """Returns (entry, created). Raises SCHEMA_VIOLATION / ID_CONFLICT."""
        template = parse_template(document)
        issues = validate_template(template)
        errors = [x for x in issues if x.severity == "error"]
        if errors:
            raise MetaforgeError("SCHEMA_VIOLATION", "template has validation errors",
                                 issues=[x.to_dict() for x in errors])
        fingerprint = template_fingerprint(template)
        with self._lock:
            existing = self._by_fingerprint.get(fingerprint)
            if existing is not None:
                return existing, False
            prior = self._by_id.get(template.id)
            if prior is not None and prior.fingerprint != fingerprint and not force:
                raise MetaforgeError(
                    "ID_CONFLICT",
                    f"{template.id} is already registered with fingerprint "
                    f"{prior.fingerprint[:12]}...; pass force to supersede")
            canonical_doc = serialize_template(template)
            path = self.root / f"{fingerprint}.json"
            tmp = path.with_suffix(".json.tmp")
            tmp.write_text(canonical_json(canonical_doc) + "\n", encoding="utf-8")
            os.replace(tmp, path)
            entry = RegistryEntry(
                id=template.id,
                fingerprint=fingerprint,
                document=canonical_doc,
                template=template,
                registered_at=_mtime_iso(path),
            )
            self._by_fingerprint[fingerprint] = entry
            self._by_id[template.id] = entry
            return entry, True

    def get(self, template_id: str) -> RegistryEntry:
        entry = self._by_id.get(template_id) or self._by_fingerprint.get(template_id)
        if entry is None:
            raise MetaforgeError("UNKNOWN_TEMPLATE", f"no template {template_id!r}")
        return entry

    def list(self) -> list[RegistryEntry]:
        return sorted(self._by_id.values(), key=lambda e: e.id)
