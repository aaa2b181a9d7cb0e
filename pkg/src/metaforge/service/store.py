"""Demo instance store: one file per instanceId, retrieved byte-identically.

Host platforms own real persistence; this store exists so the whole loop
(register, author, submit, fetch) runs against the bundled service alone.
"""

from __future__ import annotations

import base64
import json
import os
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from metaforge.errors import MetaforgeError


def new_instance_id() -> str:
    raw = secrets.token_bytes(16)  # 128-bit random, base32 without padding
    return base64.b32encode(raw).decode("ascii").rstrip("=").lower()


@dataclass(frozen=True)
class StoredInstance:
    instance_id: str
    template_id: str
    draft: bool
    stored_at: str
    body: bytes

    def summary(self) -> dict:
        return {"instanceId": self.instance_id, "templateId": self.template_id,
                "draft": self.draft, "storedAt": self.stored_at}


class InstanceStore:
    def __init__(self, data_dir: Path | str):
        self.root = Path(data_dir) / "instances"
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def put(self, body: bytes, template_id: str, *, draft: bool) -> StoredInstance:
        instance_id = new_instance_id()
        meta = {
            "instanceId": instance_id,
            "templateId": template_id,
            "draft": draft,
            "storedAt": datetime.now(timezone.utc).isoformat(),
        }
        with self._lock:
            body_path = self.root / f"{instance_id}.jsonld"
            tmp = body_path.with_suffix(".jsonld.tmp")
            tmp.write_bytes(body)
            os.replace(tmp, body_path)
            meta_path = self.root / f"{instance_id}.meta.json"
            tmp = meta_path.with_suffix(".json.tmp")
            tmp.write_text(json.dumps(meta, sort_keys=True), encoding="utf-8")
            os.replace(tmp, meta_path)
        return StoredInstance(instance_id, template_id, draft, meta["storedAt"], body)

    def get(self, instance_id: str) -> StoredInstance:
        body_path = self.root / f"{instance_id}.jsonld"
        meta_path = self.root / f"{instance_id}.meta.json"
        if not body_path.exists() or not meta_path.exists():
            raise MetaforgeError("NOT_FOUND", f"no stored instance {instance_id!r}")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        return StoredInstance(
            instance_id=instance_id,
            template_id=meta.get("templateId", ""),
            draft=bool(meta.get("draft", False)),
            stored_at=meta.get("storedAt", ""),
            body=body_path.read_bytes(),
        )
