"""File-backed store for classifiers, datasets and runs.

One JSON document per entity, filename = id.  Writes go through a temp file
in the same directory and an atomic rename, so a killed process never
leaves a truncated entity behind.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path
from typing import List, Optional

KINDS = ("classifiers", "datasets", "runs")

_SLUG = re.compile(r"^[a-z0-9][a-z0-9_-]*$")


class StoreError(ValueError):
    pass


def valid_slug(entity_id: str) -> bool:
    return bool(_SLUG.fullmatch(entity_id))


class Store:
    def __init__(self, root) -> None:
        self.root = Path(root)
        for kind in KINDS:
            (self.root / kind).mkdir(parents=True, exist_ok=True)

    def _path(self, kind: str, entity_id: str) -> Path:
        if kind not in KINDS:
            raise StoreError(f"unknown entity kind {kind!r}")
        if not valid_slug(entity_id):
            raise StoreError(f"invalid id {entity_id!r}: use lowercase slugs")
        return self.root / kind / f"{entity_id}.json"

    def exists(self, kind: str, entity_id: str) -> bool:
        return self._path(kind, entity_id).exists()

    def read(self, kind: str, entity_id: str) -> Optional[dict]:
        path = self._path(kind, entity_id)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))

    def write(self, kind: str, entity_id: str, doc: dict) -> None:
        path = self._path(kind, entity_id)
        payload = json.dumps(doc, indent=2, sort_keys=False) + "\n"
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{entity_id}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def delete(self, kind: str, entity_id: str) -> bool:
        path = self._path(kind, entity_id)
        if not path.exists():
            return False
        path.unlink()
        return True

    def list_ids(self, kind: str) -> List[str]:
        if kind not in KINDS:
            raise StoreError(f"unknown entity kind {kind!r}")
        return sorted(p.stem for p in (self.root / kind).glob("*.json"))

    def runs_referencing(self, classifier_id: str) -> List[str]:
        out = []
        for run_id in self.list_ids("runs"):
            doc = self.read("runs", run_id)
            if doc and doc.get("classifier_id") == classifier_id:
                out.append(run_id)
        return out
