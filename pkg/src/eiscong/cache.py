"""Content-addressed result cache.

Requests are canonicalized to sorted-key JSON and addressed by SHA-256.
Writes go through a temp file and an atomic rename, so concurrent
invocations never observe partial entries; corrupt or mismatched entries
are discarded and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile


def canonical_request(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def request_digest(payload: dict) -> str:
    return hashlib.sha256(canonical_request(payload).encode()).hexdigest()


class ResultCache:
    def __init__(self, directory: str | None):
        self.directory = directory
        self.enabled = False
        self.last_warning = None
        if directory:
            try:
                os.makedirs(directory, exist_ok=True)
                probe = os.path.join(directory, ".probe")
                with open(probe, "w") as fh:
                    fh.write("ok")
                os.remove(probe)
                self.enabled = True
            except OSError as exc:
                self.last_warning = f"cache disabled: {exc}"
                print(f"warning: {self.last_warning}", file=sys.stderr)

    def _path(self, digest: str) -> str:
        return os.path.join(self.directory, f"{digest}.json")

    def get(self, digest: str):
        if not self.enabled:
            return None
        path = self._path(digest)
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
            if doc.get("digest") != digest:
                raise ValueError("digest mismatch")
            return doc["value"]
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            print(f"warning: discarding corrupt cache entry {digest}: {exc}",
                  file=sys.stderr)
            try:
                os.remove(path)
            except OSError:
                pass
            return None

    def put(self, digest: str, value):
        if not self.enabled:
            return
        doc = {"digest": digest, "value": value}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(doc, fh)
            os.replace(tmp, self._path(digest))
        except OSError:
            try:
                os.remove(tmp)
            except OSError:
                pass

    def clear(self) -> int:
        if not self.enabled:
            return 0
        count = 0
        for name in os.listdir(self.directory):
            if name.endswith(".json"):
                try:
                    os.remove(os.path.join(self.directory, name))
                    count += 1
                except OSError:
                    pass
        return count

    def stats(self) -> dict:
        if not self.enabled:
            return {"enabled": False, "entries": 0}
        entries = [n for n in os.listdir(self.directory) if n.endswith(".json")]
        return {"enabled": True, "entries": len(entries),
                "directory": self.directory}


def cache_get_put(cache: ResultCache, payload: dict, compute):
    """Serve from cache or compute; returns (value, provenance)."""
    digest = request_digest(payload)
    hit = cache.get(digest)
    if hit is not None:
        return hit, "cache"
    value = compute()
    cache.put(digest, value)
    return value, "computed"
