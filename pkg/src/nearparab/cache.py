"""On-disk artifact cache keyed by a canonical hash of (command, inputs,
config).

Entries store the artifact text with a checksum; a checksum mismatch (or
unreadable entry) is reported as CacheCorrupt and the caller recomputes
and overwrites.  Writes are atomic (write-temp-then-rename).
"""

import hashlib
import json
import os
import tempfile

from .errors import CacheCorrupt


def cache_key(command, inputs, config):
    doc = json.dumps({"command": command, "inputs": inputs, "config": config},
                     sort_keys=True, default=str)
    return hashlib.sha256(doc.encode("utf-8")).hexdigest()


class DiskCache:
    def __init__(self, cache_dir):
        self.dir = cache_dir
        os.makedirs(cache_dir, exist_ok=True)

    def _path(self, key):
        return os.path.join(self.dir, key + ".json")

    def get(self, key):
        """Cached artifact text, or None on miss.  Raises CacheCorrupt on a
        damaged entry."""
        path = self._path(key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            artifact = doc["artifact"]
            checksum = doc["sha256"]
        except (json.JSONDecodeError, KeyError, UnicodeDecodeError) as exc:
            raise CacheCorrupt(f"unreadable cache entry {key}: {exc}")
        if hashlib.sha256(artifact.encode("utf-8")).hexdigest() != checksum:
            raise CacheCorrupt(f"checksum mismatch for cache entry {key}")
        return artifact

    def put(self, key, artifact_text):
        path = self._path(key)
        doc = {"sha256": hashlib.sha256(artifact_text.encode("utf-8")).hexdigest(),
               "artifact": artifact_text}
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(doc, fh)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
