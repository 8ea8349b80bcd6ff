"""Response cache shared by all backends.

Entries are keyed by a digest of (backend kind, model id, full rendered
request), so two calls are cache-equal exactly when the bytes sent to the
service would be equal. Only successfully parsed responses are stored;
failures must stay retryable.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path
from typing import Any


def request_key(kind: str, model: str, request: str) -> str:
    """Digest identifying one logical backend request."""

    payload = "\x1f".join((kind, model, request))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class ResponseCache:
    """Two-tier (memory, then disk) cache of JSON-serializable responses.

    ``cache_dir=None`` keeps the cache purely in memory. Disk writes go
    through a temp file and ``os.replace`` so a concurrent reader never sees
    a partial entry.
    """

    def __init__(self, cache_dir: str | Path | None = None) -> None:
        self._dir = Path(cache_dir) if cache_dir is not None else None
        self._memory: dict[str, Any] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        assert self._dir is not None
        return self._dir / f"{key}.json"

    def get(self, key: str) -> Any | None:
        with self._lock:
            if key in self._memory:
                self.hits += 1
                return self._memory[key]
            if self._dir is not None:
                path = self._path(key)
                try:
                    value = json.loads(path.read_text(encoding="utf-8"))
                except FileNotFoundError:
                    pass
                except (OSError, ValueError):
                    # A torn or corrupt entry is a miss, not a crash; it will
                    # be overwritten by the next put.
                    pass
                else:
                    self._memory[key] = value
                    self.hits += 1
                    return value
            self.misses += 1
            return None

    def put(self, key: str, value: Any) -> None:
        with self._lock:
            self._memory[key] = value
            if self._dir is None:
                return
            path = self._path(key)
            tmp = path.with_suffix(f".tmp.{os.getpid()}.{threading.get_ident()}")
            tmp.write_text(json.dumps(value, sort_keys=True), encoding="utf-8")
            os.replace(tmp, path)

    def __len__(self) -> int:
        with self._lock:
            return len(self._memory)
