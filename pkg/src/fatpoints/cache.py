"""On-disk store for graded components and other memoized items.

Each entry is one JSON file named by its key.  The file carries a sha256 of
its own body; entries whose digest does not match are discarded with a
warning and recomputed.  Writes go through a temporary file and
``os.replace`` under an exclusive advisory lock on the directory.
"""

from __future__ import annotations

import base64
import contextlib
import fcntl
import hashlib
import json
import logging
import os
import tempfile
import threading
import warnings
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

ENV_VAR = "FATPOINTS_CACHE_DIR"
FORMAT = 1
MODES = ("read-write", "read-only", "off")


class CacheWarning(UserWarning):
    pass


def _canonical(body: dict) -> bytes:
    return json.dumps(body, sort_keys=True, separators=(",", ":")).encode()


def _encode_array(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a, dtype="<i8")
    return {"dtype": "int64", "shape": list(a.shape), "data": base64.b64encode(a.tobytes()).decode("ascii")}


def _decode_array(obj: dict) -> np.ndarray:
    if obj.get("dtype") != "int64":
        raise ValueError("unsupported array dtype")
    raw = base64.b64decode(obj["data"], validate=True)
    shape = tuple(int(x) for x in obj["shape"])
    if len(raw) != 8 * int(np.prod(shape, dtype=np.int64)):
        raise ValueError("array size does not match its shape")
    return np.frombuffer(raw, dtype="<i8").reshape(shape).astype(np.int64)


class DiskStore:
    """Persistence backend for :func:`fatpoints.engine.set_store`."""

    def __init__(self, directory: str | os.PathLike, mode: str = "read-write"):
        if mode not in MODES:
            raise ValueError(f"cache mode must be one of {MODES}, got {mode!r}")
        self.directory = Path(directory)
        self.mode = mode
        if mode == "read-write":
            self.directory.mkdir(parents=True, exist_ok=True)
            if not os.access(self.directory, os.W_OK):
                raise PermissionError(f"cache directory {self.directory} is not writable")
        self.hits = 0
        self.misses = 0
        self.writes = 0
        self.discarded = 0
        self._lock = threading.Lock()

    # locking -------------------------------------------------------------
    @contextlib.contextmanager
    def _dir_lock(self, exclusive: bool):
        if not self.directory.exists():
            yield
            return
        path = self.directory / ".lock"
        try:
            fd = os.open(path, os.O_RDWR | os.O_CREAT, 0o644)
        except OSError:
            # read-only directories cannot hold a lock file; readers proceed unlocked
            yield
            return
        try:
            fcntl.flock(fd, fcntl.LOCK_EX if exclusive else fcntl.LOCK_SH)
            yield
        finally:
            fcntl.flock(fd, fcntl.LOCK_UN)
            os.close(fd)

    def _path(self, key: str) -> Path:
        if not key or any(c not in "0123456789abcdef" for c in key):
            raise ValueError(f"malformed cache key {key!r}")
        return self.directory / key[:2] / f"{key}.json"

    # store interface -------------------------------------------------------
    def load(self, key: str):
        if self.mode == "off":
            return None
        path = self._path(key)
        with self._dir_lock(exclusive=False):
            try:
                text = path.read_bytes()
            except FileNotFoundError:
                with self._lock:
                    self.misses += 1
                return None
        try:
            doc = json.loads(text)
            body = doc["body"]
            if doc.get("sha256") != hashlib.sha256(_canonical(body)).hexdigest():
                raise ValueError("checksum mismatch")
            if body.get("key") != key or body.get("format") != FORMAT:
                raise ValueError("entry does not belong to this key")
            payload = {"meta": body["meta"]}
            if body.get("array") is not None:
                payload["array"] = _decode_array(body["array"])
        except (ValueError, KeyError, TypeError) as exc:
            self.discard(key, str(exc))
            return None
        with self._lock:
            self.hits += 1
        return payload

    def save(self, key: str, payload: dict) -> None:
        if self.mode != "read-write":
            return
        body = {
            "format": FORMAT,
            "key": key,
            "meta": payload.get("meta"),
            "array": _encode_array(payload["array"]) if payload.get("array") is not None else None,
        }
        doc = {"sha256": hashlib.sha256(_canonical(body)).hexdigest(), "body": body}
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = json.dumps(doc, sort_keys=True).encode()
        with self._dir_lock(exclusive=True):
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(data)
                os.replace(tmp, path)
            except BaseException:
                with contextlib.suppress(FileNotFoundError):
                    os.unlink(tmp)
                raise
        with self._lock:
            self.writes += 1

    def discard(self, key: str, reason: str) -> None:
        warnings.warn(f"discarding cache entry {key[:12]}: {reason}; recomputing", CacheWarning, stacklevel=2)
        log.warning("discarding cache entry %s: %s", key, reason)
        with self._lock:
            self.discarded += 1
        if self.mode != "read-write":
            return
        with self._dir_lock(exclusive=True):
            with contextlib.suppress(FileNotFoundError):
                self._path(key).unlink()

    def stats(self) -> dict:
        with self._lock:
            return {"hits": self.hits, "misses": self.misses, "writes": self.writes, "discarded": self.discarded}

    def entries(self) -> list:
        if not self.directory.exists():
            return []
        return sorted(p for p in self.directory.glob("*/*.json"))


def default_directory() -> str | None:
    return os.environ.get(ENV_VAR) or None
