"""Disk cache for built quotient algebras.

One JSON file per (p, n, r, q, d, bound, format version), carrying the
reduced relation rows, the standard-monomial basis and the saturation
flag, plus a sha256 checksum over the canonical payload.  Writes go
through a temp file + rename so concurrent readers never see a torn
file; stale or corrupt entries are ignored, not trusted.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

FORMAT_VERSION = 1


def default_cache_dir() -> str:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(
        os.path.expanduser("~"), ".cache"
    )
    return os.path.join(base, "glkth")


def cache_key(params, d: int, bound: int) -> str:
    return (
        f"gl-p{params.p}-n{params.n}-r{params.r}-q{params.q}"
        f"-d{d}-B{bound}-v{FORMAT_VERSION}"
    )


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def store(cache_dir: str, key: str, payload: dict) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    record = {"key": key, "payload": payload, "sha256": _checksum(payload)}
    path = os.path.join(cache_dir, key + ".json")
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(record, fh, sort_keys=True)
    os.replace(tmp, path)
    return path


def load(cache_dir: str, key: str) -> dict | None:
    path = os.path.join(cache_dir, key + ".json")
    try:
        with open(path) as fh:
            record = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    payload = record.get("payload")
    if (
        not isinstance(payload, dict)
        or record.get("key") != key
        or record.get("sha256") != _checksum(payload)
    ):
        return None
    return payload
