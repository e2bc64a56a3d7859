"""Content-addressed on-disk cache for expensive results.

Entries are JSON files named by the SHA-256 of a canonical descriptor
(operation, graph canonical form, parameters). Writes go to a temporary
file that is renamed into place, so concurrent writers never expose a
partial entry. Unreadable entries are dropped and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import warnings
from pathlib import Path
from typing import Any, Callable

from .graph import Graph

__all__ = ["CACHE_ENV", "ResultCache", "default_cache", "descriptor", "theta_interval"]

CACHE_ENV = "SHANNON_BOUNDS_CACHE"
_log = logging.getLogger(__name__)


def descriptor(operation: str, g: Graph | None = None, **params: Any) -> dict:
    d: dict[str, Any] = {"op": operation, "params": {k: params[k] for k in sorted(params)}}
    if g is not None:
        d["graph"] = [g.n, list(g.rows)]
    return d


def _digest(value: Any) -> str:
    return hashlib.sha256(json.dumps(value, sort_keys=True).encode()).hexdigest()


class ResultCache:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, desc: dict) -> Path:
        blob = json.dumps(desc, sort_keys=True, separators=(",", ":"))
        return self.directory / (hashlib.sha256(blob.encode()).hexdigest() + ".json")

    def get(self, desc: dict) -> Any | None:
        path = self._path(desc)
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            if entry["key"] != desc:
                raise ValueError("key mismatch")
            if entry["digest"] != _digest(entry["value"]):
                raise ValueError("value digest mismatch")
            return entry["value"]
        except FileNotFoundError:
            return None
        except (OSError, ValueError, KeyError, TypeError) as exc:
            warnings.warn(f"discarding corrupt cache entry {path.name}: {exc}", RuntimeWarning, stacklevel=2)
            path.unlink(missing_ok=True)
            return None

    def put(self, desc: dict, value: Any) -> None:
        path = self._path(desc)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"key": desc, "value": value, "digest": _digest(value)}, fh)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def get_or_compute(self, desc: dict, compute: Callable[[], Any]) -> Any:
        """``compute()`` must return JSON-serialisable data."""
        value = self.get(desc)
        if value is not None:
            self.hits += 1
            return value
        self.misses += 1
        value = compute()
        self.put(desc, value)
        return value


def default_cache() -> ResultCache | None:
    """The cache named by the environment variable, if set."""
    directory = os.environ.get(CACHE_ENV)
    if not directory:
        return None
    _log.debug("using result cache at %s", directory)
    return ResultCache(directory)


def theta_interval(g: Graph, tolerance: float, cache: ResultCache | None = None) -> tuple[float, float]:
    """Certified ``(lower, upper)`` for theta(g), through the cache when given."""
    from .theta import lovasz_theta

    def compute() -> list[float]:
        r = lovasz_theta(g, tolerance)
        return [r.lower, r.upper]

    if cache is None:
        lo, hi = compute()
    else:
        lo, hi = cache.get_or_compute(descriptor("theta", g, tolerance=tolerance), compute)
    return float(lo), float(hi)
