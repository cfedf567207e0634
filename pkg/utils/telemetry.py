# utils/telemetry.py
# Process-wide counters; the support oracle bumps them from worker threads.
from __future__ import annotations
import threading
from typing import Dict

_lock = threading.RLock()
_counters: Dict[str, int] = {}

EIGENSOLVES = "eigensolves"
EIGEN_RETRIES = "eigen_retries"
SUPPORT_HITS = "support_cache_hits"
SUPPORT_MISSES = "support_cache_misses"

def inc(key: str, n: int = 1) -> None:
    with _lock:
        _counters[key] = _counters.get(key, 0) + n

def count(key: str) -> int:
    with _lock:
        return _counters.get(key, 0)

def counters() -> Dict[str, int]:
    """Sorted snapshot for the verify report."""
    with _lock:
        return dict(sorted(_counters.items()))

def reset() -> None:
    with _lock:
        _counters.clear()
