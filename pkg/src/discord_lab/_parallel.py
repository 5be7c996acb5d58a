from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "DISCORD_LAB_THREADS"


def worker_count() -> int:
    """Thread cap from ``DISCORD_LAB_THREADS``; defaults to 1 (serial)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(func, items):
    """``list(map(func, items))``, optionally threaded; output order follows input order."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
