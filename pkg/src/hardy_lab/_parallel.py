"""Thread-count policy shared by the quadrature kernels and the CLI."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "HARDY_LAB_THREADS"


def thread_count() -> int:
    """Threads allowed by ``HARDY_LAB_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get(ENV_VAR, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def map_ordered(fn, items, threads: int | None = None) -> list:
    """``list(map(fn, items))`` on a thread pool; output order follows input order."""
    items = list(items)
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
