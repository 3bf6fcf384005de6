"""Order-preserving thread map capped by CONVLAB_THREADS."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CONVLAB_THREADS", os.cpu_count() or 1)))
    except ValueError:
        return 1


def parallel_map(fn, items) -> list:
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
