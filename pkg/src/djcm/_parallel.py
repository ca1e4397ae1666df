import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(requested: int | None = None) -> int:
    """Worker count from ``requested`` or DJCM_THREADS; 0 or unset means one per CPU."""
    if requested is None:
        try:
            requested = int(os.environ.get("DJCM_THREADS", "0"))
        except ValueError:
            requested = 0
    if requested <= 0:
        requested = os.cpu_count() or 1
    return requested


def ordered_map(fn, items, workers: int | None = None):
    """``list(map(fn, items))``, run on a thread pool when more than one worker is allowed."""
    items = list(items)
    n = worker_count(workers)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
