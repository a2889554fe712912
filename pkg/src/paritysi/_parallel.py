"""Fan a range of work out to a shared thread pool, with a barrier at the end."""

import atexit
import threading
from concurrent.futures import ThreadPoolExecutor

_pools: dict[int, ThreadPoolExecutor] = {}
_lock = threading.Lock()


def _pool(workers: int) -> ThreadPoolExecutor:
    with _lock:
        pool = _pools.get(workers)
        if pool is None:
            pool = _pools[workers] = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="paritysi")
        return pool


@atexit.register
def _shutdown():
    for pool in _pools.values():
        pool.shutdown(wait=False)


def chunks(count: int, workers: int):
    """Split ``range(count)`` into at most ``workers`` contiguous ``(lo, hi)`` pieces."""
    workers = max(1, min(workers, count))
    step, extra = divmod(count, workers)
    lo = 0
    for i in range(workers):
        hi = lo + step + (1 if i < extra else 0)
        yield lo, hi
        lo = hi


def run_chunks(fn, count: int, workers: int, min_chunk: int = 1):
    """Call ``fn(lo, hi)`` over a partition of ``range(count)`` and wait for all of it."""
    if count == 0:
        return
    workers = min(workers, max(1, count // max(min_chunk, 1)))
    if workers <= 1:
        fn(0, count)
        return
    futures = [_pool(workers).submit(fn, lo, hi) for lo, hi in chunks(count, workers)]
    for f in futures:
        f.result()
