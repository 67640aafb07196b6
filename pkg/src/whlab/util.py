"""Small shared helpers: parallel map and file hashing."""

from __future__ import annotations

import hashlib
import os


def available_parallelism() -> int:
    return os.cpu_count() or 1


def pmap(fn, tasks, threads: int):
    """Order-preserving map, optionally over a process pool.

    Workers must be module-level functions and tasks picklable; results
    come back in task order, so aggregation stays deterministic.
    """
    tasks = list(tasks)
    if threads <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor

    chunk = max(1, len(tasks) // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()
