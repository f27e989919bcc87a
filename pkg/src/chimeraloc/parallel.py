"""Deterministic work distribution for disorder ensembles.

Tasks are mapped in a fixed order and results consumed in that same order,
so aggregated output is bit-identical regardless of the worker count.
BLAS threading is pinned to one thread inside every task (workers get
whole tasks; oversubscription would only slow things down and makes
LAPACK output depend on the thread count).
"""

from __future__ import annotations

import multiprocessing
import os
from contextlib import nullcontext

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover - threadpoolctl is a hard dep, belt and braces
    def threadpool_limits(limits=None):
        return nullcontext()


def default_workers() -> int:
    return os.cpu_count() or 1


def single_thread_blas():
    return threadpool_limits(limits=1)


def ordered_map(fn, tasks, workers: int | None = None):
    """Map ``fn`` over ``tasks`` and return results in task order."""
    tasks = list(tasks)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    chunksize = max(1, len(tasks) // (workers * 8))
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(processes=min(workers, len(tasks))) as pool:
        return list(pool.imap(fn, tasks, chunksize=chunksize))
