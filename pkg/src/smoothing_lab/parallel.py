"""Deterministic worker mapping with an environment-variable thread cap."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

THREADS_ENV = "SMOOTHING_LAB_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """Worker count: 1 unless SMOOTHING_LAB_THREADS requests more.

    The variable is a cap, not a promise; invalid values fall back to 1.
    """
    raw = os.environ.get(THREADS_ENV, "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    cpus = os.cpu_count() or 1
    return max(1, min(n, cpus))


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Order-preserving map over independent pure tasks.

    Results do not depend on scheduling: every task must derive any
    randomness from its own item (e.g. a (seed, index) pair).
    """
    seq: Sequence[T] = list(items)
    workers = thread_count()
    if workers <= 1 or len(seq) <= 1:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seq))
