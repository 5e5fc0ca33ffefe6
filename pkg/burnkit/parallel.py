# =========================
# FILE: burnkit/parallel.py
# =========================
"""
Thread-pool helpers whose results never depend on scheduling.

Two shapes of parallel work show up in the solvers:
  1. Independent sweeps (one BFS per source) that must come back in input
     order: `ordered_map`.
  2. A scan over candidates that stops at the first acceptable one (GrP over
     first vertices). Running candidates in waves of `threads` and taking the
     smallest accepted index per wave returns exactly what the sequential
     ascending loop would: `first_accepted`.

With threads == 1 both run inline, no pool at all (timing runs use that).
"""

import concurrent.futures
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """[fn(x) for x in items], possibly on a pool, always in input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    pool = concurrent.futures.ThreadPoolExecutor(max_workers=threads)
    try:
        futures = [pool.submit(fn, x) for x in items]
        return [f.result() for f in futures]
    finally:
        pool.shutdown(wait=False, cancel_futures=True)


def first_accepted(
    fn: Callable[[T], R],
    items: Sequence[T],
    accept: Callable[[R], bool],
    threads: int = 1,
    on_result: Optional[Callable[[T, R], None]] = None,
) -> Tuple[Optional[int], List[R]]:
    """
    Evaluate fn over items in ascending order until accept() holds.

    Returns (index of the first accepted item or None, every result computed
    up to and including it). Results past the accepted index are discarded
    even if a wave already computed them.
    """
    results: List[R] = []
    if threads <= 1:
        for i, x in enumerate(items):
            r = fn(x)
            results.append(r)
            if on_result:
                on_result(x, r)
            if accept(r):
                return i, results
        return None, results

    pool = concurrent.futures.ThreadPoolExecutor(max_workers=threads)
    try:
        for start in range(0, len(items), threads):
            wave = items[start:start + threads]
            futures = [pool.submit(fn, x) for x in wave]
            wave_results = [f.result() for f in futures]
            for offset, r in enumerate(wave_results):
                results.append(r)
                if on_result:
                    on_result(wave[offset], r)
                if accept(r):
                    return start + offset, results
        return None, results
    finally:
        pool.shutdown(wait=False, cancel_futures=True)
