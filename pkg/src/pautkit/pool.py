"""Thread fan-out with results reassembled in input order."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """Apply fn to every item, returning results in input order.

    With jobs <= 1 everything runs inline. Otherwise work is spread over a
    thread pool and gathered by sequence number, so the returned list never
    depends on completion order. The first exception raised by fn propagates.
    """
    work = list(items)
    if jobs <= 1 or len(work) <= 1:
        return [fn(item) for item in work]

    results: Dict[int, R] = {}
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = {pool.submit(fn, item): seq for seq, item in enumerate(work)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()

    return [results[seq] for seq in sorted(results)]
