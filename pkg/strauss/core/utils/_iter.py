from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

from strauss import env
from strauss.core.utils._vars import T, U


def ordered_map(iterable: Iterable[T], func: Callable[[T], U], workers: Optional[int] = None) -> list[U]:
    """Map independent items, possibly on a thread pool, preserving input order.

    Exceptions raised by 'func' propagate to the caller."""

    items = list(iterable)
    n_workers = min(env.worker_count(workers if workers is not None else env.STRAUSS_THREADS), len(items))
    if n_workers <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(func, items))
