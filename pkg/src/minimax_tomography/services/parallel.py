"""Chunked, order-preserving data parallelism."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

from tqdm import tqdm

from minimax_tomography.core.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def chunk_ranges(total: int, size: int) -> list[tuple[int, int]]:
    """Split range(total) into consecutive [start, stop) blocks of at most ``size``."""
    size = max(1, size)
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def parallel_map(
    func: Callable[[T], R],
    items: Iterable[T],
    threads: Optional[int] = None,
    desc: Optional[str] = None,
) -> list[R]:
    """Apply ``func`` to every item, returning results in input order.

    Results are reduced by the caller in list order, so the outcome does not
    depend on the thread count.

    Args:
        func: Work function.
        items: Inputs.
        threads: Worker threads; defaults to the THREADS setting.
        desc: Progress-bar label; a bar is shown only when SHOW_PROGRESS is set.
    """
    settings = get_settings()
    work = list(items)
    threads = settings.THREADS if threads is None else threads
    show = settings.SHOW_PROGRESS and desc is not None and len(work) > 1

    if threads <= 1 or len(work) <= 1:
        iterator = tqdm(work, desc=desc, unit="chunk", leave=False) if show else work
        return [func(item) for item in iterator]

    logger.debug(f"Running {len(work)} chunks on {threads} threads")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(func, work)
        if show:
            results = tqdm(results, total=len(work), desc=desc, unit="chunk", leave=False)
        return list(results)
