"""Ordered task execution over a process pool."""

import asyncio
import os

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import structlog


logger = structlog.get_logger()

T = TypeVar("T")
R = TypeVar("R")


def default_jobs() -> int:
    """Worker count when none is configured: one per CPU."""
    return os.cpu_count() or 1


async def _gather(fn: Callable[[T], R], items: Sequence[T], jobs: int) -> List[R]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [loop.run_in_executor(pool, fn, item) for item in items]
        return list(await asyncio.gather(*futures))


def run_tasks(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> List[R]:
    """Apply ``fn`` to every item, results in submission order.

    ``fn`` and the items must be picklable when ``jobs > 1``. Tasks carry
    their own seeds, so the output does not depend on ``jobs``.

    Args:
        fn: Task function (module-level)
        items: Task inputs
        jobs: Maximum worker processes; ``<= 1`` runs in-process

    Returns:
        One result per item, in input order
    """
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    workers = min(jobs, len(items))
    logger.debug("Dispatching tasks to process pool", tasks=len(items), jobs=workers)
    return asyncio.run(_gather(fn, items, workers))
