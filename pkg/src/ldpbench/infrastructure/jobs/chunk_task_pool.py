"""Bounded pool running CPU-bound chunk work off the event loop."""

from __future__ import annotations

import asyncio
import logging
from collections.abc import Callable, Iterable
from typing import TypeVar

from shared.infrastructure.logging import log_event

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_MAX_CONCURRENT_TASKS = 4


class ChunkTaskPool:
    """Runs independent tasks in worker threads, at most ``max_concurrent_tasks``
    at a time.

    Results come back in submission order, so callers that fold them in that
    order get the same answer for every pool size.
    """

    def __init__(
        self, max_concurrent_tasks: int = DEFAULT_MAX_CONCURRENT_TASKS
    ) -> None:
        if max_concurrent_tasks < 1:
            raise ValueError(
                f"max_concurrent_tasks must be >= 1, got {max_concurrent_tasks}"
            )
        self._max_concurrent_tasks = max_concurrent_tasks
        self._logger = logging.getLogger(__name__)

    @property
    def max_concurrent_tasks(self) -> int:
        return self._max_concurrent_tasks

    async def map(self, func: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Apply ``func`` to every item concurrently.

        The first task error is re-raised once every started task has finished.
        """
        semaphore = asyncio.Semaphore(self._max_concurrent_tasks)
        tasks = [
            asyncio.create_task(self._run_one(semaphore, func, item)) for item in items
        ]
        if not tasks:
            return []
        outcomes = await asyncio.gather(*tasks, return_exceptions=True)
        for outcome in outcomes:
            if isinstance(outcome, BaseException):
                raise outcome
        return list(outcomes)  # type: ignore[arg-type]

    async def _run_one(
        self, semaphore: asyncio.Semaphore, func: Callable[[T], R], item: T
    ) -> R:
        async with semaphore:
            try:
                return await asyncio.to_thread(func, item)
            except Exception as exc:
                log_event(
                    self._logger,
                    logging.DEBUG,
                    "Chunk task failed",
                    event="chunk_task_failed",
                    error_type=type(exc).__name__,
                    error=str(exc),
                )
                raise
