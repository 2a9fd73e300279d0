"""Task runner protocol used by the experiment engine."""

from collections.abc import Callable, Iterable
from typing import Protocol, TypeVar, runtime_checkable

T = TypeVar("T")
R = TypeVar("R")


@runtime_checkable
class TaskRunner(Protocol):
    """Runs independent, CPU-bound tasks with bounded concurrency."""

    async def map(self, func: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Return ``[func(item) for item in items]``, in item order."""
        ...
