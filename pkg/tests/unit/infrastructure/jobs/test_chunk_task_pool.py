"""Tests for the bounded chunk task pool."""

from __future__ import annotations

import threading
import time

import pytest

from ldpbench.infrastructure.jobs.chunk_task_pool import ChunkTaskPool


@pytest.mark.unit()
class TestChunkTaskPool:
    async def test_map_returns_results_in_item_order(self) -> None:
        def slow_for_small(item: int) -> int:
            time.sleep(0.001 * (10 - item))
            return item * item

        results = await ChunkTaskPool(4).map(slow_for_small, range(10))

        assert results == [item * item for item in range(10)]

    async def test_map_of_no_items_is_empty(self) -> None:
        assert await ChunkTaskPool(2).map(str, []) == []

    async def test_map_never_exceeds_concurrency_limit(self) -> None:
        lock = threading.Lock()
        running = 0
        peak = 0

        def track(_: int) -> None:
            nonlocal running, peak
            with lock:
                running += 1
                peak = max(peak, running)
            time.sleep(0.01)
            with lock:
                running -= 1

        await ChunkTaskPool(3).map(track, range(12))

        assert 1 <= peak <= 3

    async def test_map_reraises_task_error(self) -> None:
        def fail_on_three(item: int) -> int:
            if item == 3:
                raise RuntimeError("chunk 3 failed")
            return item

        with pytest.raises(RuntimeError, match="chunk 3 failed"):
            await ChunkTaskPool(2).map(fail_on_three, range(6))

    def test_pool_size_below_one_raises(self) -> None:
        with pytest.raises(ValueError):
            ChunkTaskPool(0)
