"""Concurrent task execution."""

from .chunk_task_pool import DEFAULT_MAX_CONCURRENT_TASKS, ChunkTaskPool

__all__ = ["DEFAULT_MAX_CONCURRENT_TASKS", "ChunkTaskPool"]
