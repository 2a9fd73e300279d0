"""Process-level settings read from the environment."""

from __future__ import annotations

import os
from dataclasses import dataclass

from ldpbench.infrastructure.jobs.chunk_task_pool import DEFAULT_MAX_CONCURRENT_TASKS
from shared.infrastructure.env import env_str, parse_int_env


@dataclass(frozen=True)
class BenchmarkSettings:
    """Knobs that affect speed and verbosity, never results."""

    max_concurrent_tasks: int = DEFAULT_MAX_CONCURRENT_TASKS
    log_level: str = "INFO"

    @classmethod
    def from_environment(cls) -> BenchmarkSettings:
        return cls(
            max_concurrent_tasks=parse_int_env(
                "LDPBENCH_MAX_CONCURRENT_TASKS",
                os.environ.get("LDPBENCH_MAX_CONCURRENT_TASKS"),
                default=DEFAULT_MAX_CONCURRENT_TASKS,
                minimum=1,
            ),
            log_level=env_str("LDPBENCH_LOG_LEVEL", "INFO").upper(),
        )
