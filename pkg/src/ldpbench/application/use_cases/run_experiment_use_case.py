"""Run an experiment matrix and persist its results."""

from __future__ import annotations

import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from ldpbench.application.services.experiment_service import ExperimentService
from ldpbench.domain.entities.cell_result import CellResult
from ldpbench.domain.repositories.results_repository import ResultsRepository
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell
from ldpbench.domain.value_objects.experiment_matrix import ExperimentMatrix
from shared.infrastructure.logging import log_event

RESULTS_STEM = "results"


@dataclass(frozen=True)
class ExperimentRun:
    results: dict[ExperimentCell, CellResult]
    files: tuple[Path, ...]

    @property
    def failed_cells(self) -> int:
        return sum(1 for result in self.results.values() if not result.ok)


class RunExperimentUseCase:
    """Executes a matrix, then writes ``results.<fmt>`` for every format."""

    _logger = logging.getLogger(__name__)

    def __init__(
        self,
        experiment_service: ExperimentService,
        results_repository: ResultsRepository,
    ) -> None:
        self._experiment_service = experiment_service
        self._results_repository = results_repository

    async def execute(
        self, matrix: ExperimentMatrix, formats: Sequence[str], output_dir: Path
    ) -> ExperimentRun:
        started = time.perf_counter()
        results = await self._experiment_service.run_matrix(matrix)
        files = tuple(
            self._results_repository.write(
                results, fmt, output_dir / f"{RESULTS_STEM}.{fmt}"
            )
            for fmt in formats
        )
        run = ExperimentRun(results=results, files=files)
        log_event(
            self._logger,
            logging.INFO,
            "Experiment finished",
            event="experiment_finished",
            cells=len(results),
            failed_cells=run.failed_cells,
            files=[str(path) for path in files],
            duration_ms=round((time.perf_counter() - started) * 1000, 3),
        )
        return run
