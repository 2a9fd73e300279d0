"""Experiment engine: simulates the LDP pipeline for every cell of a matrix."""

from __future__ import annotations

import logging
import time
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from ldpbench.domain.entities.cell_result import CellResult
from ldpbench.domain.entities.population import Population
from ldpbench.domain.entities.sketch import Sketch, merge_sketches
from ldpbench.domain.exceptions import ParameterError
from ldpbench.domain.repositories.population_repository import PopulationRepository
from ldpbench.domain.repositories.task_runner import TaskRunner
from ldpbench.domain.services.frequency_oracle_service import FrequencyOracleService
from ldpbench.domain.services.postprocessing_service import PostProcessingService
from ldpbench.domain.services.true_frequencies import true_frequencies
from ldpbench.domain.services.utility_metrics_service import UtilityMetricsService
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell, GroupKey
from ldpbench.domain.value_objects.experiment_matrix import ExperimentMatrix
from ldpbench.domain.value_objects.frequency_vector import FrequencyVector
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import NormalizationConstants, PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolSpec
from ldpbench.domain.value_objects.seed_plan import SeedPlan
from shared.infrastructure.logging import log_event
from shared.infrastructure.telemetry.config import TelemetryConfig
from shared.infrastructure.telemetry.metrics import MetricsRecorder
from shared.infrastructure.telemetry.tracing import TracingProvider


@dataclass(frozen=True)
class GroupRun:
    """One run of a (dataset, protocol, epsilon) group.

    Every PP method and metric of the group is evaluated on the same sketch.
    ``errors`` holds the exception of every (pp, metric) pair that has no
    value.
    """

    run_index: int
    spec: ProtocolSpec
    sketch: Sketch
    true_frequencies: FrequencyVector
    estimate: FrequencyVector
    post_processed: Mapping[PPMethod, FrequencyVector]
    constants: Mapping[PPMethod, NormalizationConstants]
    values: Mapping[tuple[PPMethod, MetricKind], float]
    errors: Mapping[tuple[PPMethod, MetricKind], Exception] = field(
        default_factory=dict
    )


@dataclass(frozen=True)
class CellRun:
    """Metric value of one run of one cell, with the vectors that produced it."""

    cell: ExperimentCell
    run_index: int
    value: float
    spec: ProtocolSpec
    sketch: Sketch
    true_frequencies: FrequencyVector
    estimate: FrequencyVector
    post_processed: FrequencyVector
    constants: NormalizationConstants


def _describe(exc: BaseException) -> str:
    return f"{type(exc).__name__}: {exc}"


class ExperimentService:
    """Runs cells, groups and whole matrices.

    A run perturbs the population block by block, each block drawing from
    the stream ``seed_plan.rng(group_index, run_index, block_index)``, merges
    the block sketches in block order, then estimates, post-processes and
    measures. Chunks only decide which blocks share a task, so results never
    depend on the chunk count or on the task runner's concurrency.
    """

    _logger = logging.getLogger(__name__)

    def __init__(
        self,
        populations: PopulationRepository,
        task_runner: TaskRunner,
        oracle: FrequencyOracleService | None = None,
        postprocessing: PostProcessingService | None = None,
        utility_metrics: UtilityMetricsService | None = None,
        metrics_recorder: MetricsRecorder | None = None,
        tracing: TracingProvider | None = None,
    ) -> None:
        self._populations = populations
        self._task_runner = task_runner
        self._oracle = oracle or FrequencyOracleService()
        self._postprocessing = postprocessing or PostProcessingService(self._oracle)
        self._utility_metrics = utility_metrics or UtilityMetricsService()
        disabled = TelemetryConfig.disabled()
        self._metrics = metrics_recorder or MetricsRecorder(config=disabled)
        self._tracing = tracing or TracingProvider(config=disabled)

    def _population(
        self, dataset: str, run_index: int, resample_population: bool
    ) -> Population:
        return self._populations.load(
            dataset, run_index if resample_population else None
        )

    def _protocol(
        self, key: GroupKey, population: Population, spec: ProtocolSpec | None
    ) -> ProtocolSpec:
        if spec is None:
            return self._oracle.build_protocol(key.protocol, population.d, key.epsilon)
        if spec.d != population.d:
            raise ParameterError(
                f"protocol domain {spec.d} does not match dataset domain "
                f"{population.d}"
            )
        return spec

    def _perturb_blocks(
        self,
        spec: ProtocolSpec,
        values: npt.NDArray[np.int64],
        seed_plan: SeedPlan,
        group_index: int,
        run_index: int,
        blocks: Iterable[int],
    ) -> Sketch:
        """Perturb and aggregate the users of ``blocks``, in block order."""
        bounds = seed_plan.block_bounds(values.size)
        sketches = []
        for block in blocks:
            start, stop = bounds[block]
            rng = seed_plan.rng(group_index, run_index, block)
            batch = self._oracle.perturb_batch(spec, values[start:stop], rng)
            sketches.append(self._oracle.aggregate_batch(spec, batch))
        return merge_sketches(spec.d, sketches)

    def _evaluate(
        self,
        run_index: int,
        spec: ProtocolSpec,
        population: Population,
        sketch: Sketch,
        pp_methods: Sequence[PPMethod],
        metrics: Sequence[MetricKind],
    ) -> GroupRun:
        """Estimate, post-process and measure; failures are kept per pair."""
        truth = true_frequencies(population)
        estimate = self._oracle.estimate(spec, sketch)
        post_processed: dict[PPMethod, FrequencyVector] = {}
        constants: dict[PPMethod, NormalizationConstants] = {}
        values: dict[tuple[PPMethod, MetricKind], float] = {}
        errors: dict[tuple[PPMethod, MetricKind], Exception] = {}

        for pp in pp_methods:
            try:
                post_processed[pp], constants[pp] = self._postprocessing.apply(
                    pp, estimate, spec, population.n
                )
            except Exception as exc:
                for metric in metrics:
                    errors[(pp, metric)] = exc
                continue
            for metric in metrics:
                try:
                    values[(pp, metric)] = self._utility_metrics.evaluate(
                        metric, truth, post_processed[pp]
                    )
                except Exception as exc:
                    errors[(pp, metric)] = exc

        return GroupRun(
            run_index=run_index,
            spec=spec,
            sketch=sketch,
            true_frequencies=truth,
            estimate=estimate,
            post_processed=post_processed,
            constants=constants,
            values=values,
            errors=errors,
        )

    def _cell_run(self, cell: ExperimentCell, run: GroupRun) -> CellRun:
        key = (cell.pp, cell.metric)
        if key in run.errors:
            raise run.errors[key]
        return CellRun(
            cell=cell,
            run_index=run.run_index,
            value=run.values[key],
            spec=run.spec,
            sketch=run.sketch,
            true_frequencies=run.true_frequencies,
            estimate=run.estimate,
            post_processed=run.post_processed[cell.pp],
            constants=run.constants[cell.pp],
        )

    def run_once(
        self,
        cell: ExperimentCell,
        run_index: int,
        seed_plan: SeedPlan,
        *,
        group_index: int = 0,
        resample_population: bool = False,
        spec: ProtocolSpec | None = None,
    ) -> CellRun:
        """Run ``cell`` once, serially, in the calling thread.

        Args:
            cell: The cell to run
            run_index: Run number, part of every block's seed
            seed_plan: Master seed and block size
            group_index: Seed index of the cell's group within its matrix
            resample_population: Redraw synthetic populations for this run
            spec: Protocol instance to use instead of building one from the
                cell, e.g. ``ProtocolSpec.noiseless``

        Raises:
            DomainError: From any pipeline stage.
        """
        population = self._population(cell.dataset, run_index, resample_population)
        spec = self._protocol(cell.group_key, population, spec)
        blocks = range(len(seed_plan.block_bounds(population.n)))
        sketch = self._perturb_blocks(
            spec, population.values, seed_plan, group_index, run_index, blocks
        )
        run = self._evaluate(
            run_index, spec, population, sketch, [cell.pp], [cell.metric]
        )
        return self._cell_run(cell, run)

    async def run_chunked(
        self,
        cell: ExperimentCell,
        run_index: int,
        seed_plan: SeedPlan,
        *,
        group_index: int = 0,
        resample_population: bool = False,
        spec: ProtocolSpec | None = None,
    ) -> CellRun:
        """Same as :meth:`run_once`, with the blocks split into
        ``seed_plan.chunk_count`` tasks on the task runner."""
        population = self._population(cell.dataset, run_index, resample_population)
        spec = self._protocol(cell.group_key, population, spec)
        sketch = await self._chunked_sketch(
            spec, population, seed_plan, group_index, run_index
        )
        run = self._evaluate(
            run_index, spec, population, sketch, [cell.pp], [cell.metric]
        )
        return self._cell_run(cell, run)

    async def _chunked_sketch(
        self,
        spec: ProtocolSpec,
        population: Population,
        seed_plan: SeedPlan,
        group_index: int,
        run_index: int,
    ) -> Sketch:
        layout = seed_plan.chunk_layout(len(seed_plan.block_bounds(population.n)))
        sketches = await self._task_runner.map(
            lambda chunk: self._perturb_blocks(
                spec, population.values, seed_plan, group_index, run_index, chunk
            ),
            layout,
        )
        return merge_sketches(spec.d, sketches)

    async def run_group(
        self, matrix: ExperimentMatrix, group_index: int, key: GroupKey
    ) -> list[GroupRun]:
        """All runs of one group.

        Every (run, chunk) pair is one perturbation task; the runs are then
        evaluated as one task each.
        """
        populations = [
            self._population(key.dataset, run_index, matrix.resample_population)
            for run_index in range(matrix.repeats)
        ]
        spec = self._protocol(key, populations[0], None)
        seed_plan = matrix.seed_plan

        tasks = [
            (run_index, chunk)
            for run_index, population in enumerate(populations)
            for chunk in seed_plan.chunk_layout(
                len(seed_plan.block_bounds(population.n))
            )
        ]
        chunk_sketches = await self._task_runner.map(
            lambda task: self._perturb_blocks(
                spec,
                populations[task[0]].values,
                seed_plan,
                group_index,
                task[0],
                task[1],
            ),
            tasks,
        )
        per_run: list[list[Sketch]] = [[] for _ in populations]
        for (run_index, _), sketch in zip(tasks, chunk_sketches, strict=True):
            per_run[run_index].append(sketch)

        return await self._task_runner.map(
            lambda run_index: self._evaluate(
                run_index,
                spec,
                populations[run_index],
                merge_sketches(spec.d, per_run[run_index]),
                matrix.pp_methods,
                matrix.metrics,
            ),
            range(matrix.repeats),
        )

    async def run_matrix(
        self, matrix: ExperimentMatrix
    ) -> dict[ExperimentCell, CellResult]:
        """Run every cell ``matrix.repeats`` times.

        A failing group or (pp, metric) pair marks the affected cells as
        failed and the matrix carries on.

        Raises:
            DatasetError: If a dataset cannot be resolved.
        """
        for dataset in matrix.datasets:
            self._populations.load(dataset)

        results: dict[ExperimentCell, CellResult] = {}
        keys = matrix.group_keys()
        with self._tracing.span(
            "run_matrix", groups=len(keys), repeats=matrix.repeats
        ):
            for group_index, key in enumerate(keys):
                results.update(await self._run_group_cells(matrix, group_index, key))
        return results

    async def _run_group_cells(
        self, matrix: ExperimentMatrix, group_index: int, key: GroupKey
    ) -> dict[ExperimentCell, CellResult]:
        cells = matrix.cells_of(key)
        started = time.perf_counter()
        with self._tracing.span(
            "run_group",
            dataset=key.dataset,
            protocol=key.protocol.value,
            epsilon=key.epsilon,
        ):
            try:
                runs = await self.run_group(matrix, group_index, key)
            except Exception as exc:
                duration = time.perf_counter() - started
                self._record_failure(key, "run_group", exc)
                self._metrics.record_run(
                    protocol=key.protocol.value, status="error", duration_s=duration
                )
                self._metrics.record_cells(count=len(cells), status="error")
                return {cell: CellResult.failed(cell, _describe(exc)) for cell in cells}

        results: dict[ExperimentCell, CellResult] = {}
        for cell in cells:
            pair = (cell.pp, cell.metric)
            failure = next(
                (run.errors[pair] for run in runs if pair in run.errors), None
            )
            if failure is not None:
                log_event(
                    self._logger,
                    logging.WARNING,
                    "Cell run failed",
                    event="cell_run_failed",
                    dataset=key.dataset,
                    protocol=key.protocol.value,
                    epsilon=key.epsilon,
                    pp=cell.pp.value,
                    metric=cell.metric.value,
                    error_type=type(failure).__name__,
                    error=str(failure),
                )
                self._metrics.record_error(
                    where="evaluate", error_type=type(failure).__name__
                )
                results[cell] = CellResult.failed(cell, _describe(failure))
            else:
                values = tuple(run.values[pair] for run in runs)
                results[cell] = CellResult(cell, values)

        duration = time.perf_counter() - started
        failed = sum(1 for result in results.values() if not result.ok)
        self._metrics.record_run(
            protocol=key.protocol.value,
            status="ok" if failed == 0 else "partial",
            duration_s=duration,
        )
        self._metrics.record_cells(count=len(cells) - failed, status="ok")
        self._metrics.record_cells(count=failed, status="error")
        log_event(
            self._logger,
            logging.INFO,
            "Cell group completed",
            event="cell_group_completed",
            dataset=key.dataset,
            protocol=key.protocol.value,
            epsilon=key.epsilon,
            group_index=group_index,
            repeats=matrix.repeats,
            cells=len(cells),
            failed_cells=failed,
            d=runs[0].spec.d,
            duration_ms=round(duration * 1000, 3),
        )
        return results

    def _record_failure(self, key: GroupKey, where: str, exc: Exception) -> None:
        log_event(
            self._logger,
            logging.ERROR,
            "Cell group failed",
            event="cell_run_failed",
            dataset=key.dataset,
            protocol=key.protocol.value,
            epsilon=key.epsilon,
            error_type=type(exc).__name__,
            error=str(exc),
            exc_info=exc,
        )
        self._metrics.record_error(where=where, error_type=type(exc).__name__)
