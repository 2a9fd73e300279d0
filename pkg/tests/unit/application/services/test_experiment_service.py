"""Tests for the experiment engine using in-memory populations."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from typing import TypeVar

import numpy as np
import pytest

from ldpbench.application.services.experiment_service import ExperimentService
from ldpbench.domain.entities.population import Population
from ldpbench.domain.exceptions import DatasetError, ParameterError
from ldpbench.domain.value_objects.domain_spec import DomainSpec
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell
from ldpbench.domain.value_objects.experiment_matrix import ExperimentMatrix
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind, ProtocolSpec
from ldpbench.domain.value_objects.seed_plan import SeedPlan
from ldpbench.infrastructure.jobs.chunk_task_pool import ChunkTaskPool

T = TypeVar("T")
R = TypeVar("R")

D = 8


class InMemoryPopulations:
    """Population repository over a fixed dict."""

    def __init__(self, populations: dict[str, Population]) -> None:
        self._populations = populations
        self.loads: list[tuple[str, int | None]] = []

    def names(self) -> list[str]:
        return list(self._populations)

    def load(self, name: str, run_index: int | None = None) -> Population:
        self.loads.append((name, run_index))
        try:
            return self._populations[name]
        except KeyError:
            raise DatasetError(f"unknown dataset {name!r}") from None


class SerialTaskRunner:
    """Runs every task in the calling thread, in order."""

    def __init__(self) -> None:
        self.batches: list[int] = []

    async def map(self, func: Callable[[T], R], items: Iterable[T]) -> list[R]:
        results = [func(item) for item in items]
        self.batches.append(len(results))
        return results


@pytest.fixture()
def populations() -> InMemoryPopulations:
    generator = np.random.Generator(np.random.PCG64(99))
    weights = [0.4, 0.2, 0.1, 0.1, 0.1, 0.05, 0.03, 0.02]
    skewed = generator.choice(D, size=6000, p=weights)
    return InMemoryPopulations(
        {"toy": Population(skewed.astype(np.int64), DomainSpec(D), "toy")}
    )


def _service(
    populations: InMemoryPopulations, runner: object | None = None
) -> ExperimentService:
    return ExperimentService(
        populations=populations,
        task_runner=runner or SerialTaskRunner(),  # type: ignore[arg-type]
    )


def _cell(kind: ProtocolKind, pp: PPMethod, metric: MetricKind) -> ExperimentCell:
    return ExperimentCell("toy", kind, 1.0, pp, metric)


def _matrix(**overrides: object) -> ExperimentMatrix:
    fields: dict[str, object] = {
        "datasets": ("toy",),
        "protocols": (ProtocolKind.OUE,),
        "epsilons": (1.0,),
        "pp_methods": (PPMethod.NO_PP, PPMethod.NORM_SUB),
        "metrics": (MetricKind.L1,),
        "repeats": 3,
        "seed_plan": SeedPlan(11, chunk_count=3, block_size=512),
    }
    fields.update(overrides)
    return ExperimentMatrix(**fields)  # type: ignore[arg-type]


@pytest.mark.unit()
class TestRunOnce:
    def test_run_once_noiseless_protocol_without_pp_has_zero_l1(
        self, populations: InMemoryPopulations
    ) -> None:
        cell = _cell(ProtocolKind.GRR, PPMethod.NO_PP, MetricKind.L1)

        run = _service(populations).run_once(
            cell, 0, SeedPlan(5), spec=ProtocolSpec.noiseless(ProtocolKind.GRR, D)
        )

        assert run.value == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(run.estimate.values, run.true_frequencies.values)

    def test_run_once_same_seed_gives_same_value(
        self, populations: InMemoryPopulations
    ) -> None:
        cell = _cell(ProtocolKind.OLH, PPMethod.NORM, MetricKind.L2)
        service = _service(populations)

        first = service.run_once(cell, 2, SeedPlan(5, block_size=700))
        second = service.run_once(cell, 2, SeedPlan(5, block_size=700))

        assert first.value == second.value
        assert first.sketch == second.sketch

    def test_run_once_other_run_index_gives_other_sketch(
        self, populations: InMemoryPopulations
    ) -> None:
        cell = _cell(ProtocolKind.GRR, PPMethod.NORM, MetricKind.L2)
        service = _service(populations)

        first = service.run_once(cell, 0, SeedPlan(5))
        second = service.run_once(cell, 1, SeedPlan(5))

        assert first.sketch != second.sketch

    def test_run_once_spec_of_other_domain_raises(
        self, populations: InMemoryPopulations
    ) -> None:
        cell = _cell(ProtocolKind.GRR, PPMethod.NORM, MetricKind.L1)

        with pytest.raises(ParameterError):
            _service(populations).run_once(
                cell, 0, SeedPlan(5), spec=ProtocolSpec.noiseless(ProtocolKind.GRR, 4)
            )


@pytest.mark.unit()
class TestRunChunked:
    @pytest.mark.parametrize("kind", list(ProtocolKind))
    async def test_run_chunked_matches_serial_run_for_any_chunk_count(
        self, populations: InMemoryPopulations, kind: ProtocolKind
    ) -> None:
        cell = _cell(kind, PPMethod.NORM_SUB, MetricKind.L1)
        service = _service(populations)
        serial = service.run_once(cell, 1, SeedPlan(3, block_size=512))

        for chunk_count in (1, 8):
            plan = SeedPlan(3, chunk_count=chunk_count, block_size=512)
            chunked = await service.run_chunked(cell, 1, plan)

            assert chunked.sketch == serial.sketch
            assert chunked.value == serial.value

    async def test_run_chunked_submits_one_task_per_chunk(
        self, populations: InMemoryPopulations
    ) -> None:
        runner = SerialTaskRunner()
        cell = _cell(ProtocolKind.GRR, PPMethod.NORM, MetricKind.L1)

        await _service(populations, runner).run_chunked(
            cell, 0, SeedPlan(3, chunk_count=4, block_size=512)
        )

        assert runner.batches == [4]


@pytest.mark.unit()
class TestRunMatrix:
    async def test_run_matrix_two_methods_three_repeats(
        self, populations: InMemoryPopulations
    ) -> None:
        results = await _service(populations).run_matrix(_matrix())

        assert len(results) == 2
        assert all(result.ok for result in results.values())
        assert {result.repeats for result in results.values()} == {3}

    async def test_run_matrix_methods_of_a_group_share_each_run(
        self, populations: InMemoryPopulations
    ) -> None:
        # With shared perturbation, Base-Pos can never do worse than No-PP
        # on L1 because clamping only moves estimates towards [0, 1].
        matrix = _matrix(
            pp_methods=(PPMethod.NO_PP, PPMethod.BASE_POS), epsilons=(0.2,)
        )

        results = await _service(populations).run_matrix(matrix)

        by_pp = {cell.pp: result for cell, result in results.items()}
        for base_pos, no_pp in zip(
            by_pp[PPMethod.BASE_POS].per_run_values,
            by_pp[PPMethod.NO_PP].per_run_values,
            strict=True,
        ):
            assert base_pos <= no_pp

    async def test_run_matrix_results_do_not_depend_on_pool_size(
        self, populations: InMemoryPopulations
    ) -> None:
        matrix = _matrix(
            protocols=(ProtocolKind.GRR, ProtocolKind.OLH, ProtocolKind.SS),
            epsilons=(0.5, 2.0),
            metrics=(MetricKind.L2, MetricKind.EMD),
        )
        outcomes = []
        for size in (1, 4, 16):
            service = _service(populations, ChunkTaskPool(size))
            results = await service.run_matrix(matrix)
            outcomes.append(
                {cell: result.per_run_values for cell, result in results.items()}
            )

        assert outcomes[0] == outcomes[1] == outcomes[2]

    async def test_run_matrix_failing_group_marks_its_cells_failed(
        self, populations: InMemoryPopulations
    ) -> None:
        # e^1000 overflows, so the protocol for that budget cannot be built.
        matrix = _matrix(epsilons=(1.0, 1000.0))

        results = await _service(populations).run_matrix(matrix)

        failed = [cell for cell, result in results.items() if not result.ok]
        assert {cell.epsilon for cell in failed} == {1000.0}
        assert len(failed) == 2
        assert results[failed[0]].error is not None
        assert results[failed[0]].error.startswith("ParameterError")

    async def test_run_matrix_unknown_dataset_raises(
        self, populations: InMemoryPopulations
    ) -> None:
        with pytest.raises(DatasetError):
            await _service(populations).run_matrix(_matrix(datasets=("missing",)))

    async def test_run_matrix_reuses_population_unless_resampling(
        self, populations: InMemoryPopulations
    ) -> None:
        await _service(populations).run_matrix(_matrix(resample_population=True))

        run_indices = {run for _, run in populations.loads if run is not None}
        assert run_indices == {0, 1, 2}
