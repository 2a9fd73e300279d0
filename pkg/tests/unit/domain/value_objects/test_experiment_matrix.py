"""Tests for experiment cells, the matrix cross product and frequency vectors."""

from __future__ import annotations

import numpy as np
import pytest

from ldpbench.domain.exceptions import ParameterError, ValidationError
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell, GroupKey
from ldpbench.domain.value_objects.experiment_matrix import ExperimentMatrix
from ldpbench.domain.value_objects.frequency_vector import FrequencyTag, FrequencyVector
from ldpbench.domain.value_objects.generator_config import (
    GeneratorConfig,
    GeneratorKind,
)
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind
from ldpbench.domain.value_objects.seed_plan import SeedPlan


def _matrix(**overrides: object) -> ExperimentMatrix:
    fields: dict[str, object] = {
        "datasets": ("zipf",),
        "protocols": (ProtocolKind.GRR,),
        "epsilons": (1.0,),
        "pp_methods": (PPMethod.NO_PP, PPMethod.NORM_SUB),
        "metrics": (MetricKind.L1,),
        "repeats": 3,
        "seed_plan": SeedPlan(7),
    }
    fields.update(overrides)
    return ExperimentMatrix(**fields)  # type: ignore[arg-type]


@pytest.mark.unit()
class TestExperimentMatrix:
    def test_matrix_two_pp_methods_gives_two_cells(self) -> None:
        matrix = _matrix()

        assert len(matrix.cells()) == 2
        assert matrix.group_keys() == [GroupKey("zipf", ProtocolKind.GRR, 1.0)]

    def test_matrix_group_keys_order_dataset_protocol_epsilon(self) -> None:
        matrix = _matrix(
            datasets=("a", "b"),
            protocols=(ProtocolKind.OUE, ProtocolKind.GRR),
            epsilons=(2.0, 0.5),
        )

        keys = matrix.group_keys()

        assert keys[0] == GroupKey("a", ProtocolKind.OUE, 2.0)
        assert keys[1] == GroupKey("a", ProtocolKind.OUE, 0.5)
        assert keys[2] == GroupKey("a", ProtocolKind.GRR, 2.0)
        assert len(keys) == 8
        assert len(matrix.cells()) == 8 * 2

    def test_cells_of_group_share_group_key(self) -> None:
        matrix = _matrix(metrics=(MetricKind.L1, MetricKind.KL))
        key = matrix.group_keys()[0]

        cells = matrix.cells_of(key)

        assert len(cells) == 4
        assert {cell.group_key for cell in cells} == {key}

    @pytest.mark.parametrize(
        "overrides",
        [
            {"datasets": ()},
            {"pp_methods": (PPMethod.NORM, PPMethod.NORM)},
            {"repeats": 0},
        ],
    )
    def test_matrix_invalid_lists_raise(self, overrides: dict[str, object]) -> None:
        with pytest.raises(ValidationError):
            _matrix(**overrides)

    def test_matrix_non_positive_epsilon_raises(self) -> None:
        with pytest.raises(ParameterError):
            _matrix(epsilons=(0.0,))


@pytest.mark.unit()
class TestExperimentCell:
    def test_sort_key_orders_by_dataset_then_protocol_name(self) -> None:
        cells = [
            ExperimentCell("b", ProtocolKind.GRR, 1.0, PPMethod.NORM, MetricKind.L1),
            ExperimentCell("a", ProtocolKind.SS, 1.0, PPMethod.NORM, MetricKind.L1),
            ExperimentCell("a", ProtocolKind.BLH, 2.0, PPMethod.NORM, MetricKind.L1),
        ]

        ordered = sorted(cells, key=ExperimentCell.sort_key)

        assert [(c.dataset, c.protocol) for c in ordered] == [
            ("a", ProtocolKind.BLH),
            ("a", ProtocolKind.SS),
            ("b", ProtocolKind.GRR),
        ]

    def test_cell_requires_dataset_name(self) -> None:
        with pytest.raises(ValidationError):
            ExperimentCell("", ProtocolKind.GRR, 1.0, PPMethod.NORM, MetricKind.L1)


@pytest.mark.unit()
class TestFrequencyVector:
    def test_true_vector_must_sum_to_one(self) -> None:
        with pytest.raises(ValidationError):
            FrequencyVector(np.array([0.5, 0.6]), FrequencyTag.TRUE)

    def test_true_vector_must_be_non_negative(self) -> None:
        with pytest.raises(ValidationError):
            FrequencyVector(np.array([1.5, -0.5]), FrequencyTag.TRUE)

    def test_estimated_vector_may_be_negative(self) -> None:
        vector = FrequencyVector.estimated([1.5, -0.5])

        assert vector.total() == 1.0
        assert vector.d == 2

    def test_vector_is_read_only(self) -> None:
        vector = FrequencyVector.post_processed([0.5, 0.5])

        with pytest.raises(ValueError):
            vector.values[0] = 1.0


@pytest.mark.unit()
class TestGeneratorConfig:
    def test_generator_kind_accepts_zipfian_alias(self) -> None:
        assert GeneratorKind.from_string("Zipfian") is GeneratorKind.ZIPF

    @pytest.mark.parametrize(
        "overrides",
        [{"n": 0}, {"d": 1}, {"sd": 0.0}, {"s": -1.0}, {"seed": -1}],
    )
    def test_generator_config_invalid_values_raise(
        self, overrides: dict[str, object]
    ) -> None:
        with pytest.raises(ParameterError):
            GeneratorConfig(
                GeneratorKind.GAUSSIAN, **overrides  # type: ignore[arg-type]
            )

    def test_default_name_describes_parameters(self) -> None:
        config = GeneratorConfig(GeneratorKind.ZIPF, d=32, s=1.5)

        assert config.default_name() == "zipf-s1.5-d32"
