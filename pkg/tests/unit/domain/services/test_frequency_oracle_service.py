"""Tests for protocol construction, perturbation, aggregation and estimation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from ldpbench.domain.entities.report import (
    BitVectorReport,
    HashReport,
    SubsetReport,
    ValueReport,
)
from ldpbench.domain.entities.sketch import Sketch
from ldpbench.domain.exceptions import (
    DomainValueError,
    EmptySketchError,
    ParameterError,
    ReportShapeError,
)
from ldpbench.domain.services.frequency_oracle_service import FrequencyOracleService
from ldpbench.domain.value_objects.frequency_vector import FrequencyTag
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind, ProtocolSpec

LN3 = math.log(3)


@pytest.fixture()
def oracle() -> FrequencyOracleService:
    return FrequencyOracleService()


@pytest.mark.unit()
class TestBuildProtocol:
    """Protocol parameters for a domain size and budget."""

    def test_build_protocol_grr_ln3_gives_half_and_sixth(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.GRR, 4, LN3)

        assert spec.p == pytest.approx(0.5)
        assert spec.q == pytest.approx(1 / 6)

    def test_build_protocol_olh_ln3_picks_four_buckets(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.OLH, 100, LN3)

        assert spec.g == 4
        assert spec.p == pytest.approx(0.5)
        assert spec.support_q == pytest.approx(0.25)
        assert spec.prime == 65537

    def test_build_protocol_ss_ln3_picks_quarter_subset(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.SS, 100, LN3)

        assert spec.k == 25
        assert spec.p == pytest.approx(0.5)

    def test_build_protocol_blh_uses_binary_hash(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.BLH, 16, 1.0)

        assert spec.g == 2
        assert spec.p == pytest.approx(math.e / (math.e + 1))
        assert spec.support_q == 0.5

    def test_build_protocol_rappor_splits_budget_over_two_bits(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.RAPPOR, 8, 2.0)

        assert spec.p == pytest.approx(math.e / (math.e + 1))
        assert spec.q == pytest.approx(1 / (math.e + 1))

    def test_build_protocol_oue_keeps_half(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.OUE, 8, LN3)

        assert spec.p == 0.5
        assert spec.q == pytest.approx(0.25)

    @pytest.mark.parametrize(
        ("d", "epsilon"),
        [(1, 1.0), (4, 0.0), (4, -1.0), (4, math.inf), (4, math.nan), (4, 1000.0)],
    )
    def test_build_protocol_invalid_parameters_raise(
        self, oracle: FrequencyOracleService, d: int, epsilon: float
    ) -> None:
        with pytest.raises(ParameterError):
            oracle.build_protocol(ProtocolKind.GRR, d, epsilon)


@pytest.mark.unit()
class TestPerturb:
    """Client-side perturbation."""

    def test_perturb_noiseless_grr_keeps_value(
        self, oracle: FrequencyOracleService, rng: np.random.Generator
    ) -> None:
        spec = ProtocolSpec.noiseless(ProtocolKind.GRR, 4)

        assert oracle.perturb(spec, 3, rng) == ValueReport(ProtocolKind.GRR, 3)

    @pytest.mark.parametrize("kind", list(ProtocolKind))
    def test_perturb_same_seed_gives_same_report(
        self, oracle: FrequencyOracleService, kind: ProtocolKind
    ) -> None:
        spec = oracle.build_protocol(kind, 8, 1.0)

        first = oracle.perturb(spec, 5, np.random.Generator(np.random.PCG64(7)))
        second = oracle.perturb(spec, 5, np.random.Generator(np.random.PCG64(7)))

        assert first == second

    @pytest.mark.parametrize("value", [-1, 4])
    def test_perturb_value_outside_domain_raises(
        self, oracle: FrequencyOracleService, rng: np.random.Generator, value: int
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.OUE, 4, 1.0)

        with pytest.raises(DomainValueError):
            oracle.perturb(spec, value, rng)

    def test_perturb_batch_ss_reports_have_k_members(
        self, oracle: FrequencyOracleService, rng: np.random.Generator
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.SS, 10, 0.5)
        values = rng.integers(0, 10, size=500)

        batch = oracle.perturb_batch(spec, values, rng)

        assert batch.support is not None
        assert set(batch.support.sum(axis=1).tolist()) == {spec.k}

    def test_perturb_batch_hash_buckets_stay_in_range(
        self, oracle: FrequencyOracleService, rng: np.random.Generator
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.OLH, 32, 2.0)

        batch = oracle.perturb_batch(spec, rng.integers(0, 32, size=1000), rng)

        assert batch.buckets is not None and batch.a is not None
        assert batch.buckets.min() >= 0
        assert batch.buckets.max() < spec.g
        assert batch.a.min() >= 1

    def test_perturb_batch_grr_lies_uniformly_over_other_values(
        self, oracle: FrequencyOracleService, rng: np.random.Generator
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.GRR, 4, LN3)

        batch = oracle.perturb_batch(spec, np.zeros(60_000, dtype=np.int64), rng)

        assert batch.values is not None
        fractions = np.bincount(batch.values, minlength=4) / 60_000
        np.testing.assert_allclose(fractions, [0.5, 1 / 6, 1 / 6, 1 / 6], atol=0.01)


@pytest.mark.unit()
class TestAggregate:
    """Server-side support counting."""

    def test_aggregate_zero_reports_gives_empty_sketch(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.GRR, 3, 1.0)

        sketch = oracle.aggregate(spec, [])

        assert sketch == Sketch.empty(3)

    def test_aggregate_grr_counts_reported_values(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.GRR, 3, 1.0)
        reports = [ValueReport(ProtocolKind.GRR, v) for v in (2, 2, 0)]

        sketch = oracle.aggregate(spec, reports)

        assert sketch.support_counts.tolist() == [1, 0, 2]
        assert sketch.n == 3

    def test_aggregate_ss_counts_subset_membership(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = ProtocolSpec(ProtocolKind.SS, 3, 1.0, 0.8, 0.5, k=2)
        reports = [
            SubsetReport(ProtocolKind.SS, frozenset({0, 1})),
            SubsetReport(ProtocolKind.SS, frozenset({1, 2})),
        ]

        sketch = oracle.aggregate(spec, reports)

        assert sketch.support_counts.tolist() == [1, 2, 1]
        assert sketch.n == 2

    def test_aggregate_hash_report_supports_every_colliding_value(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.OLH, 8, 1.0)
        assert spec.g == 4
        report = HashReport(ProtocolKind.OLH, a=1, b=0, bucket=3)

        sketch = oracle.aggregate(spec, [report])

        assert sketch.support_counts.tolist() == [0, 0, 0, 1, 0, 0, 0, 1]

    def test_aggregate_mixed_protocol_reports_raises(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.GRR, 2, 1.0)
        reports = [
            ValueReport(ProtocolKind.GRR, 0),
            BitVectorReport(ProtocolKind.OUE, (True, False)),
        ]

        with pytest.raises(ReportShapeError):
            oracle.aggregate(spec, reports)

    def test_aggregate_wrong_bit_vector_length_raises(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.OUE, 3, 1.0)

        with pytest.raises(ReportShapeError):
            oracle.aggregate(spec, [BitVectorReport(ProtocolKind.OUE, (True, False))])

    @pytest.mark.parametrize("kind", list(ProtocolKind))
    def test_aggregate_of_single_reports_matches_batch_aggregation(
        self,
        oracle: FrequencyOracleService,
        rng: np.random.Generator,
        kind: ProtocolKind,
    ) -> None:
        spec = oracle.build_protocol(kind, 6, 1.0)
        batch = oracle.perturb_batch(spec, rng.integers(0, 6, size=300), rng)

        assert oracle.aggregate(spec, batch.reports()) == oracle.aggregate_batch(
            spec, batch
        )

    def test_aggregate_order_of_reports_does_not_matter(
        self, oracle: FrequencyOracleService, rng: np.random.Generator
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.RAPPOR, 5, 1.0)
        reports = oracle.perturb_batch(spec, rng.integers(0, 5, 100), rng).reports()

        assert oracle.aggregate(spec, reports) == oracle.aggregate(
            spec, list(reversed(reports))
        )


@pytest.mark.unit()
class TestEstimate:
    """Unbiased estimation from a sketch."""

    def test_estimate_noiseless_sketch_returns_fractions(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = ProtocolSpec.noiseless(ProtocolKind.GRR, 2)

        fhat = oracle.estimate(spec, Sketch(np.array([40, 60]), 100))

        assert fhat.tag is FrequencyTag.ESTIMATED
        assert fhat.values.tolist() == [0.4, 0.6]

    def test_estimate_grr_uniform_fractions_is_fixed_point(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.GRR, 4, LN3)

        fhat = oracle.estimate(spec, Sketch(np.array([25, 25, 25, 25]), 100))

        np.testing.assert_allclose(fhat.values, [0.25] * 4)

    @pytest.mark.parametrize("kind", list(ProtocolKind))
    def test_estimate_total_is_linear_in_support_counts(
        self,
        oracle: FrequencyOracleService,
        rng: np.random.Generator,
        kind: ProtocolKind,
    ) -> None:
        spec = oracle.build_protocol(kind, 7, 1.0)
        counts = rng.integers(0, 401, size=7)
        n = 400

        fhat = oracle.estimate(spec, Sketch(counts, n))

        p_star, q_star = spec.support_p, spec.support_q
        expected = (counts.sum() / n - 7 * q_star) / (p_star - q_star)
        assert fhat.total() == pytest.approx(expected, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("epsilon", [0.1, 1.0, 4.0])
    def test_estimate_grr_total_is_exactly_one(
        self,
        oracle: FrequencyOracleService,
        rng: np.random.Generator,
        epsilon: float,
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.GRR, 9, epsilon)
        values = rng.integers(0, 9, size=1000)
        sketch = oracle.aggregate_batch(
            spec, oracle.perturb_batch(spec, values, rng)
        )

        assert oracle.estimate(spec, sketch).total() == pytest.approx(1.0, abs=1e-12)

    def test_estimate_empty_sketch_raises(self, oracle: FrequencyOracleService) -> None:
        spec = oracle.build_protocol(ProtocolKind.OUE, 3, 1.0)

        with pytest.raises(EmptySketchError):
            oracle.estimate(spec, Sketch.empty(3))

    def test_estimate_sketch_of_other_domain_raises(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.OUE, 3, 1.0)

        with pytest.raises(ReportShapeError):
            oracle.estimate(spec, Sketch(np.array([1, 1]), 2))

    def test_estimator_variance_oue_ln3_matches_closed_form(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.OUE, 16, LN3)

        assert oracle.estimator_variance(spec, 10_000) == pytest.approx(3e-4)

    def test_estimator_variance_noiseless_is_zero(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = ProtocolSpec.noiseless(ProtocolKind.GRR, 4)

        assert oracle.estimator_variance(spec, 100) == 0.0

    def test_estimator_variance_without_users_raises(
        self, oracle: FrequencyOracleService
    ) -> None:
        spec = oracle.build_protocol(ProtocolKind.GRR, 4, 1.0)

        with pytest.raises(ParameterError):
            oracle.estimator_variance(spec, 0)
