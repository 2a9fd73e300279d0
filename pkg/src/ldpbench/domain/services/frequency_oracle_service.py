"""Client perturbation and server estimation for the six frequency oracles."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ldpbench.domain.entities.report import (
    BitVectorReport,
    HashReport,
    Report,
    ReportBatch,
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
from ldpbench.domain.services.universal_hash import hash_buckets, hash_prime_for
from ldpbench.domain.value_objects.domain_spec import DomainSpec, PrivacyBudget
from ldpbench.domain.value_objects.frequency_vector import FrequencyVector
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind, ProtocolSpec

# Upper bound on the m x d intermediate built while decoding hash reports.
HASH_DECODE_CELLS = 1 << 22

_REPORT_TYPES: dict[ProtocolKind, type[Report]] = {
    ProtocolKind.GRR: ValueReport,
    ProtocolKind.BLH: HashReport,
    ProtocolKind.OLH: HashReport,
    ProtocolKind.RAPPOR: BitVectorReport,
    ProtocolKind.OUE: BitVectorReport,
    ProtocolKind.SS: SubsetReport,
}


class FrequencyOracleService:
    """Builds protocol instances, perturbs values and estimates frequencies.

    All methods are pure given the random stream passed in; the same
    (spec, values, stream state) always yields the same reports.
    """

    def build_protocol(
        self, kind: ProtocolKind, d: int, epsilon: float
    ) -> ProtocolSpec:
        """Instantiate ``kind`` over a domain of size ``d`` at budget ``epsilon``.

        Raises:
            ParameterError: If d < 2, epsilon is not a positive finite number or
                e^epsilon overflows.
        """
        domain = DomainSpec(d)
        budget = PrivacyBudget(epsilon)
        try:
            e_eps = budget.exp
        except OverflowError:
            raise ParameterError(f"epsilon {epsilon} is too large") from None

        if kind is ProtocolKind.GRR:
            denominator = e_eps + domain.size - 1
            return ProtocolSpec(
                kind, domain.size, budget.epsilon, e_eps / denominator, 1 / denominator
            )
        if kind.uses_hashing:
            g = 2 if kind is ProtocolKind.BLH else max(2, round(e_eps) + 1)
            denominator = e_eps + g - 1
            return ProtocolSpec(
                kind,
                domain.size,
                budget.epsilon,
                e_eps / denominator,
                1.0 / denominator,
                g=g,
                prime=hash_prime_for(domain.size),
            )
        if kind is ProtocolKind.RAPPOR:
            half = math.exp(budget.epsilon / 2)
            return ProtocolSpec(
                kind, domain.size, budget.epsilon, half / (half + 1), 1 / (half + 1)
            )
        if kind is ProtocolKind.OUE:
            return ProtocolSpec(kind, domain.size, budget.epsilon, 0.5, 1 / (e_eps + 1))

        d = domain.size
        k = max(1, round(d / (e_eps + 1)))
        p = k * e_eps / (k * e_eps + d - k)
        q = p * (k - 1) / (d - 1) + (1 - p) * k / (d - 1)
        return ProtocolSpec(kind, d, budget.epsilon, p, q, k=k)

    def perturb(
        self, spec: ProtocolSpec, v: int, rng: np.random.Generator
    ) -> Report:
        """Perturb a single value; equal to a one-user :meth:`perturb_batch`."""
        return self.perturb_batch(spec, np.array([v], dtype=np.int64), rng).reports()[0]

    def perturb_batch(
        self,
        spec: ProtocolSpec,
        values: npt.ArrayLike,
        rng: np.random.Generator,
    ) -> ReportBatch:
        """Perturb every value of ``values``, one user each.

        Raises:
            DomainValueError: If any value lies outside 0..d-1.
        """
        users = np.asarray(values, dtype=np.int64)
        if users.ndim != 1:
            raise DomainValueError("values must be a 1-D sequence")
        if users.size and (users.min() < 0 or users.max() >= spec.d):
            raise DomainValueError(f"values must lie in 0..{spec.d - 1}")
        m = int(users.size)

        if spec.kind is ProtocolKind.GRR:
            keep = rng.random(m) < spec.p
            other = rng.integers(0, spec.d - 1, size=m)
            other += other >= users
            return ReportBatch(spec.kind, m, values=np.where(keep, users, other))

        if spec.kind.uses_hashing:
            assert spec.g is not None and spec.prime is not None
            a = rng.integers(1, spec.prime, size=m, dtype=np.int64)
            b = rng.integers(0, spec.prime, size=m, dtype=np.int64)
            own = hash_buckets(a, b, spec.prime, spec.g, users)
            keep = rng.random(m) < spec.p
            other = rng.integers(0, spec.g - 1, size=m)
            other += other >= own
            return ReportBatch(
                spec.kind, m, a=a, b=b, buckets=np.where(keep, own, other)
            )

        if spec.kind.uses_unary_encoding:
            support = rng.random((m, spec.d)) < spec.q
            support[np.arange(m), users] = rng.random(m) < spec.p
            return ReportBatch(spec.kind, m, support=support)

        return ReportBatch(spec.kind, m, support=self._sample_subsets(spec, users, rng))

    def _sample_subsets(
        self,
        spec: ProtocolSpec,
        users: npt.NDArray[np.int64],
        rng: np.random.Generator,
    ) -> npt.NDArray[np.bool_]:
        assert spec.k is not None
        m, d, k = int(users.size), spec.d, spec.k
        support = np.zeros((m, d), dtype=bool)
        if m == 0:
            return support
        if k >= d:
            support[:] = True
            return support

        include = rng.random(m) < spec.p
        # k smallest of d-1 random keys, ordered, pick a uniform k-subset of
        # D \ {v}; the first k-1 of them complete a subset that includes v.
        keys = rng.random((m, d - 1))
        chosen = np.argpartition(keys, k - 1, axis=1)[:, :k]
        order = np.argsort(np.take_along_axis(keys, chosen, axis=1), axis=1)
        chosen = np.take_along_axis(chosen, order, axis=1)
        others = chosen + (chosen >= users[:, None])

        mask = np.ones((m, k), dtype=bool)
        mask[include, k - 1] = False
        rows = np.broadcast_to(np.arange(m)[:, None], (m, k))
        support[rows[mask], others[mask]] = True
        support[np.flatnonzero(include), users[include]] = True
        return support

    def aggregate(self, spec: ProtocolSpec, reports: Sequence[Report]) -> Sketch:
        """Count, for every value, the reports that support it.

        Raises:
            ReportShapeError: If a report was not produced under ``spec``'s
                protocol or its payload does not fit the domain.
        """
        return self.aggregate_batch(spec, self._to_batch(spec, reports))

    def aggregate_batch(self, spec: ProtocolSpec, batch: ReportBatch) -> Sketch:
        if batch.kind is not spec.kind:
            raise ReportShapeError(
                f"cannot aggregate {batch.kind.value} reports under {spec.kind.value}"
            )
        if batch.size == 0:
            return Sketch.empty(spec.d)

        if spec.kind is ProtocolKind.GRR:
            if batch.values is None:
                raise ReportShapeError("grr batch carries no values")
            counts = np.bincount(batch.values, minlength=spec.d)
        elif spec.kind.uses_hashing:
            counts = self._count_hash_support(spec, batch)
        else:
            if batch.support is None or batch.support.shape != (batch.size, spec.d):
                raise ReportShapeError(
                    f"{spec.kind.value} batch needs a {batch.size} x {spec.d} "
                    "support matrix"
                )
            counts = batch.support.sum(axis=0)
        return Sketch(counts.astype(np.int64), batch.size)

    def _count_hash_support(
        self, spec: ProtocolSpec, batch: ReportBatch
    ) -> npt.NDArray[np.int64]:
        assert spec.g is not None and spec.prime is not None
        if batch.a is None or batch.b is None or batch.buckets is None:
            raise ReportShapeError(f"{spec.kind.value} batch carries no hash payload")
        a = batch.a[:, None]
        b = batch.b[:, None]
        buckets = batch.buckets[:, None]
        counts = np.zeros(spec.d, dtype=np.int64)
        step = max(1, HASH_DECODE_CELLS // batch.size)
        for start in range(0, spec.d, step):
            domain_values = np.arange(start, min(start + step, spec.d))[None, :]
            hashed = hash_buckets(a, b, spec.prime, spec.g, domain_values)
            counts[start : start + step] = (hashed == buckets).sum(axis=0)
        return counts

    def _to_batch(self, spec: ProtocolSpec, reports: Sequence[Report]) -> ReportBatch:
        expected = _REPORT_TYPES[spec.kind]
        for report in reports:
            if report.kind is not spec.kind or not isinstance(report, expected):
                raise ReportShapeError(
                    f"{type(report).__name__} ({report.kind.value}) does not belong "
                    f"to a {spec.kind.value} aggregation"
                )
        m = len(reports)

        if spec.kind is ProtocolKind.GRR:
            values = np.array(
                [r.value for r in reports if isinstance(r, ValueReport)], dtype=np.int64
            )
            if values.size and (values.min() < 0 or values.max() >= spec.d):
                raise ReportShapeError(f"grr report outside 0..{spec.d - 1}")
            return ReportBatch(spec.kind, m, values=values)

        if spec.kind.uses_hashing:
            assert spec.g is not None
            hashed = [r for r in reports if isinstance(r, HashReport)]
            buckets = np.array([r.bucket for r in hashed], dtype=np.int64)
            if buckets.size and (buckets.min() < 0 or buckets.max() >= spec.g):
                raise ReportShapeError(f"hash bucket outside 0..{spec.g - 1}")
            return ReportBatch(
                spec.kind,
                m,
                a=np.array([r.a for r in hashed], dtype=np.int64),
                b=np.array([r.b for r in hashed], dtype=np.int64),
                buckets=buckets,
            )

        support = np.zeros((m, spec.d), dtype=bool)
        for row, report in enumerate(reports):
            if isinstance(report, BitVectorReport):
                if len(report.bits) != spec.d:
                    raise ReportShapeError(
                        f"bit vector of length {len(report.bits)}, expected {spec.d}"
                    )
                support[row] = report.bits
            elif isinstance(report, SubsetReport):
                if len(report.members) != spec.k:
                    raise ReportShapeError(
                        f"subset of size {len(report.members)}, expected {spec.k}"
                    )
                if any(not 0 <= member < spec.d for member in report.members):
                    raise ReportShapeError(f"subset member outside 0..{spec.d - 1}")
                support[row, list(report.members)] = True
        return ReportBatch(spec.kind, m, support=support)

    def estimate(self, spec: ProtocolSpec, sketch: Sketch) -> FrequencyVector:
        """Unbiased frequency estimate (count/n - q*) / (p* - q*).

        Raises:
            EmptySketchError: If the sketch aggregated no reports.
            ReportShapeError: If the sketch's domain differs from ``spec.d``.
        """
        if sketch.n == 0:
            raise EmptySketchError("cannot estimate frequencies from zero reports")
        if sketch.d != spec.d:
            raise ReportShapeError(f"sketch has d={sketch.d}, protocol has d={spec.d}")
        p_star, q_star = spec.support_p, spec.support_q
        fractions = sketch.support_counts / sketch.n
        return FrequencyVector.estimated((fractions - q_star) / (p_star - q_star))

    def estimator_variance(self, spec: ProtocolSpec, n: int) -> float:
        """Value-independent approximation q*(1 - q*) / (n (p* - q*)^2)."""
        if n < 1:
            raise ParameterError(f"n must be >= 1, got {n}")
        p_star, q_star = spec.support_p, spec.support_q
        return q_star * (1 - q_star) / (n * (p_star - q_star) ** 2)
