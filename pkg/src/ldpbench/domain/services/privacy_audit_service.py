"""Exact enumeration of report distributions for privacy-ratio audits."""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable

from ldpbench.domain.entities.report import (
    BitVectorReport,
    HashReport,
    Report,
    SubsetReport,
    ValueReport,
)
from ldpbench.domain.exceptions import ParameterError, ReportShapeError
from ldpbench.domain.services.universal_hash import hash_universal
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind, ProtocolSpec

MAX_AUDIT_DOMAIN = 10


class PrivacyAuditService:
    """Compute Pr[report | v] exactly and the worst-case likelihood ratio.

    Unary-encoding and subset outcomes grow exponentially with d, so the audit
    is limited to small domains. Hash protocols are audited per fixed seed
    pair (a, b): the seed is sent in clear and is independent of v.
    """

    def enumerate_reports(
        self, spec: ProtocolSpec, hash_seed: tuple[int, int] | None = None
    ) -> list[Report]:
        """Every report ``spec`` can emit (for hashing: under ``hash_seed``)."""
        if spec.d > MAX_AUDIT_DOMAIN:
            raise ParameterError(
                f"exhaustive audit supports d <= {MAX_AUDIT_DOMAIN}, got {spec.d}"
            )
        kind = spec.kind
        if kind is ProtocolKind.GRR:
            return [ValueReport(kind, value) for value in range(spec.d)]
        if kind.uses_hashing:
            if hash_seed is None:
                raise ParameterError("hash protocols are enumerated per hash seed")
            assert spec.g is not None
            a, b = hash_seed
            return [HashReport(kind, a, b, bucket) for bucket in range(spec.g)]
        if kind.uses_unary_encoding:
            return [
                BitVectorReport(kind, bits)
                for bits in itertools.product((False, True), repeat=spec.d)
            ]
        assert spec.k is not None
        return [
            SubsetReport(kind, frozenset(members))
            for members in itertools.combinations(range(spec.d), spec.k)
        ]

    def report_probability(self, spec: ProtocolSpec, v: int, report: Report) -> float:
        """Pr[perturb(v) = report]; for hashing, conditioned on the report's seed."""
        if report.kind is not spec.kind:
            raise ReportShapeError(
                f"{report.kind.value} report under a {spec.kind.value} protocol"
            )
        p = spec.p

        if isinstance(report, ValueReport):
            return p if report.value == v else (1 - p) / (spec.d - 1)

        if isinstance(report, HashReport):
            assert spec.g is not None and spec.prime is not None
            own = hash_universal(report.a, report.b, spec.prime, spec.g, v)
            return p if report.bucket == own else (1 - p) / (spec.g - 1)

        if isinstance(report, BitVectorReport):
            if len(report.bits) != spec.d:
                raise ReportShapeError(f"bit vector must have length {spec.d}")
            probability = 1.0
            for value, bit in enumerate(report.bits):
                one = p if value == v else spec.q
                probability *= one if bit else 1 - one
            return probability

        if isinstance(report, SubsetReport):
            assert spec.k is not None
            if len(report.members) != spec.k:
                raise ReportShapeError(f"subset must have exactly {spec.k} members")
            if spec.k == spec.d:
                return 1.0
            if v in report.members:
                return p / math.comb(spec.d - 1, spec.k - 1)
            return (1 - p) / math.comb(spec.d - 1, spec.k)

        raise ReportShapeError(f"unsupported report type {type(report).__name__}")

    def max_privacy_ratio(
        self,
        spec: ProtocolSpec,
        hash_seeds: Iterable[tuple[int, int]] | None = None,
    ) -> float:
        """Largest Pr[r | v1] / Pr[r | v2] over reports r and value pairs.

        Returns ``inf`` when some report is possible under v1 but not under v2.
        """
        if spec.kind.uses_hashing:
            assert spec.prime is not None
            seeds = list(hash_seeds) if hash_seeds is not None else [
                (a, b)
                for a in (1, 2, spec.prime - 1)
                for b in (0, 1, spec.prime // 2)
            ]
            report_sets = [self.enumerate_reports(spec, seed) for seed in seeds]
        else:
            report_sets = [self.enumerate_reports(spec)]

        worst = 0.0
        for reports in report_sets:
            for report in reports:
                probabilities = [
                    self.report_probability(spec, v, report) for v in range(spec.d)
                ]
                high, low = max(probabilities), min(probabilities)
                if high == 0.0:
                    continue
                if low == 0.0:
                    return math.inf
                worst = max(worst, high / low)
        return worst
