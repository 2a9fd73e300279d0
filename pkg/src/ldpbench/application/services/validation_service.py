"""Self-checks behind the ``validate`` command."""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ldpbench.domain.entities.sketch import Sketch, merge_sketches
from ldpbench.domain.services.frequency_oracle_service import FrequencyOracleService
from ldpbench.domain.services.postprocessing_service import PostProcessingService
from ldpbench.domain.services.privacy_audit_service import PrivacyAuditService
from ldpbench.domain.services.utility_metrics_service import UtilityMetricsService
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind
from ldpbench.domain.value_objects.seed_plan import SeedPlan
from shared.infrastructure.logging import log_event

AUDIT_DOMAIN_SIZE = 4
AUDIT_EPSILONS = (0.5, 1.0, 2.0)
PRIVACY_TOLERANCE = 1e-9
PROJECTION_TOLERANCE = 1e-9
TRANSPORT_TOLERANCE = 1e-6
KL_LOWER_BOUND = -1e-12
VALIDATION_SEED = 20240101


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    duration_s: float = 0.0


def simplex_projection(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Sort-based Euclidean projection onto the probability simplex."""
    vector = np.asarray(values, dtype=np.float64)
    ordered = np.sort(vector)[::-1]
    cumulative = np.cumsum(ordered) - 1.0
    ranks = np.arange(1, vector.size + 1)
    rho = np.nonzero(ordered - cumulative / ranks > 0)[0][-1]
    tau = cumulative[rho] / (rho + 1)
    return np.maximum(vector - tau, 0.0)


class ValidationService:
    """Runs the privacy, projection, transport, metric and merge checks.

    ``quick`` shrinks every sample so the whole suite finishes in seconds.
    """

    _logger = logging.getLogger(__name__)

    def __init__(
        self,
        oracle: FrequencyOracleService | None = None,
        audit: PrivacyAuditService | None = None,
        postprocessing: PostProcessingService | None = None,
        utility_metrics: UtilityMetricsService | None = None,
        seed: int = VALIDATION_SEED,
    ) -> None:
        self._oracle = oracle or FrequencyOracleService()
        self._audit = audit or PrivacyAuditService()
        self._postprocessing = postprocessing or PostProcessingService(self._oracle)
        self._metrics = utility_metrics or UtilityMetricsService()
        self._seed = seed

    def run(self, quick: bool = False) -> list[CheckResult]:
        checks: list[tuple[str, Callable[[bool], tuple[bool, str]]]] = [
            ("privacy_ratio", self.check_privacy_ratio),
            ("norm_sub_projection", self.check_norm_sub_projection),
            ("emd_transport", self.check_emd_transport),
            ("metric_identities", self.check_metric_identities),
            ("sketch_merge", self.check_sketch_merge),
        ]
        results = []
        for name, check in checks:
            started = time.perf_counter()
            try:
                passed, detail = check(quick)
            except Exception as exc:
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            result = CheckResult(name, passed, detail, time.perf_counter() - started)
            log_event(
                self._logger,
                logging.INFO if passed else logging.ERROR,
                "Validation check finished",
                event="validation_check",
                check=name,
                passed=passed,
                detail=detail,
                duration_ms=round(result.duration_s * 1000, 3),
            )
            results.append(result)
        return results

    def _rng(self, salt: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64([self._seed, salt]))

    def check_privacy_ratio(self, quick: bool) -> tuple[bool, str]:
        """Worst likelihood ratio of every protocol stays within e^epsilon."""
        epsilons = AUDIT_EPSILONS[1:2] if quick else AUDIT_EPSILONS
        for kind in ProtocolKind:
            for epsilon in epsilons:
                spec = self._oracle.build_protocol(kind, AUDIT_DOMAIN_SIZE, epsilon)
                ratio = self._audit.max_privacy_ratio(spec)
                slack = ratio - math.exp(epsilon)
                if slack > PRIVACY_TOLERANCE:
                    return False, (
                        f"{kind.value} at epsilon={epsilon}: ratio {ratio!r} "
                        f"exceeds e^epsilon"
                    )
        return True, f"{len(ProtocolKind) * len(epsilons)} protocol instances audited"

    def check_norm_sub_projection(self, quick: bool) -> tuple[bool, str]:
        """Norm-Sub matches the sort-based projection on random vectors."""
        rng = self._rng(1)
        samples = 100 if quick else 1000
        worst = 0.0
        checked = 0
        while checked < samples:
            d = int(rng.integers(2, 65))
            vector = rng.uniform(-1.0, 1.0, size=d)
            if not np.any(vector > 0):
                continue
            projected, _ = self._postprocessing.norm_sub(vector)
            gap = float(np.max(np.abs(projected.values - simplex_projection(vector))))
            worst = max(worst, gap)
            checked += 1
        return worst < PROJECTION_TOLERANCE, f"max |diff| = {worst:.3g} over {samples}"

    def check_emd_transport(self, quick: bool) -> tuple[bool, str]:
        """The CDF form of EMD equals the transport linear program."""
        rng = self._rng(2)
        samples = 20 if quick else 200
        worst = 0.0
        for _ in range(samples):
            d = int(rng.integers(2, 7))
            f = rng.dirichlet(np.ones(d))
            g = rng.dirichlet(np.ones(d))
            plan = self._metrics.optimal_transport_plan(f, g)
            worst = max(worst, abs(self._metrics.emd(f, g) - plan.cost()))
        return worst < TRANSPORT_TOLERANCE, f"max |diff| = {worst:.3g} over {samples}"

    def check_metric_identities(self, quick: bool) -> tuple[bool, str]:
        """Zero on identical inputs, L2 <= L1, KL non-negative."""
        rng = self._rng(3)
        samples = 100 if quick else 1000
        for _ in range(samples):
            d = int(rng.integers(2, 65))
            f = rng.dirichlet(np.ones(d))
            g = rng.dirichlet(np.ones(d))
            for kind in MetricKind:
                if self._metrics.evaluate(kind, f, f) != 0.0:
                    return False, f"{kind.value}(f, f) is not 0"
            if self._metrics.l2(f, g) > self._metrics.l1(f, g):
                return False, "found L2 > L1"
            if self._metrics.kl(f, g) < KL_LOWER_BOUND:
                return False, "found negative KL"
        return True, f"{samples} random pairs"

    def check_sketch_merge(self, quick: bool) -> tuple[bool, str]:
        """Block sketches merge to the same sketch for every chunk count."""
        rng = self._rng(4)
        n = 5_000 if quick else 50_000
        d = 16
        values = rng.integers(0, d, size=n)
        for kind in ProtocolKind:
            spec = self._oracle.build_protocol(kind, d, 1.0)
            sketches: list[Sketch] = []
            for chunk_count in (1, 3, 8):
                plan = SeedPlan(self._seed, chunk_count, block_size=512)
                bounds = plan.block_bounds(n)
                chunk_sketches = []
                for chunk in plan.chunk_layout(len(bounds)):
                    blocks = []
                    for block in chunk:
                        start, stop = bounds[block]
                        batch = self._oracle.perturb_batch(
                            spec, values[start:stop], plan.rng(0, 0, block)
                        )
                        blocks.append(self._oracle.aggregate_batch(spec, batch))
                    chunk_sketches.append(merge_sketches(d, blocks))
                sketches.append(merge_sketches(d, chunk_sketches))
            if any(sketch != sketches[0] for sketch in sketches[1:]):
                return False, f"{kind.value}: sketches differ across chunk counts"
            if sketches[0].n != n:
                return False, f"{kind.value}: merged n={sketches[0].n}, expected {n}"
        return True, f"{len(ProtocolKind)} protocols, chunk counts 1, 3, 8"
