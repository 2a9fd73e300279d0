"""Distances between true and post-processed frequency vectors."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
from scipy.optimize import linprog
from scipy.special import rel_entr
from scipy.stats import wasserstein_distance

from ldpbench.domain.exceptions import InputError
from ldpbench.domain.value_objects.frequency_vector import FrequencyVector
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.transport_plan import TransportPlan

KL_FLOOR = 1e-12
DISTRIBUTION_TOLERANCE = 1e-9
RENORMALIZE_TOLERANCE = 1e-13

VectorLike = FrequencyVector | npt.ArrayLike


def _pair(f: VectorLike, ftilde: VectorLike) -> tuple[np.ndarray, np.ndarray]:
    left = np.array(f, dtype=np.float64)
    right = np.array(ftilde, dtype=np.float64)
    if left.ndim != 1 or right.ndim != 1 or left.size == 0:
        raise InputError("metrics compare non-empty 1-D vectors")
    if left.size != right.size:
        raise InputError(f"length mismatch: {left.size} vs {right.size}")
    return left, right


def _normalized_mass(values: np.ndarray, label: str) -> np.ndarray:
    clipped = np.maximum(values, 0.0)
    mass = clipped.sum()
    if mass <= 0.0:
        raise InputError(f"{label} has no positive mass to normalize")
    return clipped / mass


class UtilityMetricsService:
    """L1, L2, KL and EMD between a true vector f and an estimate f~."""

    def l1(self, f: VectorLike, ftilde: VectorLike) -> float:
        left, right = _pair(f, ftilde)
        return float(np.sum(np.abs(right - left)))

    def l2(self, f: VectorLike, ftilde: VectorLike) -> float:
        left, right = _pair(f, ftilde)
        return float(np.sqrt(np.sum((right - left) ** 2)))

    def kl(self, f: VectorLike, ftilde: VectorLike) -> float:
        """KL(f || f~') in nats, f~' = normalize(max(f~, 1e-12)).

        Raises:
            InputError: If f is not a probability distribution.
        """
        left, right = _pair(f, ftilde)
        if np.any(left < 0) or abs(left.sum() - 1.0) > DISTRIBUTION_TOLERANCE:
            raise InputError("KL divergence needs f to be a distribution")
        floored = np.maximum(right, KL_FLOOR)
        total = floored.sum()
        # A vector already summing to 1 is used as is, so KL(f, f) is exactly 0.
        if abs(total - 1.0) > RENORMALIZE_TOLERANCE:
            floored = floored / total
        return float(np.sum(rel_entr(left, floored)))

    def emd(self, f: VectorLike, ftilde: VectorLike) -> float:
        """1-D earth mover's distance with ground distance |i - j|.

        Both vectors have negatives clamped to 0 and are rescaled to sum 1.
        """
        left, right = _pair(f, ftilde)
        positions = np.arange(left.size, dtype=np.float64)
        return float(
            wasserstein_distance(
                positions,
                positions,
                _normalized_mass(left, "f"),
                _normalized_mass(right, "f~"),
            )
        )

    def evaluate(self, kind: MetricKind, f: VectorLike, ftilde: VectorLike) -> float:
        if kind is MetricKind.L1:
            return self.l1(f, ftilde)
        if kind is MetricKind.L2:
            return self.l2(f, ftilde)
        if kind is MetricKind.KL:
            return self.kl(f, ftilde)
        return self.emd(f, ftilde)

    def optimal_transport_plan(
        self, f: VectorLike, ftilde: VectorLike
    ) -> TransportPlan:
        """Minimum-cost plan from the linear program over all d x d flows.

        Only used to cross-check :meth:`emd` on small domains.
        """
        left, right = _pair(f, ftilde)
        source = _normalized_mass(left, "f")
        target = _normalized_mass(right, "f~")
        d = source.size

        positions = np.arange(d)
        cost = np.abs(positions[:, None] - positions[None, :]).ravel()
        rows = np.kron(np.eye(d), np.ones(d))
        columns = np.kron(np.ones(d), np.eye(d))
        solution = linprog(
            cost,
            A_eq=np.vstack((rows, columns)),
            b_eq=np.concatenate((source, target)),
            bounds=(0, None),
            method="highs",
        )
        if not solution.success:
            raise InputError(f"transport problem is infeasible: {solution.message}")
        flow = np.maximum(solution.x.reshape(d, d), 0.0)
        return TransportPlan(flow=flow, source=source, target=target)
