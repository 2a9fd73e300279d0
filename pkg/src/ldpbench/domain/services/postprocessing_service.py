"""Server-side post-processing of estimated frequency vectors."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize_scalar
from scipy.special import softmax

from ldpbench.domain.exceptions import InputError, ParameterError
from ldpbench.domain.services.frequency_oracle_service import FrequencyOracleService
from ldpbench.domain.value_objects.frequency_vector import FrequencyVector
from ldpbench.domain.value_objects.pp_method import NormalizationConstants, PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolSpec

# Power-law exponent search range and grid step for the Power fit.
POWER_EXPONENT_MIN = 0.05
POWER_EXPONENT_MAX = 5.0
POWER_GRID_STEP = 0.05
POWER_REFINE_XATOL = 1e-4

PostProcessed = tuple[FrequencyVector, NormalizationConstants]
Vector = npt.NDArray[np.float64]


def _as_vector(fhat: FrequencyVector | npt.ArrayLike) -> Vector:
    values = np.array(fhat, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise InputError("estimated frequencies must be a non-empty 1-D vector")
    return values


def _uniform(d: int) -> Vector:
    return np.full(d, 1.0 / d)


def power_law_atoms(d: int, s: float) -> Vector:
    """P_s(i) = i^-s / sum_j j^-s for ranks i = 1..d."""
    weights = np.arange(1, d + 1, dtype=np.float64) ** -s
    return weights / weights.sum()


class PostProcessingService:
    """Consistency post-processing: Base-Pos, the Norm family and Power.

    Every method is deterministic and returns the post-processed vector with
    the constants it fitted.
    """

    def __init__(self, oracle: FrequencyOracleService | None = None) -> None:
        self._oracle = oracle or FrequencyOracleService()
        self._methods: dict[PPMethod, Callable[[Vector], PostProcessed]] = {
            PPMethod.BASE_POS: self.base_pos,
            PPMethod.NORM: self.norm,
            PPMethod.NORM_CUT: self.norm_cut,
            PPMethod.NORM_SUB: self.norm_sub,
            PPMethod.NORM_MUL: self.norm_mul,
        }

    def base_pos(self, fhat: FrequencyVector | npt.ArrayLike) -> PostProcessed:
        values = _as_vector(fhat)
        return (
            FrequencyVector.post_processed(np.maximum(values, 0.0)),
            NormalizationConstants(),
        )

    def norm(self, fhat: FrequencyVector | npt.ArrayLike) -> PostProcessed:
        """Shift every entry by sigma = (1 - sum) / d."""
        values = _as_vector(fhat)
        sigma = (1.0 - math.fsum(values)) / values.size
        return (
            FrequencyVector.post_processed(values + sigma),
            NormalizationConstants(sigma=sigma),
        )

    def norm_cut(self, fhat: FrequencyVector | npt.ArrayLike) -> PostProcessed:
        """Zero every entry <= theta, theta picked to bring the sum closest to 1.

        Candidates are 0 and the positive entries; on equal distance the
        smaller threshold wins.
        """
        values = _as_vector(fhat)
        positives = np.sort(values[values > 0])
        theta = 0.0
        if positives.sum() > 1.0:
            candidates = np.concatenate(([0.0], positives))
            # suffix[i] = sum of positives[i:], so the mass above candidate c is
            # suffix[number of positives <= c].
            suffix = np.concatenate((np.cumsum(positives[::-1])[::-1], [0.0]))
            kept_mass = suffix[np.searchsorted(positives, candidates, side="right")]
            theta = float(candidates[np.argmin(np.abs(kept_mass - 1.0))])
        return (
            FrequencyVector.post_processed(np.where(values > theta, values, 0.0)),
            NormalizationConstants(theta=theta),
        )

    def norm_sub(self, fhat: FrequencyVector | npt.ArrayLike) -> PostProcessed:
        """Euclidean projection onto the probability simplex.

        Runs the active-set fixpoint: subtract the uniform tau that makes the
        active entries sum to 1, drop entries that fall to or below zero, and
        repeat until the support stops shrinking. ``delta`` is -tau. Vectors
        with no positive mass map to the uniform distribution and carry no
        delta.
        """
        values = _as_vector(fhat)
        if not np.any(values > 0):
            uniform = FrequencyVector.post_processed(_uniform(values.size))
            return uniform, NormalizationConstants()

        active = np.ones(values.size, dtype=bool)
        while True:
            tau = (values[active].sum() - 1.0) / np.count_nonzero(active)
            still_active = active & (values > tau)
            if np.array_equal(still_active, active):
                break
            active = still_active

        projected = np.where(active, np.maximum(values - tau, 0.0), 0.0)
        return (
            FrequencyVector.post_processed(projected),
            NormalizationConstants(delta=float(-tau)),
        )

    def norm_mul(self, fhat: FrequencyVector | npt.ArrayLike) -> PostProcessed:
        values = _as_vector(fhat)
        clipped = np.maximum(values, 0.0)
        mass = clipped.sum()
        if mass <= 0.0:
            uniform = FrequencyVector.post_processed(_uniform(values.size))
            return uniform, NormalizationConstants()
        alpha = float(1.0 / mass)
        return (
            FrequencyVector.post_processed(alpha * clipped),
            NormalizationConstants(alpha=alpha),
        )

    def fit_power_exponent(self, fhat: FrequencyVector | npt.ArrayLike) -> float:
        """Least-squares fit of a rank power law to the sorted estimates."""
        ranked = np.sort(_as_vector(fhat))[::-1]
        d = ranked.size

        def squared_error(s: float) -> float:
            return float(np.sum((ranked - power_law_atoms(d, s)) ** 2))

        steps = round((POWER_EXPONENT_MAX - POWER_EXPONENT_MIN) / POWER_GRID_STEP)
        grid = np.linspace(POWER_EXPONENT_MIN, POWER_EXPONENT_MAX, steps + 1)
        errors = np.array([squared_error(float(s)) for s in grid])
        best = float(grid[int(np.argmin(errors))])
        best_error = float(errors.min())

        refined = minimize_scalar(
            squared_error,
            bounds=(
                max(POWER_EXPONENT_MIN, best - POWER_GRID_STEP),
                min(POWER_EXPONENT_MAX, best + POWER_GRID_STEP),
            ),
            method="bounded",
            options={"xatol": POWER_REFINE_XATOL},
        )
        if refined.success and float(refined.fun) < best_error:
            return float(refined.x)
        return best

    def power(
        self, fhat: FrequencyVector | npt.ArrayLike, noise_sd: float
    ) -> PostProcessed:
        """Posterior-mean denoising under a fitted rank power-law prior.

        Each estimate is replaced by the mean of the d prior atoms P_s(i),
        weighted by a Gaussian likelihood with standard deviation ``noise_sd``.

        Raises:
            ParameterError: If d < 2 or noise_sd is not a positive finite number.
        """
        values = _as_vector(fhat)
        if values.size < 2:
            raise ParameterError("power needs a domain of at least 2 values")
        if not math.isfinite(noise_sd) or noise_sd <= 0:
            raise ParameterError(f"noise_sd must be > 0, got {noise_sd}")

        s = self.fit_power_exponent(values)
        atoms = power_law_atoms(values.size, s)
        log_weights = -((values[:, None] - atoms[None, :]) ** 2) / (2 * noise_sd**2)
        denoised = softmax(log_weights, axis=1) @ atoms
        return (
            FrequencyVector.post_processed(denoised),
            NormalizationConstants(power_exponent=s, noise_sd=noise_sd),
        )

    def power_ns(
        self, fhat: FrequencyVector | npt.ArrayLike, noise_sd: float
    ) -> PostProcessed:
        denoised, fitted = self.power(fhat, noise_sd)
        projected, subtracted = self.norm_sub(denoised)
        return projected, NormalizationConstants(
            delta=subtracted.delta,
            power_exponent=fitted.power_exponent,
            noise_sd=fitted.noise_sd,
        )

    def apply(
        self,
        method: PPMethod,
        fhat: FrequencyVector | npt.ArrayLike,
        spec: ProtocolSpec,
        n: int,
    ) -> PostProcessed:
        """Dispatch ``method``; Power variants derive noise_sd from the protocol.

        Raises:
            InputError: If ``fhat`` does not have length ``spec.d``.
        """
        values = _as_vector(fhat)
        if values.size != spec.d:
            raise InputError(f"estimate has length {values.size}, expected {spec.d}")
        if method is PPMethod.NO_PP:
            return FrequencyVector.post_processed(values), NormalizationConstants()
        if method in (PPMethod.POWER, PPMethod.POWER_NS):
            noise_sd = math.sqrt(self._oracle.estimator_variance(spec, n))
            if method is PPMethod.POWER:
                return self.power(values, noise_sd)
            return self.power_ns(values, noise_sd)
        return self._methods[method](values)
