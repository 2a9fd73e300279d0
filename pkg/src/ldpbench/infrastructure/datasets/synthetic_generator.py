"""Synthetic population generators (Gaussian, Zipfian, Uniform)."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from ldpbench.domain.entities.population import Population
from ldpbench.domain.exceptions import ParameterError
from ldpbench.domain.value_objects.generator_config import (
    GeneratorConfig,
    GeneratorKind,
)


def zipf_pmf(d: int, s: float) -> npt.NDArray[np.float64]:
    """Pr[value = i] = (i + 1)^-s / sum_{j=1..d} j^-s."""
    weights = np.arange(1, d + 1, dtype=np.float64) ** -s
    return weights / weights.sum()


class SyntheticPopulationGenerator:
    """Draws populations from a seeded PCG64 stream.

    The same config always yields the same population.
    """

    def generate(self, config: GeneratorConfig, name: str | None = None) -> Population:
        if config.kind is GeneratorKind.GAUSSIAN:
            return self.gen_gaussian(config, name)
        if config.kind is GeneratorKind.ZIPF:
            return self.gen_zipf(config, name)
        return self.gen_uniform(config, name)

    def gen_gaussian(
        self, config: GeneratorConfig, name: str | None = None
    ) -> Population:
        """Round a Normal(mu, sd) draw to the nearest integer, then clamp to 0..d-1."""
        self._expect(config, GeneratorKind.GAUSSIAN)
        samples = self._rng(config).normal(config.mu, config.sd, size=config.n)
        values = np.clip(np.rint(samples), 0, config.d - 1).astype(np.int64)
        return Population(values, config.domain, name or config.default_name())

    def gen_zipf(self, config: GeneratorConfig, name: str | None = None) -> Population:
        """Inverse-CDF sampling over the precomputed Zipf table."""
        self._expect(config, GeneratorKind.ZIPF)
        cdf = np.cumsum(zipf_pmf(config.d, config.s))
        uniforms = self._rng(config).random(config.n)
        values = np.minimum(np.searchsorted(cdf, uniforms, side="right"), config.d - 1)
        return Population(
            values.astype(np.int64), config.domain, name or config.default_name()
        )

    def gen_uniform(
        self, config: GeneratorConfig, name: str | None = None
    ) -> Population:
        self._expect(config, GeneratorKind.UNIFORM)
        values = self._rng(config).integers(0, config.d, size=config.n, dtype=np.int64)
        return Population(values, config.domain, name or config.default_name())

    @staticmethod
    def _rng(config: GeneratorConfig) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(config.seed))

    @staticmethod
    def _expect(config: GeneratorConfig, kind: GeneratorKind) -> None:
        if config.kind is not kind:
            raise ParameterError(
                f"{kind.value} generator got a {config.kind.value} config"
            )
