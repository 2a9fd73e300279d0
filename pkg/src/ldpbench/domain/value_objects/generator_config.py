"""Synthetic population generator settings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from ldpbench.domain.exceptions import ParameterError
from ldpbench.domain.value_objects.domain_spec import DomainSpec

DEFAULT_POPULATION_SIZE = 100_000
DEFAULT_DOMAIN_SIZE = 100
DEFAULT_GAUSSIAN_MEAN = 50.0
DEFAULT_GAUSSIAN_SD = 10.0
DEFAULT_ZIPF_EXPONENT = 1.5


class GeneratorKind(str, Enum):
    GAUSSIAN = "gaussian"
    ZIPF = "zipf"
    UNIFORM = "uniform"

    @classmethod
    def from_string(cls, value: str) -> GeneratorKind:
        normalized = value.strip().lower()
        if normalized == "zipfian":
            normalized = "zipf"
        try:
            return cls(normalized)
        except ValueError:
            names = ", ".join(kind.value for kind in cls)
            raise ParameterError(
                f"unknown generator {value!r}; expected one of: {names}"
            ) from None


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of one synthetic population.

    ``mu``/``sd`` only matter for Gaussian and ``s`` only for Zipfian data.
    """

    kind: GeneratorKind
    n: int = DEFAULT_POPULATION_SIZE
    d: int = DEFAULT_DOMAIN_SIZE
    mu: float = DEFAULT_GAUSSIAN_MEAN
    sd: float = DEFAULT_GAUSSIAN_SD
    s: float = DEFAULT_ZIPF_EXPONENT
    seed: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ParameterError(f"population size n must be >= 1, got {self.n!r}")
        DomainSpec(self.d)
        if not math.isfinite(self.mu):
            raise ParameterError(f"mu must be finite, got {self.mu}")
        if not math.isfinite(self.sd) or self.sd <= 0:
            raise ParameterError(f"sd must be > 0, got {self.sd}")
        if not math.isfinite(self.s) or self.s <= 0:
            raise ParameterError(f"s must be > 0, got {self.s}")
        if not 0 <= self.seed < 2**64:
            raise ParameterError(f"seed must be an unsigned 64-bit value: {self.seed}")

    @property
    def domain(self) -> DomainSpec:
        return DomainSpec(self.d)

    def default_name(self) -> str:
        if self.kind is GeneratorKind.GAUSSIAN:
            return f"gaussian-mu{self.mu:g}-sd{self.sd:g}-d{self.d}"
        if self.kind is GeneratorKind.ZIPF:
            return f"zipf-s{self.s:g}-d{self.d}"
        return f"uniform-d{self.d}"
