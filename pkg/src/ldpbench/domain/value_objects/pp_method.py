"""Post-processing method identifiers and their fitted constants."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

from ldpbench.domain.exceptions import ParameterError, ValidationError


def _squash(name: str) -> str:
    return name.strip().lower().replace("-", "").replace("_", "").replace(" ", "")


class PPMethod(str, Enum):
    """Server-side post-processing methods plus the No-PP identity baseline."""

    NO_PP = "no_pp"
    BASE_POS = "base_pos"
    NORM = "norm"
    NORM_CUT = "norm_cut"
    NORM_SUB = "norm_sub"
    NORM_MUL = "norm_mul"
    POWER = "power"
    POWER_NS = "power_ns"

    @classmethod
    def from_string(cls, value: str) -> PPMethod:
        """Accept ``norm_sub``, ``Norm-Sub``, ``NormSub`` and the like."""
        wanted = _squash(value)
        for method in cls:
            if _squash(method.value) == wanted:
                return method
        names = ", ".join(method.value for method in cls)
        raise ParameterError(f"unknown PP method {value!r}; expected one of: {names}")

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def is_baseline(self) -> bool:
        return self is PPMethod.NO_PP


_LABELS = {
    PPMethod.NO_PP: "No-PP",
    PPMethod.BASE_POS: "Base-Pos",
    PPMethod.NORM: "Norm",
    PPMethod.NORM_CUT: "Norm-Cut",
    PPMethod.NORM_SUB: "Norm-Sub",
    PPMethod.NORM_MUL: "Norm-Mul",
    PPMethod.POWER: "Power",
    PPMethod.POWER_NS: "Power-NS",
}


@dataclass(frozen=True)
class NormalizationConstants:
    """Constants fitted by a post-processing method.

    Only the fields belonging to the method that produced the instance are set.
    """

    sigma: float | None = None
    theta: float | None = None
    delta: float | None = None
    alpha: float | None = None
    power_exponent: float | None = None
    noise_sd: float | None = None

    def __post_init__(self) -> None:
        if self.alpha is not None and self.alpha < 0:
            raise ValidationError(f"alpha must be >= 0, got {self.alpha}")
        if self.noise_sd is not None and self.noise_sd <= 0:
            raise ValidationError(f"noise_sd must be > 0, got {self.noise_sd}")

    def populated(self) -> dict[str, float]:
        """Return only the fields that were set."""
        return {key: value for key, value in asdict(self).items() if value is not None}
