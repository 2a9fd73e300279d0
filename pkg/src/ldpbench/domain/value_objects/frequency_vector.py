"""Frequency vectors over a value domain."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from ldpbench.domain.exceptions import ValidationError

TRUE_SUM_TOLERANCE = 1e-9


class FrequencyTag(Enum):
    """Which stage of the pipeline produced a vector."""

    TRUE = "true"
    ESTIMATED = "estimated"
    POST_PROCESSED = "post_processed"


@dataclass(frozen=True, eq=False)
class FrequencyVector:
    """A length-d vector of frequencies f, f_hat or f_tilde.

    Only TRUE vectors are constrained here; the constraints of post-processed
    vectors depend on the method that produced them.
    """

    values: npt.NDArray[np.float64]
    tag: FrequencyTag

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValidationError("frequency vector must be a non-empty 1-D array")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

        if self.tag is FrequencyTag.TRUE:
            if np.any(values < 0):
                raise ValidationError("true frequencies must be non-negative")
            if abs(float(values.sum()) - 1.0) > TRUE_SUM_TOLERANCE:
                raise ValidationError("true frequencies must sum to 1")

    def __len__(self) -> int:
        return int(self.values.size)

    def __array__(self, dtype: Any = None, copy: bool | None = None) -> np.ndarray:
        if dtype is None:
            return self.values.copy() if copy else self.values
        return self.values.astype(dtype)

    @property
    def d(self) -> int:
        return int(self.values.size)

    def total(self) -> float:
        return float(self.values.sum())

    @classmethod
    def estimated(cls, values: npt.ArrayLike) -> FrequencyVector:
        return cls(np.asarray(values, dtype=np.float64), FrequencyTag.ESTIMATED)

    @classmethod
    def post_processed(cls, values: npt.ArrayLike) -> FrequencyVector:
        return cls(np.asarray(values, dtype=np.float64), FrequencyTag.POST_PROCESSED)
