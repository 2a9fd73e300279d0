"""User population entity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ldpbench.domain.exceptions import ValidationError
from ldpbench.domain.value_objects.domain_spec import DomainSpec


@dataclass(frozen=True, eq=False)
class Population:
    """The true values of every user, one integer in 0..d-1 each.

    ``skipped`` counts source records rejected while ingesting a real dataset.
    """

    values: npt.NDArray[np.int64]
    domain: DomainSpec
    name: str
    skipped: int = 0

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.int64)
        if values.ndim != 1 or values.size < 1:
            raise ValidationError(f"population {self.name!r} must have n >= 1 users")
        if values.min() < 0 or values.max() >= self.domain.size:
            raise ValidationError(
                f"population {self.name!r} has values outside 0..{self.domain.size - 1}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Population):
            return NotImplemented
        return (
            self.name == other.name
            and self.domain == other.domain
            and self.skipped == other.skipped
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.name, self.domain, self.values.tobytes()))

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def d(self) -> int:
        return self.domain.size

    def counts(self) -> npt.NDArray[np.int64]:
        return np.bincount(self.values, minlength=self.d).astype(np.int64)
