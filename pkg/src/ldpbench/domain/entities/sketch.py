"""Server-side aggregation state."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ldpbench.domain.exceptions import ValidationError


@dataclass(frozen=True, eq=False)
class Sketch:
    """Per-value support counts over ``n`` aggregated reports.

    Sketches merge by elementwise addition, so aggregation can be split across
    any partition of the reports.
    """

    support_counts: npt.NDArray[np.int64]
    n: int

    def __post_init__(self) -> None:
        counts = np.array(self.support_counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size < 2:
            raise ValidationError("support_counts must be a 1-D vector of length d")
        if self.n < 0:
            raise ValidationError(f"n must be >= 0, got {self.n}")
        if np.any(counts < 0) or np.any(counts > self.n):
            raise ValidationError("every support count must lie in [0, n]")
        counts.setflags(write=False)
        object.__setattr__(self, "support_counts", counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sketch):
            return NotImplemented
        return self.n == other.n and np.array_equal(
            self.support_counts, other.support_counts
        )

    def __hash__(self) -> int:
        return hash((self.n, self.support_counts.tobytes()))

    @property
    def d(self) -> int:
        return int(self.support_counts.size)

    @classmethod
    def empty(cls, d: int) -> Sketch:
        return cls(np.zeros(d, dtype=np.int64), 0)

    def merge(self, other: Sketch) -> Sketch:
        if other.d != self.d:
            raise ValidationError(
                f"cannot merge sketches of size {self.d} and {other.d}"
            )
        return Sketch(self.support_counts + other.support_counts, self.n + other.n)


def merge_sketches(d: int, sketches: Iterable[Sketch]) -> Sketch:
    """Fold sketches left to right, in the order given."""
    merged = Sketch.empty(d)
    for sketch in sketches:
        merged = merged.merge(sketch)
    return merged
