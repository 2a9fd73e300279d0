"""Rows of the best-PP tables and utility summaries."""

from __future__ import annotations

from dataclasses import dataclass

from ldpbench.domain.exceptions import ValidationError
from ldpbench.domain.value_objects.experiment_cell import TableKey
from ldpbench.domain.value_objects.pp_method import PPMethod


@dataclass(frozen=True)
class WinTableEntry:
    """Best PP method of one table cell and how often it won.

    ``win_fraction`` (the table's "darkness") is wins / repeats of ``best_pp``.
    ``win_counts`` lists every competing method's wins in method order.
    """

    key: TableKey
    best_pp: PPMethod
    win_fraction: float
    repeats: int
    win_counts: tuple[tuple[PPMethod, int], ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.win_fraction <= 1.0:
            raise ValidationError(
                f"win_fraction must be in [0, 1], got {self.win_fraction}"
            )
        if self.repeats < 1:
            raise ValidationError("a win table entry needs at least one run")

    @property
    def wins(self) -> int:
        counts = dict(self.win_counts)
        return counts.get(self.best_pp, round(self.win_fraction * self.repeats))


@dataclass(frozen=True)
class UtilitySummary:
    """Mean and spread of one cell, relative to the No-PP baseline.

    ``ratio_to_no_pp`` is None when the group has no successful No-PP cell or
    its mean is zero.
    """

    key: TableKey
    pp: PPMethod
    mean: float
    std: float
    repeats: int
    ratio_to_no_pp: float | None = None
