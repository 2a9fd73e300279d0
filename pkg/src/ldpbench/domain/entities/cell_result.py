"""Per-cell experiment outcome."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ldpbench.domain.exceptions import ValidationError
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell


@dataclass(frozen=True)
class CellResult:
    """Metric values of every run of one cell.

    A cell whose runs failed keeps ``error`` and no values. ``winner_flags``
    is filled in by win counting: flag i is set when this cell's PP method
    won run i.
    """

    cell: ExperimentCell
    per_run_values: tuple[float, ...]
    error: str | None = None
    winner_flags: tuple[bool, ...] | None = None

    def __post_init__(self) -> None:
        if self.error is None and not self.per_run_values:
            raise ValidationError("a successful cell needs at least one run value")
        if self.winner_flags is not None and len(self.winner_flags) != self.repeats:
            raise ValidationError("winner_flags must have one flag per run")

    @property
    def repeats(self) -> int:
        return len(self.per_run_values)

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def mean(self) -> float:
        if not self.per_run_values:
            return math.nan
        return math.fsum(self.per_run_values) / len(self.per_run_values)

    @property
    def std(self) -> float:
        """Population standard deviation (ddof = 0)."""
        if not self.per_run_values:
            return math.nan
        mean = self.mean
        squares = math.fsum((value - mean) ** 2 for value in self.per_run_values)
        return math.sqrt(squares / len(self.per_run_values))

    @classmethod
    def failed(cls, cell: ExperimentCell, error: str) -> CellResult:
        return cls(cell=cell, per_run_values=(), error=error)
