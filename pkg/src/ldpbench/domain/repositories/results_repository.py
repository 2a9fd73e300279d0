"""Results file repository protocol."""

from collections.abc import Mapping
from pathlib import Path
from typing import Protocol, runtime_checkable

from ldpbench.domain.entities.cell_result import CellResult
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell


@runtime_checkable
class ResultsRepository(Protocol):
    """Persists experiment results and reads them back."""

    def write(
        self, results: Mapping[ExperimentCell, CellResult], fmt: str, path: Path
    ) -> Path:
        """Write ``results`` as ``fmt`` ("csv" or "json") and return the file."""
        ...

    def read(self, path: Path) -> dict[ExperimentCell, CellResult]:
        """Parse a results file written by :meth:`write`.

        Raises:
            ResultsFormatError: When the file is unreadable or has the wrong schema.
        """
        ...
