"""Population CSV files written by ``generate``.

Layout::

    # ldp-bench population name=<name> d=<d>
    value
    3
    0
    ...
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
import pandas as pd

from ldpbench.domain.entities.population import Population
from ldpbench.domain.exceptions import DatasetError, ValidationError
from ldpbench.domain.value_objects.domain_spec import DomainSpec

POPULATION_MAGIC = "# ldp-bench population"
_HEADER = re.compile(r"^# ldp-bench population name=(?P<name>\S+) d=(?P<d>\d+)\s*$")


class PopulationFileRepository:
    """Reads and writes populations as single-column CSV files."""

    def write(self, population: Population, path: Path) -> Path:
        if not population.name or any(char.isspace() for char in population.name):
            raise DatasetError(
                f"population name {population.name!r} must be one non-blank word"
            )
        path.parent.mkdir(parents=True, exist_ok=True)
        header = f"{POPULATION_MAGIC} name={population.name} d={population.d}\n"
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(header)
            pd.DataFrame({"value": population.values}).to_csv(
                handle, index=False, lineterminator="\n"
            )
        return path

    def read(self, path: Path, name: str | None = None) -> Population:
        """Load a population file; ``name`` overrides the stored name.

        Raises:
            DatasetError: If the file is missing, lacks the header line or holds
                values outside the declared domain.
        """
        try:
            with path.open(encoding="utf-8") as handle:
                first_line = handle.readline()
                header = _HEADER.match(first_line.rstrip("\n"))
                if header is None:
                    raise DatasetError(f"{path} is not an ldp-bench population file")
                frame = pd.read_csv(handle)
        except FileNotFoundError:
            raise DatasetError(f"population file not found: {path}") from None
        except (OSError, UnicodeDecodeError, pd.errors.ParserError) as exc:
            raise DatasetError(f"cannot read population file {path}: {exc}") from exc
        except pd.errors.EmptyDataError:
            raise DatasetError(f"population file has no values: {path}") from None

        if list(frame.columns) != ["value"]:
            raise DatasetError(f"{path} must have exactly one 'value' column")
        values = pd.to_numeric(frame["value"], errors="coerce")
        if values.isna().any() or not (values == values.round()).all():
            raise DatasetError(f"{path} holds non-integer values")
        try:
            return Population(
                values.to_numpy(dtype=np.int64),
                DomainSpec(int(header["d"])),
                name or header["name"],
            )
        except ValidationError as exc:
            raise DatasetError(f"{path}: {exc}") from exc
