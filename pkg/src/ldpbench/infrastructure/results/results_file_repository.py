"""CSV and JSON results files.

CSV holds one row per (cell, run)::

    dataset,protocol,epsilon,pp,metric,run,value

JSON holds one record per cell with its runs, mean, std and error. Both are
written in cell sort order, then run order, with floats at 17 significant
digits, so equal results give equal bytes.
"""

from __future__ import annotations

import json
import math
import re
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import pandas as pd

from ldpbench.domain.entities.cell_result import CellResult
from ldpbench.domain.exceptions import DomainError, ResultsFormatError
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind

CSV_COLUMNS = ["dataset", "protocol", "epsilon", "pp", "metric", "run", "value"]
CSV_FLOAT_FORMAT = "%.17g"
JSON_SCHEMA = "ldp-bench-results"
JSON_VERSION = 1

_KEY_COLUMNS = CSV_COLUMNS[:5]

# Numbers go through json.dumps as marked strings and are unquoted afterwards.
# The mark is a whitespace character, so no dataset name contains it.
_NUMBER_MARK = "\x1f"
_MARKED_NUMBER = re.compile(r'"\\u001f([^"]*)"')


def _ordered(results: Mapping[ExperimentCell, CellResult]) -> list[CellResult]:
    return [results[cell] for cell in sorted(results, key=ExperimentCell.sort_key)]


def _json_number(value: float) -> str | None:
    """``%.17g`` text of a finite float, marked for unquoting; else None."""
    if not math.isfinite(value):
        return None
    return _NUMBER_MARK + CSV_FLOAT_FORMAT % value


def _cell_from(
    dataset: Any, protocol: Any, epsilon: Any, pp: Any, metric: Any
) -> ExperimentCell:
    return ExperimentCell(
        dataset=str(dataset),
        protocol=ProtocolKind.from_string(str(protocol)),
        epsilon=float(epsilon),
        pp=PPMethod.from_string(str(pp)),
        metric=MetricKind.from_string(str(metric)),
    )


class ResultsFileRepository:
    """ResultsRepository writing ``results.csv`` / ``results.json`` files."""

    def write(
        self, results: Mapping[ExperimentCell, CellResult], fmt: str, path: Path
    ) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            self._write_csv(results, path)
        elif fmt == "json":
            self._write_json(results, path)
        else:
            raise ResultsFormatError(f"unknown results format {fmt!r}")
        return path

    def read(self, path: Path) -> dict[ExperimentCell, CellResult]:
        try:
            with path.open(encoding="utf-8") as handle:
                first = handle.read(1)
        except FileNotFoundError:
            raise ResultsFormatError(f"results file not found: {path}") from None
        except (OSError, UnicodeDecodeError) as exc:
            raise ResultsFormatError(f"cannot read results file {path}: {exc}") from exc

        if path.suffix == ".json" or first == "{":
            return self._read_json(path)
        return self._read_csv(path)

    def _write_csv(
        self, results: Mapping[ExperimentCell, CellResult], path: Path
    ) -> None:
        rows = [
            (
                result.cell.dataset,
                result.cell.protocol.value,
                result.cell.epsilon,
                result.cell.pp.value,
                result.cell.metric.value,
                run,
                value,
            )
            for result in _ordered(results)
            if result.ok
            for run, value in enumerate(result.per_run_values)
        ]
        frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
        frame.to_csv(
            path,
            index=False,
            float_format=CSV_FLOAT_FORMAT,
            lineterminator="\n",
            encoding="utf-8",
        )

    def _write_json(
        self, results: Mapping[ExperimentCell, CellResult], path: Path
    ) -> None:
        cells = []
        for result in _ordered(results):
            record: dict[str, Any] = {
                "dataset": result.cell.dataset,
                "protocol": result.cell.protocol.value,
                "epsilon": _json_number(result.cell.epsilon),
                "pp": result.cell.pp.value,
                "metric": result.cell.metric.value,
                "runs": [
                    {"run": run, "value": _json_number(value)}
                    for run, value in enumerate(result.per_run_values)
                ],
                "mean": _json_number(result.mean),
                "std": _json_number(result.std),
                "error": result.error,
            }
            if result.winner_flags is not None:
                record["winner_flags"] = list(result.winner_flags)
            cells.append(record)

        document = {"schema": JSON_SCHEMA, "version": JSON_VERSION, "cells": cells}
        text = json.dumps(document, indent=2, ensure_ascii=False)
        text = _MARKED_NUMBER.sub(r"\1", text)
        path.write_text(text + "\n", encoding="utf-8")

    def _read_csv(self, path: Path) -> dict[ExperimentCell, CellResult]:
        try:
            frame = pd.read_csv(
                path,
                dtype={column: str for column in _KEY_COLUMNS},
                float_precision="round_trip",
                keep_default_na=False,
            )
        except pd.errors.EmptyDataError:
            raise ResultsFormatError(f"results file is empty: {path}") from None
        except (OSError, pd.errors.ParserError, ValueError) as exc:
            raise ResultsFormatError(f"cannot parse {path}: {exc}") from exc

        if list(frame.columns) != CSV_COLUMNS:
            raise ResultsFormatError(
                f"{path}: expected columns {','.join(CSV_COLUMNS)}, "
                f"got {','.join(map(str, frame.columns))}"
            )
        runs = pd.to_numeric(frame["run"], errors="coerce")
        numbers = pd.to_numeric(frame["value"], errors="coerce")
        if runs.isna().any() or numbers.isna().any():
            raise ResultsFormatError(f"{path}: run and value must be numeric")
        frame = frame.assign(run=runs.astype("int64"), value=numbers)

        results: dict[ExperimentCell, CellResult] = {}
        for key, group in frame.groupby(_KEY_COLUMNS, sort=False):
            try:
                cell = _cell_from(*key)
            except DomainError as exc:
                raise ResultsFormatError(f"{path}: {exc}") from exc
            if cell in results:
                raise ResultsFormatError(f"{path}: duplicate rows for {key}")
            group = group.sort_values("run")
            if group["run"].tolist() != list(range(len(group))):
                raise ResultsFormatError(f"{path}: runs of {key} are not 0..R-1")
            values = group["value"].astype(float).tolist()
            results[cell] = CellResult(cell, tuple(values))
        return results

    def _read_json(self, path: Path) -> dict[ExperimentCell, CellResult]:
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ResultsFormatError(f"cannot parse {path}: {exc}") from exc
        if not isinstance(document, dict) or document.get("schema") != JSON_SCHEMA:
            raise ResultsFormatError(f"{path} is not an ldp-bench results file")
        if document.get("version") != JSON_VERSION:
            raise ResultsFormatError(
                f"{path}: unsupported results version {document.get('version')!r}"
            )

        results: dict[ExperimentCell, CellResult] = {}
        try:
            for record in document["cells"]:
                cell = _cell_from(*(record[column] for column in _KEY_COLUMNS))
                runs = sorted(record["runs"], key=lambda entry: entry["run"])
                if [entry["run"] for entry in runs] != list(range(len(runs))):
                    raise ResultsFormatError(f"{path}: runs of {cell} are not 0..R-1")
                flags = record.get("winner_flags")
                results[cell] = CellResult(
                    cell=cell,
                    per_run_values=tuple(float(entry["value"]) for entry in runs),
                    error=record.get("error"),
                    winner_flags=None if flags is None else tuple(map(bool, flags)),
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise ResultsFormatError(f"{path}: malformed cell record: {exc}") from exc
        except ResultsFormatError:
            raise
        except DomainError as exc:
            raise ResultsFormatError(f"{path}: {exc}") from exc
        return results
