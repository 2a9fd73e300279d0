"""Pins the columns and keys of results and population files."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from ldpbench.domain.entities.cell_result import CellResult
from ldpbench.domain.entities.population import Population
from ldpbench.domain.value_objects.domain_spec import DomainSpec
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind
from ldpbench.infrastructure.datasets.population_file import (
    PopulationFileRepository,
)
from ldpbench.infrastructure.results.results_file_repository import (
    ResultsFileRepository,
)

CELL = ExperimentCell(
    "adult", ProtocolKind.RAPPOR, 0.5, PPMethod.NORM_CUT, MetricKind.EMD
)


@pytest.mark.contract()
class TestResultsFileContract:
    def test_csv_header_and_row_layout(self, tmp_path: Path) -> None:
        path = ResultsFileRepository().write(
            {CELL: CellResult(CELL, (1.5,))}, "csv", tmp_path / "results.csv"
        )

        assert path.read_text().splitlines() == [
            "dataset,protocol,epsilon,pp,metric,run,value",
            "adult,rappor,0.5,norm_cut,emd,0,1.5",
        ]

    def test_json_document_shape(self, tmp_path: Path) -> None:
        path = ResultsFileRepository().write(
            {CELL: CellResult(CELL, (1.0, 3.0))}, "json", tmp_path / "results.json"
        )

        document = json.loads(path.read_text())

        assert set(document) == {"schema", "version", "cells"}
        assert document["version"] == 1
        (cell,) = document["cells"]
        assert cell == {
            "dataset": "adult",
            "protocol": "rappor",
            "epsilon": 0.5,
            "pp": "norm_cut",
            "metric": "emd",
            "runs": [{"run": 0, "value": 1.0}, {"run": 1, "value": 3.0}],
            "mean": 2.0,
            "std": 1.0,
            "error": None,
        }
        assert path.read_text().startswith('{\n  "schema": "ldp-bench-results"')


@pytest.mark.contract()
class TestPopulationFileContract:
    def test_population_file_layout(self, tmp_path: Path) -> None:
        population = Population(np.array([1, 0]), DomainSpec(2), "coins")

        path = PopulationFileRepository().write(population, tmp_path / "coins.csv")

        assert path.read_bytes() == (
            b"# ldp-bench population name=coins d=2\nvalue\n1\n0\n"
        )
