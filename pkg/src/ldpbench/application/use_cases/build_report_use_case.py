"""Win tables and utility summaries of a results file."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ldpbench.domain.entities.cell_result import CellResult
from ldpbench.domain.exceptions import InputError
from ldpbench.domain.repositories.results_repository import ResultsRepository
from ldpbench.domain.services.win_table_service import WinTableService
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind
from ldpbench.domain.value_objects.win_table_entry import UtilitySummary, WinTableEntry


@dataclass(frozen=True)
class ReportFilter:
    """Restricts a report; unset fields match everything."""

    metric: MetricKind | None = None
    dataset: str | None = None
    protocol: ProtocolKind | None = None
    epsilon: float | None = None

    def matches(self, cell: ExperimentCell) -> bool:
        return (
            (self.metric is None or cell.metric is self.metric)
            and (self.dataset is None or cell.dataset == self.dataset)
            and (self.protocol is None or cell.protocol is self.protocol)
            and (self.epsilon is None or cell.epsilon == self.epsilon)
        )


class BuildReportUseCase:
    def __init__(
        self,
        results_repository: ResultsRepository,
        win_table_service: WinTableService | None = None,
    ) -> None:
        self._results_repository = results_repository
        self._win_table_service = win_table_service or WinTableService()

    def _load(
        self, path: Path, report_filter: ReportFilter
    ) -> dict[ExperimentCell, CellResult]:
        stored = self._results_repository.read(path)
        # A run whose every cell failed leaves a header-only CSV; it reports
        # as an empty table.
        if not any(result.ok for result in stored.values()):
            return {}
        results = {
            cell: result
            for cell, result in stored.items()
            if report_filter.matches(cell)
        }
        if not results:
            raise InputError(f"{path} holds no results matching the filter")
        return results

    def win_table(
        self,
        path: Path,
        report_filter: ReportFilter,
        include_baseline: bool = False,
        by_mean: bool = False,
    ) -> list[WinTableEntry]:
        """Best PP method of every (dataset, protocol, epsilon, metric).

        Raises:
            ResultsFormatError: If the file cannot be parsed.
            InputError: If nothing matches the filter or a group is ragged.
        """
        return self._win_table_service.win_table(
            self._load(path, report_filter), include_baseline, by_mean
        )

    def summary(self, path: Path, report_filter: ReportFilter) -> list[UtilitySummary]:
        return self._win_table_service.summarize(self._load(path, report_filter))
