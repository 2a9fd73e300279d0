"""Per-run win counting and best-PP tables."""

from __future__ import annotations

import dataclasses
import math
from collections import defaultdict
from collections.abc import Mapping

import numpy as np

from ldpbench.domain.entities.cell_result import CellResult
from ldpbench.domain.exceptions import InputError
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell, TableKey
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind
from ldpbench.domain.value_objects.win_table_entry import UtilitySummary, WinTableEntry

ResultMap = Mapping[ExperimentCell, CellResult]


class WinTableService:
    """Decide which PP method performs best in every (dataset, protocol, eps, metric).

    In each run the method with the smallest metric value wins; exact ties give
    every tied method a win. Failed cells do not compete.
    """

    def _groups(
        self, results: ResultMap, include_baseline: bool
    ) -> dict[TableKey, list[CellResult]]:
        groups: dict[TableKey, list[CellResult]] = defaultdict(list)
        for cell, result in results.items():
            if not result.ok:
                continue
            if cell.pp.is_baseline and not include_baseline:
                continue
            groups[cell.table_key].append(result)
        for members in groups.values():
            members.sort(key=lambda result: result.cell.pp.value)
        return dict(sorted(groups.items()))

    def _win_matrix(self, key: TableKey, members: list[CellResult]) -> np.ndarray:
        """Boolean (methods x runs) matrix of per-run winners."""
        repeats = {result.repeats for result in members}
        if len(repeats) != 1:
            raise InputError(
                f"ragged group {key.dataset}/{key.protocol.value}/{key.epsilon}/"
                f"{key.metric.value}: run counts {sorted(repeats)}"
            )
        values = np.array([result.per_run_values for result in members])
        return values == values.min(axis=0)

    def _entry(
        self, key: TableKey, members: list[CellResult], by_mean: bool
    ) -> WinTableEntry:
        winners = self._win_matrix(key, members)
        wins = winners.sum(axis=1)
        methods = [result.cell.pp for result in members]
        # members are in method order, so the first maximum/minimum is the
        # alphabetical tie-break.
        if by_mean:
            best = int(np.argmin([result.mean for result in members]))
        else:
            best = int(np.argmax(wins))
        repeats = members[0].repeats
        return WinTableEntry(
            key=key,
            best_pp=methods[best],
            win_fraction=float(wins[best]) / repeats,
            repeats=repeats,
            win_counts=tuple(
                (method, int(count))
                for method, count in zip(methods, wins, strict=True)
            ),
        )

    def win_table(
        self,
        results: ResultMap,
        include_baseline: bool = False,
        by_mean: bool = False,
    ) -> list[WinTableEntry]:
        """One entry per table key, sorted by key.

        Args:
            results: Cell results of a run, possibly parsed back from a file
            include_baseline: Let No-PP compete alongside the PP methods
            by_mean: Name the method with the lowest mean instead of the most
                wins; ``win_fraction`` still counts that method's run wins

        Raises:
            InputError: If methods of one group ran a different number of times.
        """
        return [
            self._entry(key, members, by_mean)
            for key, members in self._groups(results, include_baseline).items()
        ]

    def annotate_winners(
        self, results: ResultMap, include_baseline: bool = False
    ) -> dict[ExperimentCell, CellResult]:
        """Copy of ``results`` with ``winner_flags`` set on every competing cell."""
        annotated = dict(results)
        for key, members in self._groups(results, include_baseline).items():
            winners = self._win_matrix(key, members)
            for result, flags in zip(members, winners, strict=True):
                annotated[result.cell] = dataclasses.replace(
                    result, winner_flags=tuple(bool(flag) for flag in flags)
                )
        return annotated

    def recommend(
        self,
        results: ResultMap,
        dataset: str,
        protocol: ProtocolKind,
        epsilon: float,
        metric: MetricKind,
        include_baseline: bool = False,
        by_mean: bool = False,
    ) -> WinTableEntry:
        """Best PP method for one setting.

        Raises:
            InputError: If the results hold no successful cell for the setting.
        """
        wanted = TableKey(dataset, protocol, epsilon, metric)
        members = self._groups(results, include_baseline).get(wanted)
        if not members:
            raise InputError(
                f"no results for {dataset}/{protocol.value}/{epsilon}/{metric.value}"
            )
        return self._entry(wanted, members, by_mean)

    def summarize(self, results: ResultMap) -> list[UtilitySummary]:
        """Mean, std and ratio to No-PP of every successful cell."""
        baselines = {
            cell.table_key: result.mean
            for cell, result in results.items()
            if result.ok and cell.pp is PPMethod.NO_PP
        }
        summaries = []
        ordered = sorted(results.items(), key=lambda item: item[0].sort_key())
        for cell, result in ordered:
            if not result.ok:
                continue
            baseline = baselines.get(cell.table_key)
            ratio = None
            if baseline is not None and baseline != 0 and math.isfinite(baseline):
                ratio = result.mean / baseline
            summaries.append(
                UtilitySummary(
                    key=cell.table_key,
                    pp=cell.pp,
                    mean=result.mean,
                    std=result.std,
                    repeats=result.repeats,
                    ratio_to_no_pp=ratio,
                )
            )
        return summaries
