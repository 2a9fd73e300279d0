"""The cross product an experiment runs over."""

from __future__ import annotations

from dataclasses import dataclass

from ldpbench.domain.exceptions import ValidationError
from ldpbench.domain.value_objects.domain_spec import PrivacyBudget
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell, GroupKey
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind
from ldpbench.domain.value_objects.seed_plan import SeedPlan


@dataclass(frozen=True)
class ExperimentMatrix:
    """Datasets x protocols x epsilons x PP methods x metrics, run ``repeats`` times.

    Cells sharing (dataset, protocol, epsilon) form a group; a group's position
    in :meth:`group_keys` is its seed index.
    """

    datasets: tuple[str, ...]
    protocols: tuple[ProtocolKind, ...]
    epsilons: tuple[float, ...]
    pp_methods: tuple[PPMethod, ...]
    metrics: tuple[MetricKind, ...]
    repeats: int
    seed_plan: SeedPlan
    resample_population: bool = False

    def __post_init__(self) -> None:
        for label, entries in (
            ("datasets", self.datasets),
            ("protocols", self.protocols),
            ("epsilons", self.epsilons),
            ("pp_methods", self.pp_methods),
            ("metrics", self.metrics),
        ):
            if not entries:
                raise ValidationError(f"{label} must not be empty")
            if len(set(entries)) != len(entries):
                raise ValidationError(f"{label} must be distinct")
        for epsilon in self.epsilons:
            PrivacyBudget(epsilon)
        if self.repeats < 1:
            raise ValidationError(f"repeats must be >= 1, got {self.repeats}")

    def group_keys(self) -> list[GroupKey]:
        return [
            GroupKey(dataset, protocol, epsilon)
            for dataset in self.datasets
            for protocol in self.protocols
            for epsilon in self.epsilons
        ]

    def cells_of(self, key: GroupKey) -> list[ExperimentCell]:
        return [
            ExperimentCell(key.dataset, key.protocol, key.epsilon, pp, metric)
            for pp in self.pp_methods
            for metric in self.metrics
        ]

    def cells(self) -> list[ExperimentCell]:
        return [cell for key in self.group_keys() for cell in self.cells_of(key)]
