"""Experiment matrix coordinates."""

from __future__ import annotations

from dataclasses import dataclass

from ldpbench.domain.exceptions import ValidationError
from ldpbench.domain.value_objects.domain_spec import PrivacyBudget
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind


@dataclass(frozen=True, order=True)
class GroupKey:
    """Cells sharing a group share every run's perturbation and estimate."""

    dataset: str
    protocol: ProtocolKind
    epsilon: float


@dataclass(frozen=True, order=True)
class TableKey:
    """One cell of a best-PP table: every PP method competes inside it."""

    dataset: str
    protocol: ProtocolKind
    epsilon: float
    metric: MetricKind


@dataclass(frozen=True)
class ExperimentCell:
    """One (dataset, protocol, epsilon, PP, metric) configuration."""

    dataset: str
    protocol: ProtocolKind
    epsilon: float
    pp: PPMethod
    metric: MetricKind

    def __post_init__(self) -> None:
        if not self.dataset:
            raise ValidationError("dataset name is required")
        PrivacyBudget(self.epsilon)

    @property
    def group_key(self) -> GroupKey:
        return GroupKey(self.dataset, self.protocol, self.epsilon)

    @property
    def table_key(self) -> TableKey:
        return TableKey(self.dataset, self.protocol, self.epsilon, self.metric)

    def sort_key(self) -> tuple[str, str, float, str, str]:
        """Lexicographic order used for every emitted file."""
        return (
            self.dataset,
            self.protocol.value,
            self.epsilon,
            self.pp.value,
            self.metric.value,
        )
