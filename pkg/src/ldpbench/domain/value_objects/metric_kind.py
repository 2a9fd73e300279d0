"""Utility metric identifiers."""

from __future__ import annotations

from enum import Enum

from ldpbench.domain.exceptions import ParameterError


class MetricKind(str, Enum):
    """Distances between true and post-processed frequencies."""

    L1 = "l1"
    L2 = "l2"
    KL = "kl"
    EMD = "emd"

    @classmethod
    def from_string(cls, value: str) -> MetricKind:
        try:
            return cls(value.strip().lower())
        except ValueError:
            names = ", ".join(kind.value for kind in cls)
            raise ParameterError(
                f"unknown metric {value!r}; expected one of: {names}"
            ) from None
