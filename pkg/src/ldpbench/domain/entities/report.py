"""Perturbed user reports, one at a time or in vectorised batches."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ldpbench.domain.exceptions import ReportShapeError
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind


@dataclass(frozen=True)
class Report:
    """Base of every single-user report; ``kind`` names the producing protocol."""

    kind: ProtocolKind


@dataclass(frozen=True)
class ValueReport(Report):
    """GRR: the (possibly flipped) value itself."""

    value: int


@dataclass(frozen=True)
class HashReport(Report):
    """BLH/OLH: the user's hash seed pair, sent in clear, and a perturbed bucket."""

    a: int
    b: int
    bucket: int


@dataclass(frozen=True)
class BitVectorReport(Report):
    """RAPPOR/OUE: one perturbed bit per domain value."""

    bits: tuple[bool, ...]


@dataclass(frozen=True)
class SubsetReport(Report):
    """SS: a set of k distinct domain values."""

    members: frozenset[int]


@dataclass(frozen=True, eq=False)
class ReportBatch:
    """Reports of ``m`` users held column-wise.

    Exactly the arrays of the batch's protocol family are set: ``values`` for
    GRR, ``a``/``b``/``buckets`` for hashing, and an ``m x d`` boolean
    ``support`` matrix for unary encoding (the bits) and SS (membership).
    """

    kind: ProtocolKind
    size: int
    values: npt.NDArray[np.int64] | None = None
    a: npt.NDArray[np.int64] | None = None
    b: npt.NDArray[np.int64] | None = None
    buckets: npt.NDArray[np.int64] | None = None
    support: npt.NDArray[np.bool_] | None = None

    def __len__(self) -> int:
        return self.size

    def reports(self) -> list[Report]:
        """Expand into the equivalent single-user reports."""
        if self.kind is ProtocolKind.GRR:
            assert self.values is not None
            return [ValueReport(self.kind, int(value)) for value in self.values]
        if self.kind.uses_hashing:
            assert self.a is not None and self.b is not None
            assert self.buckets is not None
            return [
                HashReport(self.kind, int(a), int(b), int(bucket))
                for a, b, bucket in zip(self.a, self.b, self.buckets, strict=True)
            ]
        if self.support is None:
            raise ReportShapeError(f"{self.kind.value} batch carries no support matrix")
        if self.kind.uses_unary_encoding:
            return [
                BitVectorReport(self.kind, tuple(bool(bit) for bit in row))
                for row in self.support
            ]
        return [
            SubsetReport(self.kind, frozenset(int(v) for v in np.flatnonzero(row)))
            for row in self.support
        ]
