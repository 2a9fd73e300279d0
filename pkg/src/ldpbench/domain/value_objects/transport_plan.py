"""Mass-transport plan between two distributions on 0..d-1."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ldpbench.domain.exceptions import ValidationError

MARGINAL_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """flow[i, j] is the mass moved from value i of ``source`` to value j."""

    flow: npt.NDArray[np.float64]
    source: npt.NDArray[np.float64]
    target: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        flow = np.array(self.flow, dtype=np.float64)
        d = flow.shape[0] if flow.ndim == 2 else -1
        if flow.shape != (d, d) or np.size(self.source) != d:
            raise ValidationError("flow must be a d x d matrix over the source domain")
        if np.any(flow < -MARGINAL_TOLERANCE):
            raise ValidationError("transported mass must be non-negative")
        if not np.allclose(flow.sum(axis=1), self.source, atol=MARGINAL_TOLERANCE):
            raise ValidationError("row sums must equal the source distribution")
        if not np.allclose(flow.sum(axis=0), self.target, atol=MARGINAL_TOLERANCE):
            raise ValidationError("column sums must equal the target distribution")
        object.__setattr__(self, "flow", flow)

    @property
    def d(self) -> int:
        return int(self.flow.shape[0])

    def cost(self) -> float:
        """Total mass times ground distance |i - j|."""
        positions = np.arange(self.d)
        distance = np.abs(positions[:, None] - positions[None, :])
        return float(np.sum(self.flow * distance))
