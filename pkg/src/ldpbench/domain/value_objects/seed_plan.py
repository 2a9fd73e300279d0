"""Reproducible per-block random streams.

Every block of ``block_size`` consecutive users in a run draws from its own
stream, seeded by ``SeedPlan.derive(group_index, run_index, block_index)``.
The derivation packs the three indices into one 64-bit word and passes it
through the SplitMix64 finalizer, keyed by the master seed:

    word = group << 40 | run << 20 | block
    seed = mix64(word XOR mix64(master_seed XOR STREAM_SALT))

``mix64`` is a bijection on 64-bit words, so distinct index triples always get
distinct seeds under the same master seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ldpbench.domain.exceptions import ParameterError

MASK64 = (1 << 64) - 1

# SplitMix64 finalizer constants.
MIX_SHIFT_1 = 30
MIX_MULT_1 = 0xBF58476D1CE4E5B9
MIX_SHIFT_2 = 27
MIX_MULT_2 = 0x94D049BB133111EB
MIX_SHIFT_3 = 31

STREAM_SALT = 0x9E3779B97F4A7C15
POPULATION_SALT = 0xD1B54A32D192ED03

GROUP_BITS = 24
RUN_BITS = 20
BLOCK_BITS = 20

DEFAULT_BLOCK_SIZE = 2048


def mix64(value: int) -> int:
    """SplitMix64 finalizer (a bijection on 64-bit words)."""
    z = value & MASK64
    z = ((z ^ (z >> MIX_SHIFT_1)) * MIX_MULT_1) & MASK64
    z = ((z ^ (z >> MIX_SHIFT_2)) * MIX_MULT_2) & MASK64
    return z ^ (z >> MIX_SHIFT_3)


def _check_index(name: str, value: int, bits: int) -> None:
    if not 0 <= value < (1 << bits):
        raise ParameterError(f"{name} must be in [0, 2^{bits}), got {value}")


@dataclass(frozen=True)
class SeedPlan:
    """Master seed plus the fixed work decomposition of a run.

    ``chunk_count`` only decides how blocks are grouped into parallel tasks;
    it never changes which stream a user's randomness comes from.
    """

    master_seed: int
    chunk_count: int = 1
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed <= MASK64:
            raise ParameterError("master_seed must be a 64-bit unsigned integer")
        if self.chunk_count < 1:
            raise ParameterError(f"chunk_count must be >= 1, got {self.chunk_count}")
        if self.block_size < 1:
            raise ParameterError(f"block_size must be >= 1, got {self.block_size}")

    def derive(self, group_index: int, run_index: int, block_index: int) -> int:
        """64-bit seed of one block's stream."""
        _check_index("group_index", group_index, GROUP_BITS)
        _check_index("run_index", run_index, RUN_BITS)
        _check_index("block_index", block_index, BLOCK_BITS)
        word = (
            group_index << (RUN_BITS + BLOCK_BITS)
            | run_index << BLOCK_BITS
            | block_index
        )
        return mix64(word ^ mix64(self.master_seed ^ STREAM_SALT))

    def derive_population(self, dataset_seed: int, run_index: int) -> int:
        """Seed for regenerating a synthetic population in a given run."""
        _check_index("run_index", run_index, RUN_BITS)
        return mix64(mix64((dataset_seed ^ POPULATION_SALT) & MASK64) ^ run_index)

    def rng(
        self, group_index: int, run_index: int, block_index: int
    ) -> np.random.Generator:
        """Generator for one block, backed by PCG64."""
        seed = self.derive(group_index, run_index, block_index)
        return np.random.Generator(np.random.PCG64(seed))

    def block_bounds(self, n_users: int) -> list[tuple[int, int]]:
        """[start, stop) user ranges of every block, in order."""
        return [
            (start, min(start + self.block_size, n_users))
            for start in range(0, n_users, self.block_size)
        ]

    def chunk_layout(self, n_blocks: int) -> list[range]:
        """Split block indices into ``chunk_count`` contiguous (possibly empty) runs."""
        base, extra = divmod(n_blocks, self.chunk_count)
        layout: list[range] = []
        start = 0
        for chunk in range(self.chunk_count):
            size = base + (1 if chunk < extra else 0)
            layout.append(range(start, start + size))
            start += size
        return layout
