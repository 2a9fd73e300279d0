"""Pytest configuration for the ldp-bench test-suite.

Puts the *src* directory on ``sys.path`` so ``import ldpbench`` works without
an editable install, and provides the fixtures shared across test categories.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parent.parent
SRC_PATH = PROJECT_ROOT / "src"
FIXTURES_PATH = PROJECT_ROOT / "tests" / "fixtures"

# Prepend to sys.path (keeping any editable-install entries untouched)
src_str = str(SRC_PATH)
if src_str not in sys.path:
    sys.path.insert(0, src_str)


@pytest.fixture()
def rng() -> np.random.Generator:
    """Fixed-seed generator for tests that need random inputs."""
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture()
def fixtures_path() -> Path:
    return FIXTURES_PATH


__all__ = ["FIXTURES_PATH", "PROJECT_ROOT", "SRC_PATH"]
