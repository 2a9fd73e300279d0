"""Experiment and process configuration."""

from .experiment_config import (
    DatasetConfig,
    DatasetKind,
    ExperimentConfig,
    load_experiment_config,
)
from .settings import BenchmarkSettings

__all__ = [
    "BenchmarkSettings",
    "DatasetConfig",
    "DatasetKind",
    "ExperimentConfig",
    "load_experiment_config",
]
