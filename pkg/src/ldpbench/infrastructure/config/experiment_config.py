"""Experiment matrix configuration (TOML, validated with pydantic)."""

from __future__ import annotations

import math
import tomllib
from enum import Enum
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from ldpbench.domain.exceptions import ConfigError, DomainError
from ldpbench.domain.value_objects.experiment_cell import ExperimentCell, GroupKey
from ldpbench.domain.value_objects.experiment_matrix import ExperimentMatrix
from ldpbench.domain.value_objects.generator_config import (
    GeneratorConfig,
    GeneratorKind,
)
from ldpbench.domain.value_objects.metric_kind import MetricKind
from ldpbench.domain.value_objects.pp_method import PPMethod
from ldpbench.domain.value_objects.protocol_spec import ProtocolKind
from ldpbench.domain.value_objects.seed_plan import DEFAULT_BLOCK_SIZE, SeedPlan

DEFAULT_EPSILONS = (0.5, 1.0, 2.0, 3.0, 4.0)
DEFAULT_REPEATS = 20
DEFAULT_CHUNK_COUNT = 8

ResultFormat = Literal["csv", "json"]


class DatasetKind(str, Enum):
    GAUSSIAN = "gaussian"
    ZIPF = "zipf"
    UNIFORM = "uniform"
    ADULT = "adult"
    KOSARAK = "kosarak"
    BMS_POS = "bms_pos"
    POPULATION_FILE = "population_file"

    @property
    def is_synthetic(self) -> bool:
        return self in (DatasetKind.GAUSSIAN, DatasetKind.ZIPF, DatasetKind.UNIFORM)


class DatasetConfig(BaseModel):
    """One ``[[datasets]]`` table."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(min_length=1, pattern=r"^\S+$")
    kind: DatasetKind
    n: int | None = Field(default=None, ge=1)
    d: int | None = Field(default=None, ge=2)
    mu: float | None = None
    sd: float | None = Field(default=None, gt=0)
    s: float | None = Field(default=None, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    path: Path | None = None
    top_k: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_kind_fields(self) -> DatasetConfig:
        if self.kind.is_synthetic:
            if self.path is not None or self.top_k is not None:
                raise ValueError(f"{self.kind.value} datasets take no path or top_k")
        elif self.path is None:
            raise ValueError(f"{self.kind.value} datasets need a path")
        if self.top_k is not None and self.kind not in (
            DatasetKind.KOSARAK,
            DatasetKind.BMS_POS,
        ):
            raise ValueError("top_k only applies to kosarak and bms_pos datasets")
        return self

    def generator_config(self) -> GeneratorConfig:
        """Generator settings of a synthetic dataset; unset fields use defaults."""
        if not self.kind.is_synthetic:
            raise ConfigError(f"dataset {self.name!r} is not synthetic")
        overrides: dict[str, Any] = {
            key: value
            for key, value in {
                "n": self.n,
                "d": self.d,
                "mu": self.mu,
                "sd": self.sd,
                "s": self.s,
            }.items()
            if value is not None
        }
        return GeneratorConfig(
            kind=GeneratorKind(self.kind.value), seed=self.seed, **overrides
        )


def _parse_enum_list(values: Any, parse: Any) -> Any:
    if isinstance(values, list):
        return [parse(value) if isinstance(value, str) else value for value in values]
    return values


class ExperimentConfig(BaseModel):
    """The full experiment matrix plus run settings."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    master_seed: int = Field(ge=0, lt=2**64)
    repeats: int = Field(default=DEFAULT_REPEATS, ge=1)
    chunk_count: int = Field(default=DEFAULT_CHUNK_COUNT, ge=1)
    block_size: int = Field(default=DEFAULT_BLOCK_SIZE, ge=1)
    epsilons: list[float] = Field(default_factory=lambda: list(DEFAULT_EPSILONS))
    protocols: list[ProtocolKind] = Field(default_factory=lambda: list(ProtocolKind))
    pp_methods: list[PPMethod] = Field(default_factory=lambda: list(PPMethod))
    metrics: list[MetricKind] = Field(default_factory=lambda: list(MetricKind))
    resample_population: bool = False
    output_dir: Path = Path("results")
    formats: list[ResultFormat] = Field(default_factory=lambda: ["csv", "json"])
    max_concurrent_tasks: int | None = Field(default=None, ge=1)
    datasets: list[DatasetConfig] = Field(min_length=1)

    @field_validator("protocols", mode="before")
    @classmethod
    def _parse_protocols(cls, values: Any) -> Any:
        return _parse_enum_list(values, ProtocolKind.from_string)

    @field_validator("pp_methods", mode="before")
    @classmethod
    def _parse_pp_methods(cls, values: Any) -> Any:
        return _parse_enum_list(values, PPMethod.from_string)

    @field_validator("metrics", mode="before")
    @classmethod
    def _parse_metrics(cls, values: Any) -> Any:
        return _parse_enum_list(values, MetricKind.from_string)

    @field_validator("epsilons")
    @classmethod
    def _check_epsilons(cls, values: list[float]) -> list[float]:
        if not values:
            raise ValueError("at least one epsilon is required")
        for epsilon in values:
            if not math.isfinite(epsilon) or epsilon <= 0:
                raise ValueError(f"epsilon must be positive and finite, got {epsilon}")
        if len(set(values)) != len(values):
            raise ValueError("epsilons must be distinct")
        return values

    @field_validator("protocols", "pp_methods", "metrics", "formats")
    @classmethod
    def _check_distinct(cls, values: list[Any]) -> list[Any]:
        if not values:
            raise ValueError("list must not be empty")
        if len(set(values)) != len(values):
            raise ValueError("list entries must be distinct")
        return values

    @field_validator("datasets")
    @classmethod
    def _check_dataset_names(cls, values: list[DatasetConfig]) -> list[DatasetConfig]:
        names = [dataset.name for dataset in values]
        if len(set(names)) != len(names):
            raise ValueError("dataset names must be distinct")
        return values

    def seed_plan(self) -> SeedPlan:
        return SeedPlan(self.master_seed, self.chunk_count, self.block_size)

    def matrix(self) -> ExperimentMatrix:
        return ExperimentMatrix(
            datasets=tuple(dataset.name for dataset in self.datasets),
            protocols=tuple(self.protocols),
            epsilons=tuple(self.epsilons),
            pp_methods=tuple(self.pp_methods),
            metrics=tuple(self.metrics),
            repeats=self.repeats,
            seed_plan=self.seed_plan(),
            resample_population=self.resample_population,
        )

    def group_keys(self) -> list[GroupKey]:
        """(dataset, protocol, epsilon) groups; list position is the seed index."""
        return self.matrix().group_keys()

    def cells(self) -> list[ExperimentCell]:
        return self.matrix().cells()


def load_experiment_config(path: Path) -> ExperimentConfig:
    """Parse and validate a TOML config.

    Relative dataset paths are resolved against the config file's directory.

    Raises:
        ConfigError: If the file is missing, is not TOML or fails validation.
    """
    try:
        with path.open("rb") as handle:
            document = tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc

    try:
        config = ExperimentConfig.model_validate(document)
    except PydanticValidationError as exc:
        raise ConfigError(f"invalid config {path}:\n{exc}") from exc
    except DomainError as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc

    base = path.parent
    datasets = [
        dataset.model_copy(update={"path": base / dataset.path})
        if dataset.path is not None and not dataset.path.is_absolute()
        else dataset
        for dataset in config.datasets
    ]
    return config.model_copy(update={"datasets": datasets})
