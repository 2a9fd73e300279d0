"""Configured datasets, resolved to populations on demand."""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Sequence

from ldpbench.domain.entities.population import Population
from ldpbench.domain.exceptions import DatasetError, ValidationError
from ldpbench.domain.value_objects.seed_plan import SeedPlan
from ldpbench.infrastructure.config.experiment_config import DatasetConfig, DatasetKind
from ldpbench.infrastructure.datasets.population_file import PopulationFileRepository
from ldpbench.infrastructure.datasets.real_dataset_loader import (
    BMS_POS_TOP_K,
    KOSARAK_TOP_K,
    RealDatasetLoader,
)
from ldpbench.infrastructure.datasets.synthetic_generator import (
    SyntheticPopulationGenerator,
)
from shared.infrastructure.logging import log_event

logger = logging.getLogger(__name__)


class DatasetCatalog:
    """PopulationRepository over the ``[[datasets]]`` of an experiment config.

    Populations are built once and cached. With ``run_index`` set, synthetic
    datasets are redrawn from a seed derived from the dataset seed and the run.
    """

    def __init__(
        self,
        datasets: Sequence[DatasetConfig],
        seed_plan: SeedPlan | None = None,
        generator: SyntheticPopulationGenerator | None = None,
        loader: RealDatasetLoader | None = None,
        population_files: PopulationFileRepository | None = None,
    ) -> None:
        self._datasets = {dataset.name: dataset for dataset in datasets}
        self._seed_plan = seed_plan or SeedPlan(0)
        self._generator = generator or SyntheticPopulationGenerator()
        self._loader = loader or RealDatasetLoader()
        self._population_files = population_files or PopulationFileRepository()
        self._cache: dict[tuple[str, int | None], Population] = {}

    def names(self) -> list[str]:
        return list(self._datasets)

    def load(self, name: str, run_index: int | None = None) -> Population:
        dataset = self._datasets.get(name)
        if dataset is None:
            raise DatasetError(f"unknown dataset {name!r}")
        if not dataset.kind.is_synthetic:
            run_index = None

        key = (name, run_index)
        if key not in self._cache:
            self._cache[key] = self._build(dataset, run_index)
            population = self._cache[key]
            log_event(
                logger,
                logging.INFO,
                "Dataset resolved",
                event="dataset_resolved",
                dataset=name,
                kind=dataset.kind.value,
                n=population.n,
                d=population.d,
                skipped=population.skipped,
                run_index=run_index,
            )
        return self._cache[key]

    def _build(self, dataset: DatasetConfig, run_index: int | None) -> Population:
        try:
            if dataset.kind.is_synthetic:
                config = dataset.generator_config()
                if run_index is not None:
                    config = dataclasses.replace(
                        config,
                        seed=self._seed_plan.derive_population(config.seed, run_index),
                    )
                return self._generator.generate(config, dataset.name)

            assert dataset.path is not None
            if dataset.kind is DatasetKind.ADULT:
                return self._loader.load_adult(dataset.path, dataset.name)
            if dataset.kind is DatasetKind.KOSARAK:
                return self._loader.load_transactions(
                    dataset.path, dataset.top_k or KOSARAK_TOP_K, dataset.name
                )
            if dataset.kind is DatasetKind.BMS_POS:
                return self._loader.load_bms_pos(
                    dataset.path, dataset.top_k or BMS_POS_TOP_K, dataset.name
                )
            return self._population_files.read(dataset.path, dataset.name)
        except ValidationError as exc:
            raise DatasetError(f"dataset {dataset.name!r}: {exc}") from exc
