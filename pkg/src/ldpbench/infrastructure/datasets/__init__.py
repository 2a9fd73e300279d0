"""Dataset generation and ingestion."""

from .dataset_catalog import DatasetCatalog
from .population_file import PopulationFileRepository
from .real_dataset_loader import RealDatasetLoader
from .synthetic_generator import SyntheticPopulationGenerator, zipf_pmf

__all__ = [
    "DatasetCatalog",
    "PopulationFileRepository",
    "RealDatasetLoader",
    "SyntheticPopulationGenerator",
    "zipf_pmf",
]
