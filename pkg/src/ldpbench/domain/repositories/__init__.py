"""Domain repository interfaces."""

from .population_repository import PopulationRepository
from .results_repository import ResultsRepository
from .task_runner import TaskRunner

__all__ = ["PopulationRepository", "ResultsRepository", "TaskRunner"]
