"""Results file persistence."""

from .results_file_repository import CSV_COLUMNS, ResultsFileRepository

__all__ = ["CSV_COLUMNS", "ResultsFileRepository"]
