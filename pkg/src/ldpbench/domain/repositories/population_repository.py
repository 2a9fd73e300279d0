"""Population repository protocol."""

from typing import Protocol, runtime_checkable

from ldpbench.domain.entities.population import Population


@runtime_checkable
class PopulationRepository(Protocol):
    """Resolves dataset names to user populations."""

    def names(self) -> list[str]:
        """Return the configured dataset names in configuration order."""
        ...

    def load(self, name: str, run_index: int | None = None) -> Population:
        """Return the population of dataset ``name``.

        Args:
            name: Dataset name as configured
            run_index: When set, synthetic datasets are redrawn for this run;
                file-backed datasets ignore it

        Raises:
            DatasetError: When the dataset is unknown or cannot be read.
        """
        ...
