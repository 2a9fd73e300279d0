"""True value frequencies of a population."""

from ldpbench.domain.entities.population import Population
from ldpbench.domain.value_objects.frequency_vector import FrequencyTag, FrequencyVector


def true_frequencies(population: Population) -> FrequencyVector:
    """f(v) = count(v) / n."""
    return FrequencyVector(population.counts() / population.n, FrequencyTag.TRUE)
