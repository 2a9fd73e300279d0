"""Pure domain services of the benchmark pipeline."""

from .frequency_oracle_service import FrequencyOracleService
from .postprocessing_service import PostProcessingService
from .privacy_audit_service import PrivacyAuditService
from .true_frequencies import true_frequencies
from .universal_hash import hash_prime_for, hash_universal
from .utility_metrics_service import UtilityMetricsService
from .win_table_service import WinTableService

__all__ = [
    "FrequencyOracleService",
    "PostProcessingService",
    "PrivacyAuditService",
    "UtilityMetricsService",
    "WinTableService",
    "hash_prime_for",
    "hash_universal",
    "true_frequencies",
]
