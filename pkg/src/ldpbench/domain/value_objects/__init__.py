from .domain_spec import DomainSpec, PrivacyBudget
from .experiment_cell import ExperimentCell, GroupKey, TableKey
from .experiment_matrix import ExperimentMatrix
from .frequency_vector import FrequencyTag, FrequencyVector
from .generator_config import GeneratorConfig, GeneratorKind
from .metric_kind import MetricKind
from .pp_method import NormalizationConstants, PPMethod
from .protocol_spec import ProtocolKind, ProtocolSpec
from .seed_plan import SeedPlan
from .transport_plan import TransportPlan
from .win_table_entry import UtilitySummary, WinTableEntry

__all__ = [
    "DomainSpec",
    "ExperimentCell",
    "ExperimentMatrix",
    "FrequencyTag",
    "FrequencyVector",
    "GeneratorConfig",
    "GeneratorKind",
    "GroupKey",
    "MetricKind",
    "NormalizationConstants",
    "PPMethod",
    "PrivacyBudget",
    "ProtocolKind",
    "ProtocolSpec",
    "SeedPlan",
    "TableKey",
    "TransportPlan",
    "UtilitySummary",
    "WinTableEntry",
]
