from .experiment_service import CellRun, ExperimentService, GroupRun
from .validation_service import CheckResult, ValidationService, simplex_projection

__all__ = [
    "CellRun",
    "CheckResult",
    "ExperimentService",
    "GroupRun",
    "ValidationService",
    "simplex_projection",
]
