from .build_report_use_case import BuildReportUseCase, ReportFilter
from .run_experiment_use_case import ExperimentRun, RunExperimentUseCase

__all__ = [
    "BuildReportUseCase",
    "ExperimentRun",
    "ReportFilter",
    "RunExperimentUseCase",
]
