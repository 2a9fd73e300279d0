"""Composition root: wires the engine and use cases from configuration."""

from dotenv import load_dotenv

from ldpbench.application.services.experiment_service import ExperimentService
from ldpbench.application.services.validation_service import ValidationService
from ldpbench.application.use_cases.build_report_use_case import BuildReportUseCase
from ldpbench.application.use_cases.run_experiment_use_case import (
    RunExperimentUseCase,
)
from ldpbench.infrastructure.config.experiment_config import ExperimentConfig
from ldpbench.infrastructure.config.settings import BenchmarkSettings
from ldpbench.infrastructure.datasets.dataset_catalog import DatasetCatalog
from ldpbench.infrastructure.jobs.chunk_task_pool import ChunkTaskPool
from ldpbench.infrastructure.results.results_file_repository import (
    ResultsFileRepository,
)
from shared.infrastructure.telemetry.metrics import MetricsRecorder
from shared.infrastructure.telemetry.tracing import TracingProvider


def create_experiment_service(
    config: ExperimentConfig,
    *,
    settings: BenchmarkSettings | None = None,
    max_concurrent_tasks: int | None = None,
    metrics_recorder: MetricsRecorder | None = None,
    tracing: TracingProvider | None = None,
) -> ExperimentService:
    """Create the engine for ``config``.

    Concurrency comes from ``max_concurrent_tasks``, then the config, then
    ``LDPBENCH_MAX_CONCURRENT_TASKS``. It never changes results.
    """
    load_dotenv()
    settings = settings or BenchmarkSettings.from_environment()
    concurrency = (
        max_concurrent_tasks
        or config.max_concurrent_tasks
        or settings.max_concurrent_tasks
    )
    catalog = DatasetCatalog(config.datasets, seed_plan=config.seed_plan())
    return ExperimentService(
        populations=catalog,
        task_runner=ChunkTaskPool(concurrency),
        metrics_recorder=metrics_recorder,
        tracing=tracing,
    )


def create_run_experiment_use_case(
    config: ExperimentConfig,
    *,
    max_concurrent_tasks: int | None = None,
    metrics_recorder: MetricsRecorder | None = None,
    tracing: TracingProvider | None = None,
) -> RunExperimentUseCase:
    service = create_experiment_service(
        config,
        max_concurrent_tasks=max_concurrent_tasks,
        metrics_recorder=metrics_recorder,
        tracing=tracing,
    )
    return RunExperimentUseCase(service, ResultsFileRepository())


def create_report_use_case() -> BuildReportUseCase:
    return BuildReportUseCase(ResultsFileRepository())


def create_validation_service() -> ValidationService:
    return ValidationService()
