"""OpenTelemetry metrics setup and recording helpers."""

from __future__ import annotations

import logging
import sys

from opentelemetry import metrics
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import (
    ConsoleMetricExporter,
    PeriodicExportingMetricReader,
)
from opentelemetry.sdk.resources import Resource

from shared.infrastructure.telemetry.config import TelemetryConfig

logger = logging.getLogger(__name__)


def create_metrics_recorder(config: TelemetryConfig) -> MetricsRecorder:
    return MetricsRecorder(config=config)


class MetricsRecorder:
    """Records benchmark throughput and failures via OpenTelemetry.

    Every ``record_*`` call is a no-op when metrics are disabled.
    """

    def __init__(self, *, config: TelemetryConfig) -> None:
        self._config = config
        self._enabled = config.metrics_enabled
        self._provider: MeterProvider | None = None

        self.runs_total = None
        self.run_duration_seconds = None
        self.cells_total = None
        self.errors_total = None

        if not self._enabled:
            return

        self._provider = _build_meter_provider(config)
        metrics.set_meter_provider(self._provider)

        meter = metrics.get_meter(config.service_name)

        self.runs_total = meter.create_counter(
            name="runs_total",
            unit="1",
            description="Total group runs (perturb, aggregate, estimate) executed.",
        )
        self.run_duration_seconds = meter.create_histogram(
            name="run_duration_seconds",
            unit="s",
            description="Duration of one group run in seconds.",
        )
        self.cells_total = meter.create_counter(
            name="cells_total",
            unit="1",
            description="Total experiment cells completed.",
        )
        self.errors_total = meter.create_counter(
            name="errors_total",
            unit="1",
            description="Total errors recorded.",
        )

    @property
    def enabled(self) -> bool:
        return self._enabled

    def record_run(self, *, protocol: str, status: str, duration_s: float) -> None:
        if not self._enabled or self.runs_total is None:
            return
        attributes: dict[str, str | bool | int | float] = {
            "protocol": protocol,
            "status": status,
        }
        self.runs_total.add(1, attributes)
        if self.run_duration_seconds is not None:
            self.run_duration_seconds.record(duration_s, attributes)

    def record_cells(self, *, count: int, status: str) -> None:
        if not self._enabled or self.cells_total is None or count <= 0:
            return
        self.cells_total.add(count, {"status": status})

    def record_error(self, *, where: str, error_type: str) -> None:
        if not self._enabled or self.errors_total is None:
            return
        attributes: dict[str, str | bool | int | float] = {
            "where": where,
            "error_type": error_type,
        }
        self.errors_total.add(1, attributes)

    def shutdown(self) -> None:
        """Flush pending exports."""
        if self._provider is not None:
            self._provider.shutdown()


def _build_meter_provider(config: TelemetryConfig) -> MeterProvider:
    resource = Resource.create(
        {
            "service.name": config.service_name,
            "deployment.environment": config.environment,
        }
    )
    if not config.console_export:
        # Still provide a meter provider so `metrics.get_meter()` works.
        return MeterProvider(resource=resource)

    reader = PeriodicExportingMetricReader(ConsoleMetricExporter(out=sys.stderr))
    return MeterProvider(resource=resource, metric_readers=[reader])
