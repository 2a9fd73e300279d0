"""OpenTelemetry tracing setup and helpers."""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor
from opentelemetry.sdk.trace.sampling import ParentBased, TraceIdRatioBased

from shared.infrastructure.logging import ensure_trace_id
from shared.infrastructure.telemetry.config import TelemetryConfig

logger = logging.getLogger(__name__)

SpanAttribute = str | bool | int | float


def create_tracing_provider(config: TelemetryConfig) -> TracingProvider:
    provider = TracingProvider(config=config)
    provider.configure()
    return provider


class TracingProvider:
    """Configures OpenTelemetry tracing and provides small helpers."""

    def __init__(self, *, config: TelemetryConfig) -> None:
        self._config = config
        self._configured = False
        self._tracer_provider: TracerProvider | None = None

    @property
    def enabled(self) -> bool:
        return self._config.tracing_enabled

    def configure(self) -> None:
        """Configure the global tracer provider (idempotent)."""
        if self._configured:
            return

        if not self._config.tracing_enabled:
            self._configured = True
            return

        resource = Resource.create(
            {
                "service.name": self._config.service_name,
                "deployment.environment": self._config.environment,
            }
        )
        sampler = ParentBased(TraceIdRatioBased(self._config.trace_sample_rate))
        tracer_provider = TracerProvider(resource=resource, sampler=sampler)

        if self._config.console_export:
            tracer_provider.add_span_processor(
                SimpleSpanProcessor(ConsoleSpanExporter(out=sys.stderr))
            )

        trace.set_tracer_provider(tracer_provider)
        self._tracer_provider = tracer_provider
        self._configured = True

    @contextmanager
    def span(self, name: str, **attributes: SpanAttribute) -> Iterator[None]:
        """Run the body inside a span; a no-op span when tracing is off."""
        tracer = trace.get_tracer(self._config.service_name)
        with tracer.start_as_current_span(name, attributes=attributes):
            yield

    def sync_trace_context(self) -> str:
        """Sync OTel trace context into shared trace_id ContextVar."""
        return ensure_trace_id()

    def shutdown(self) -> None:
        if self._tracer_provider is not None:
            self._tracer_provider.shutdown()
