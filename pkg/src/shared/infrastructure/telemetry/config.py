"""Telemetry configuration utilities."""

from __future__ import annotations

import os
from dataclasses import dataclass

from shared.infrastructure.env import env_str, parse_bool_env, parse_float_env

DEFAULT_SERVICE_NAME = "ldp-bench"


@dataclass(frozen=True)
class TelemetryConfig:
    """Configuration for OpenTelemetry metrics and tracing."""

    service_name: str
    environment: str
    trace_sample_rate: float
    metrics_enabled: bool
    tracing_enabled: bool
    console_export: bool = False

    @classmethod
    def from_environment(cls) -> TelemetryConfig:
        service_name = env_str("OTEL_SERVICE_NAME", DEFAULT_SERVICE_NAME)
        environment = env_str("ENVIRONMENT", "development")

        trace_sample_rate = parse_float_env(
            "TRACE_SAMPLE_RATE",
            os.environ.get("TRACE_SAMPLE_RATE"),
            default=1.0,
        )
        if not (0.0 <= trace_sample_rate <= 1.0):
            raise ValueError("TRACE_SAMPLE_RATE must be between 0.0 and 1.0")

        metrics_enabled = parse_bool_env(
            "METRICS_ENABLED",
            os.environ.get("METRICS_ENABLED"),
            default=False,
        )
        tracing_enabled = parse_bool_env(
            "TRACING_ENABLED",
            os.environ.get("TRACING_ENABLED"),
            default=False,
        )
        console_export = parse_bool_env(
            "TRACE_CONSOLE_EXPORT",
            os.environ.get("TRACE_CONSOLE_EXPORT"),
            default=False,
        )

        return cls(
            service_name=service_name,
            environment=environment,
            trace_sample_rate=trace_sample_rate,
            metrics_enabled=metrics_enabled,
            tracing_enabled=tracing_enabled,
            console_export=console_export,
        )

    @classmethod
    def disabled(cls) -> TelemetryConfig:
        return cls(
            service_name=DEFAULT_SERVICE_NAME,
            environment="test",
            trace_sample_rate=1.0,
            metrics_enabled=False,
            tracing_enabled=False,
        )
