"""Unit tests for telemetry infrastructure."""
