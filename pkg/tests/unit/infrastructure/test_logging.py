"""Unit tests for structured logging infrastructure."""

from __future__ import annotations

import json
import logging
import sys
import uuid

import pytest

from shared.infrastructure.logging import (
    JSONFormatter,
    ensure_trace_id,
    log_event,
    setup_logging,
    trace_id_var,
)


def _record(msg: str = "msg", **kwargs: object) -> logging.LogRecord:
    return logging.LogRecord(
        name=str(kwargs.get("name", "test")),
        level=logging.INFO,
        pathname="test.py",
        lineno=10,
        msg=msg,
        args=(),
        exc_info=kwargs.get("exc_info"),  # type: ignore[arg-type]
    )


@pytest.mark.unit()
class TestJSONFormatter:
    """Tests for JSONFormatter."""

    def test_formats_standard_fields(self) -> None:
        """Verify standard fields are present in JSON output."""
        result = json.loads(JSONFormatter().format(_record("Test", name="ldp.run")))

        assert result["level"] == "INFO"
        assert result["severity"] == "INFO"
        assert result["logger"] == "ldp.run"
        assert result["message"] == "Test"
        assert result["module"] == "test"
        assert "timestamp" in result
        assert "trace_id" in result

    def test_injects_trace_id_from_context_var(self) -> None:
        token = trace_id_var.set("test-trace-123")
        try:
            result = json.loads(JSONFormatter().format(_record()))
        finally:
            trace_id_var.reset(token)

        assert result["trace_id"] == "test-trace-123"

    def test_merges_event_data_to_root(self) -> None:
        """Verify extra event_data fields are flattened to root."""
        record = _record()
        record.event_data = {"event": "cell_group_completed", "failed_cells": 0}

        result = json.loads(JSONFormatter().format(record))

        assert result["event"] == "cell_group_completed"
        assert result["failed_cells"] == 0

    def test_includes_formatted_exception(self) -> None:
        try:
            raise RuntimeError("boom")
        except RuntimeError:
            record = _record(exc_info=sys.exc_info())

        result = json.loads(JSONFormatter().format(record))

        assert "RuntimeError: boom" in result["exception"]


@pytest.mark.unit()
class TestLogEvent:
    """Tests for log_event helper."""

    def test_log_event_with_fields(self, caplog: pytest.LogCaptureFixture) -> None:
        logger = logging.getLogger("test.log_event")
        with caplog.at_level(logging.INFO):
            log_event(logger, logging.INFO, "Test", event="my_event", value=123)

        assert len(caplog.records) == 1
        assert caplog.records[0].event_data == {"event": "my_event", "value": 123}


@pytest.mark.unit()
class TestSetupLogging:
    """Tests for setup_logging."""

    def test_setup_logging_with_level_name_installs_one_json_handler(self) -> None:
        root = logging.getLogger()
        saved_handlers, saved_level = root.handlers[:], root.level
        try:
            setup_logging("debug")
            setup_logging("debug")

            assert root.level == logging.DEBUG
            assert len(root.handlers) == 1
            assert isinstance(root.handlers[0].formatter, JSONFormatter)
        finally:
            root.handlers[:] = saved_handlers
            root.setLevel(saved_level)

    def test_setup_logging_with_unknown_level_raises_value_error(self) -> None:
        with pytest.raises(ValueError, match="Unknown log level"):
            setup_logging("chatty")


@pytest.mark.unit()
class TestTraceIdHelpers:
    """Tests for trace_id helper behavior."""

    def test_ensure_trace_id_generates_uuid_when_default(self) -> None:
        """ensure_trace_id should generate and set a UUID when trace_id is unset."""
        token = trace_id_var.set("no-trace-id")
        try:
            trace_id = ensure_trace_id()
            assert trace_id != "no-trace-id"
            uuid.UUID(trace_id)
            assert trace_id_var.get() == trace_id
        finally:
            trace_id_var.reset(token)

    def test_ensure_trace_id_reuses_existing_value(self) -> None:
        token = trace_id_var.set("trace-existing-123")
        try:
            assert ensure_trace_id() == "trace-existing-123"
        finally:
            trace_id_var.reset(token)
