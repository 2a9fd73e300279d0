"""Helpers for reading typed settings from environment variables.

Every parser treats an unset or empty variable as "use the default" and raises
``ValueError`` naming the variable when a value cannot be parsed.
"""

from __future__ import annotations

import os


def parse_bool_env(var_name: str, value: str | None, *, default: bool) -> bool:
    if value is None or value == "":
        return default

    normalized = value.strip().lower()
    if normalized in {"true", "1", "yes", "y", "on"}:
        return True
    if normalized in {"false", "0", "no", "n", "off"}:
        return False

    raise ValueError(f"{var_name} must be a boolean-like value (got: {value!r})")


def parse_float_env(var_name: str, value: str | None, *, default: float) -> float:
    if value is None or value == "":
        return default
    try:
        return float(value)
    except ValueError as exc:
        raise ValueError(f"{var_name} must be a float (got: {value!r})") from exc


def parse_int_env(
    var_name: str, value: str | None, *, default: int, minimum: int | None = None
) -> int:
    if value is None or value == "":
        return default
    try:
        parsed = int(value.strip())
    except ValueError as exc:
        raise ValueError(f"{var_name} must be an integer (got: {value!r})") from exc
    if minimum is not None and parsed < minimum:
        raise ValueError(f"{var_name} must be >= {minimum} (got: {parsed})")
    return parsed


def env_str(var_name: str, default: str) -> str:
    return os.environ.get(var_name) or default
