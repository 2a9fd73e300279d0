"""Command-line interface."""

from .main import build_parser, cli_main

__all__ = ["build_parser", "cli_main"]
