"""Unit tests for ldp-bench."""
