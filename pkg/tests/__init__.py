"""Test suite for ldp-bench."""
