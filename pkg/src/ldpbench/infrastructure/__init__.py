"""Adapters: datasets, results files, configuration and task execution."""
