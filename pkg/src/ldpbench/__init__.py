"""ldp-bench - benchmark of post-processing for LDP frequency estimation."""

__version__ = "0.1.0"
