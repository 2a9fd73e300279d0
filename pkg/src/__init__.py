"""ldp-bench sources."""
