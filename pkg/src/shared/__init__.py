"""Cross-cutting infrastructure shared by the ldp-bench packages."""
