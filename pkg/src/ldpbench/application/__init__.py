"""Application layer: the experiment engine and the validation suite."""
