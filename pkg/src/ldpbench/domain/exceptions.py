"""Domain-specific exceptions for ldp-bench."""


class DomainError(Exception):
    """Base exception for all domain errors."""

    pass


class ValidationError(DomainError):
    """Raised when domain validation rules are violated."""

    pass


class ParameterError(ValidationError):
    """Raised when a protocol, hash or post-processing parameter is invalid."""

    pass


class DomainValueError(ValidationError):
    """Raised when a user value lies outside the domain 0..d-1."""

    pass


class ReportShapeError(ValidationError):
    """Raised when reports do not match the protocol they are aggregated under."""

    pass


class InputError(ValidationError):
    """Raised when metric or reporting inputs are malformed."""

    pass


class EmptySketchError(DomainError):
    """Raised when estimating frequencies from a sketch with no reports."""

    pass


class DatasetError(DomainError):
    """Raised when a dataset cannot be generated or ingested."""

    pass


class ConfigError(DomainError):
    """Raised when an experiment config cannot be parsed or validated."""

    pass


class ResultsFormatError(DomainError):
    """Raised when a results file is unreadable or has an unexpected schema."""

    pass
