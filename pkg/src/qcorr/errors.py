class QcorrError(Exception):
    """Base class for package errors."""


class InvalidStateError(QcorrError, ValueError):
    """Matrix or vector fails the state invariants."""


class ArgumentError(QcorrError, ValueError):
    """Inconsistent or out-of-range arguments."""


class CapacityError(QcorrError):
    """Requested object exceeds the configured dimension cap."""
