"""Exception types shared across the package."""


class HocalError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(HocalError):
    """Operands live over different label spaces."""


class InvalidDistribution(HocalError):
    """A probability vector or mixture violates its invariants."""


class CapExceeded(HocalError):
    """An enumeration or solver size cap would be exceeded."""


class DomainError(HocalError):
    """A numeric argument is outside the documented domain."""


class EmptyPartition(HocalError):
    """A referenced partition has no records."""


class FormatError(HocalError):
    """A dataset or table file is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line
