"""Exception hierarchy shared by all modules."""


class SiavError(Exception):
    """Base class for errors raised by this package."""


class DomainError(SiavError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class CapabilityError(SiavError):
    """The operation is well defined but exceeds what this library supports."""


class NotWeilPolynomialError(DomainError):
    """A polynomial fails the Weil coefficient symmetry for the given q."""


class ConsistencyError(SiavError, ArithmeticError):
    """An internal exactness check failed (usually indicates invalid input)."""


class CatalogError(SiavError):
    """Malformed or inconsistent CM-field catalog data."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
