"""Exception types raised across the package."""


class MatrampError(Exception):
    """Base class for package errors."""


class ResourceLimitError(MatrampError):
    """A dense register would exceed the configured qubit budget."""


class DimensionError(MatrampError, ValueError):
    """Operands have incompatible or malformed shapes."""


class ValidationError(MatrampError, ValueError):
    """An input violates a documented precondition."""
