"""Exception hierarchy.

The CLI maps :class:`InputError` subclasses to exit code 1 and
:class:`ComputationError` subclasses to exit code 2.
"""


class ThinSlitError(Exception):
    """Base class for all errors raised by thinslit."""


class InputError(ThinSlitError, ValueError):
    """Invalid parameters, configuration or request."""


class ComputationError(ThinSlitError, RuntimeError):
    """A numerical procedure failed to produce a trustworthy result."""


class DomainError(InputError):
    pass


class GeometryError(InputError):
    pass


class ConfigError(InputError):
    """Config file could not be parsed or failed validation."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RegimeError(InputError):
    """Formula used outside the parameter regime it was derived for."""


class MismatchError(InputError):
    """Cached or precomputed data does not belong to the given configuration."""


class ConvergenceError(ComputationError):
    pass


class SingularSystemError(ComputationError):
    pass


class MeshError(ComputationError):
    pass


class SolverError(ComputationError):
    pass


class EmptyTableError(InputError):
    """A sweep table holds no usable cell."""
