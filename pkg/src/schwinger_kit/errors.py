"""Exception types shared across the package."""


class SchwingerKitError(Exception):
    """Base class for failures raised by this package."""


class DomainError(SchwingerKitError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ConvergenceError(SchwingerKitError, RuntimeError):
    """A series or quadrature did not reach the requested tolerance."""


class BracketError(SchwingerKitError, ValueError):
    """Root bracket does not contain a sign change."""


class UnsupportedPulseError(SchwingerKitError, ValueError):
    """The requested operation is not defined for this pulse kind."""


class ShootingError(SchwingerKitError, RuntimeError):
    """The instanton boundary-value solve failed to converge."""


class GridError(SchwingerKitError, ValueError):
    """A sampling grid is inconsistent or too coarse for the request."""


class RegimeWarning(UserWarning):
    """An approximation is being used outside its stated validity window."""
