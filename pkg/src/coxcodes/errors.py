"""Exception types shared across the package."""


class CoxcodesError(Exception):
    """Base class for all package-specific errors."""


class MalformedMatrixError(CoxcodesError):
    """Defining matrix is not symmetric, has a bad diagonal, or bad entries."""


class NotFiniteError(CoxcodesError):
    """A diagram component matches no entry of the finite classification."""


class CapExceededError(CoxcodesError):
    """Group order exceeds the configured enumeration cap."""


class BadParameterError(CoxcodesError):
    """A family or order parameter is outside its valid range."""


class UnknownNameError(CoxcodesError):
    """Unrecognized name for an exceptional-type lookup."""


class LengthMismatchError(CoxcodesError):
    """Vector/matrix operands have incompatible lengths."""


class DimensionMismatchError(CoxcodesError):
    """Computed rank disagrees with the Eulerian dimension formula."""


class ModeUnavailableError(CoxcodesError):
    """Requested simulation mode is infeasible at the given sizes."""
