"""Exception and warning types raised across the package."""


class SubPlanckError(Exception):
    """Base class for all package errors."""


class DegenerateStateError(SubPlanckError, ValueError):
    """The weights cancel the state: |A|^2 + |B|^2 + 2 Re(A* B) g^2 <= 0."""


class WignerAssemblyError(SubPlanckError, ArithmeticError):
    """The off-diagonal components failed to sum to a real number.

    This signals an implementation defect, never a property of the state.
    """


class QuadratureResolutionError(SubPlanckError, ValueError):
    """Too few quadrature nodes to resolve the fastest oscillation."""


class LatticeNotFoundError(SubPlanckError):
    """Fewer than the required number of sign changes along a section axis."""

    def __init__(self, message, axis=None):
        super().__init__(message)
        self.axis = axis


class NoBracketError(SubPlanckError, ValueError):
    """A sampled curve has no interior minimum to refine."""


class TruncationWarning(UserWarning):
    """Integrand is not negligible at the edge of the truncated shift interval."""
