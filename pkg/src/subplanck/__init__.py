"""Phase-space numerics for an entangled two-particle compass state.

Closed-form and brute-force Wigner functions, sub-Planck lattice analysis,
displacement sensitivity and a variance entanglement witness.
"""

from .errors import (DegenerateStateError, LatticeNotFoundError, NoBracketError,
                     QuadratureResolutionError, SubPlanckError, TruncationWarning,
                     WignerAssemblyError)
from .kernels import BACKEND
from .states import Displacement, NormalizedState, StateParams, normalize
from .wigner_analytic import Grid2D, PhasePoint, Plane, SectionSpec, section, wigner
from .wigner_oracle import QuadratureSpec, wigner_numeric_2mode

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DegenerateStateError", "Displacement", "Grid2D", "LatticeNotFoundError",
    "NoBracketError", "NormalizedState", "PhasePoint", "Plane", "QuadratureResolutionError",
    "QuadratureSpec", "SectionSpec", "StateParams", "SubPlanckError", "TruncationWarning",
    "WignerAssemblyError", "normalize", "section", "wigner", "wigner_numeric_2mode",
]
