"""Constituent cat wavefunctions and the entangled bipartite compass state.

The two single-particle building blocks are even cats of width ``delta``:

* ``even_position_state``: Gaussians at ``x = +-x0`` (the E/W pair),
* ``even_momentum_state``: a Gaussian at the origin carrying momenta ``+-p0``
  (the N/S pair), i.e. ``2 cos(p0 x / hbar) exp(-x^2 / 2 delta^2)``.

The bipartite state is ``N [A psi(x1) phi(x2) + B phi(x1) psi(x2)]``.
Everything here is a pure function of its inputs and broadcasts over numpy
arrays.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateStateError

SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class StateParams:
    """Physical constants and entanglement weights of the compass state.

    Defaults are the reference regime: ``x0 = p0 = 5``, ``delta = hbar = 1``,
    ``A = (1 + i)/sqrt(2)`` and ``B = (1 - i)/sqrt(2)``.
    """

    x0: float = 5.0
    p0: float = 5.0
    delta: float = 1.0
    hbar: float = 1.0
    A: complex = complex(SQRT_HALF, SQRT_HALF)
    B: complex = complex(SQRT_HALF, -SQRT_HALF)

    def __post_init__(self):
        for name in ("x0", "p0", "delta", "hbar"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(float(value)):
                raise ValueError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in ("A", "B"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.A == 0 and self.B == 0:
            raise ValueError("at least one of A, B must be nonzero")

    def with_weights(self, A=None, B=None):
        return replace(self, A=self.A if A is None else A, B=self.B if B is None else B)

    @property
    def position_overlap(self):
        """exp(-x0^2/delta^2): overlap of the two position-cat Gaussians."""
        return math.exp(-(self.x0 / self.delta) ** 2)

    @property
    def momentum_overlap(self):
        """exp(-p0^2 delta^2/hbar^2): overlap of the two momentum-cat components."""
        return math.exp(-(self.p0 * self.delta / self.hbar) ** 2)

    @property
    def support(self):
        """Half-width beyond which every constituent amplitude is numerically zero."""
        return abs(self.x0) + 12.0 * self.delta


@dataclass(frozen=True)
class NormalizedState:
    params: StateParams
    norm_const: float
    cross_overlap: float = field(repr=False)

    @property
    def weights(self):
        """Effective amplitudes N*A, N*B after normalization."""
        return self.norm_const * self.params.A, self.norm_const * self.params.B


@dataclass(frozen=True)
class Displacement:
    """Complex phase-space shifts for particle 1 (alpha) and particle 2 (beta)."""

    alpha: complex = 0j
    beta: complex = 0j

    @classmethod
    def equal(cls, shift):
        return cls(complex(shift), complex(shift))


def _position_norm(params):
    return 1.0 / (math.sqrt(2.0) * math.pi**0.25 * math.sqrt(params.delta)
                  * math.sqrt(1.0 + params.position_overlap))


def _momentum_norm(params):
    return 1.0 / (math.sqrt(2.0) * math.pi**0.25 * math.sqrt(params.delta)
                  * math.sqrt(1.0 + params.momentum_overlap))


def even_position_state(x, params):
    """Even position cat psi(x); real and non-negative."""
    x = np.asarray(x, dtype=float)
    d2 = 2.0 * params.delta**2
    return _position_norm(params) * (np.exp(-(x + params.x0) ** 2 / d2)
                                     + np.exp(-(x - params.x0) ** 2 / d2))


def even_momentum_state(x, params):
    """Even momentum cat phi(x) = 2 cos(p0 x/hbar) e^{-x^2/2 delta^2}, normalized."""
    x = np.asarray(x, dtype=float)
    return (_momentum_norm(params) * 2.0 * np.cos(params.p0 * x / params.hbar)
            * np.exp(-x**2 / (2.0 * params.delta**2)))


def even_position_state_dx(x, params):
    x = np.asarray(x, dtype=float)
    d2 = params.delta**2
    gp = np.exp(-(x + params.x0) ** 2 / (2 * d2))
    gm = np.exp(-(x - params.x0) ** 2 / (2 * d2))
    return -_position_norm(params) * ((x + params.x0) * gp + (x - params.x0) * gm) / d2


def even_momentum_state_dx(x, params):
    x = np.asarray(x, dtype=float)
    k = params.p0 / params.hbar
    g = np.exp(-x**2 / (2.0 * params.delta**2))
    return -2.0 * _momentum_norm(params) * g * (k * np.sin(k * x)
                                                + x * np.cos(k * x) / params.delta**2)


def cross_overlap(params):
    """<psi|phi> in closed form (both states are real, so g is real)."""
    ex, ep = params.position_overlap, params.momentum_overlap
    a = (params.x0 / params.delta) ** 2 + (params.p0 * params.delta / params.hbar) ** 2
    return (2.0 * math.exp(-a / 4.0) * math.cos(params.x0 * params.p0 / (2.0 * params.hbar))
            / math.sqrt((1.0 + ex) * (1.0 + ep)))


def normalization_constant(params, g=None):
    if g is None:
        g = cross_overlap(params)
    A, B = params.A, params.B
    gram = abs(A) ** 2 + abs(B) ** 2 + 2.0 * (A.conjugate() * B).real * g * g
    # A = -B with g -> 1 leaves a vanishing state; refuse rather than emit a huge N.
    if gram <= 1e-12 * (abs(A) ** 2 + abs(B) ** 2):
        raise DegenerateStateError(
            f"state norm^2 {gram:.3e} is degenerate for A={A}, B={B}, g={g:.6g}")
    return 1.0 / math.sqrt(gram)


def normalize(params):
    g = cross_overlap(params)
    return NormalizedState(params, normalization_constant(params, g), g)


def bipartite_state(x1, x2, state):
    """Psi(x1, x2) = N [A psi(x1) phi(x2) + B phi(x1) psi(x2)]; broadcasts."""
    p = state.params
    return state.norm_const * (
        p.A * (even_position_state(x1, p) * even_momentum_state(x2, p))
        + p.B * (even_momentum_state(x1, p) * even_position_state(x2, p))
    )


def compass_state(x, params):
    """Single-particle compass chi = (psi + phi)/sqrt(2 + 2g), for comparison runs."""
    g = cross_overlap(params)
    return (even_position_state(x, params) + even_momentum_state(x, params)) / math.sqrt(2.0 + 2.0 * g)


def phase_space_shift(shift, params):
    """Map a complex shift to (x_d, p_d) = (2 delta Re s, 2 hbar Im s / delta)."""
    shift = complex(shift)
    return 2.0 * params.delta * shift.real, 2.0 * params.hbar * shift.imag / params.delta


def displace(wavefunction, shift, params):
    """Return x -> exp(i p_d (x - x_d/2)/hbar) f(x - x_d).

    The symmetric phase makes D(s) unitary and D(s) D(-s) the identity.
    """
    xd, pd = phase_space_shift(shift, params)
    if xd == 0.0 and pd == 0.0:
        return wavefunction
    hbar = params.hbar

    def displaced(x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * pd * (x - 0.5 * xd) / hbar) * wavefunction(x - xd)

    return displaced


def displaced_bipartite(state, d):
    """(D1(alpha) D2(beta) Psi)(x1, x2), applied term by term to the product components."""
    p = state.params
    psi = lambda x: even_position_state(x, p)
    phi = lambda x: even_momentum_state(x, p)
    psi1, phi1 = displace(psi, d.alpha, p), displace(phi, d.alpha, p)
    psi2, phi2 = displace(psi, d.beta, p), displace(phi, d.beta, p)

    def amplitude(x1, x2):
        return state.norm_const * (p.A * (psi1(x1) * phi2(x2)) + p.B * (phi1(x1) * psi2(x2)))

    return amplitude
