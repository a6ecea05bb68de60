"""Brute-force Wigner transforms by tensor Gauss-Legendre quadrature.

This is the ground truth the closed form is checked against. It never touches
the closed-form expressions: it samples the wavefunction at the shifted
arguments ``x -+ a/2`` and integrates the correlation function against
``exp(i p a / hbar)`` directly.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._quad import MAX_HERMITE_NODES, gauss_hermite_weighted, gauss_legendre
from .errors import QuadratureResolutionError, TruncationWarning
from .states import (NormalizedState, _momentum_norm, _position_norm, bipartite_state,
                     normalize)
from .wigner_analytic import PhasePoint

BOUNDARY_TOLERANCE = 1e-12
IMAGINARY_TOLERANCE = 1e-9


class Rule(enum.Enum):
    GAUSS_LEGENDRE = "gauss-legendre"
    GAUSS_HERMITE_WEIGHTED = "gauss-hermite-weighted"


@dataclass(frozen=True)
class QuadratureSpec:
    """Shift-integral truncation [-half_width, half_width], node count per axis and rule.

    The Gauss-Hermite option spreads its nodes over the same interval (outermost
    node at +-half_width) and is capped at 300 nodes, so it only suits small momenta.
    """

    half_width: float
    nodes: int
    rule: Rule = Rule.GAUSS_LEGENDRE

    def __post_init__(self):
        if not self.half_width > 0 or not math.isfinite(self.half_width):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if int(self.nodes) != self.nodes or self.nodes < 16:
            raise QuadratureResolutionError(f"at least 16 nodes are required, got {self.nodes}")
        object.__setattr__(self, "rule", Rule(self.rule))
        if self.rule is Rule.GAUSS_HERMITE_WEIGHTED and self.nodes > MAX_HERMITE_NODES:
            raise QuadratureResolutionError(
                f"Gauss-Hermite rule supports at most {MAX_HERMITE_NODES} nodes, got {self.nodes}")

    def nodes_and_weights(self):
        if self.rule is Rule.GAUSS_HERMITE_WEIGHTED:
            return gauss_hermite_weighted(int(self.nodes), self.half_width)
        return gauss_legendre(int(self.nodes), -self.half_width, self.half_width)

    def doubled(self):
        return QuadratureSpec(self.half_width, 2 * int(self.nodes), self.rule)


def default_half_width(params):
    return 2.0 * (2.0 * abs(params.x0) + 10.0 * params.delta)


def required_nodes(half_width, max_momentum, hbar):
    """Smallest node count that resolves exp(i p a/hbar) up to ``max_momentum``."""
    return int(math.ceil(8.0 * half_width * max_momentum / (math.pi * hbar)))


def auto_quadrature(params, max_momentum=0.0, half_width=None):
    H = default_half_width(params) if half_width is None else half_width
    pmax = max(abs(max_momentum), abs(params.p0), 1e-300)
    return QuadratureSpec(H, max(16, required_nodes(H, pmax, params.hbar)))


def check_resolution(quad, max_momentum, hbar):
    need = required_nodes(quad.half_width, max_momentum, hbar)
    if quad.nodes < need:
        raise QuadratureResolutionError(
            f"{quad.nodes} nodes on [-{quad.half_width:g}, {quad.half_width:g}] cannot resolve "
            f"momentum {max_momentum:g}; need >= {need}")


def correlation(x1, a, x2, b, state):
    """Psi*(x1 + a/2, x2 + b/2) Psi(x1 - a/2, x2 - b/2)."""
    return (np.conj(bipartite_state(x1 + 0.5 * a, x2 + 0.5 * b, state))
            * bipartite_state(x1 - 0.5 * a, x2 - 0.5 * b, state))


def _oracle_consts(state):
    p = state.params
    return np.array([p.x0, p.p0, p.delta, p.hbar, state.norm_const, p.A.real, p.A.imag,
                     p.B.real, p.B.imag, _position_norm(p), _momentum_norm(p)])


def _check_truncation(x1, x2, state, quad):
    # Integrand magnitude on the edges a = +-H (all b) and b = +-H (all a).
    t, _ = quad.nodes_and_weights()
    H = quad.half_width
    x1 = np.atleast_1d(np.asarray(x1, dtype=float)).ravel()[:, None]
    x2 = np.atleast_1d(np.asarray(x2, dtype=float)).ravel()[:, None]
    edge = 0.0
    for sign in (1.0, -1.0):
        edge = max(edge, np.max(np.abs(correlation(x1, sign * H, x2, t[None, :], state))))
        edge = max(edge, np.max(np.abs(correlation(x1, t[None, :], x2, sign * H, state))))
    peak = np.max(np.abs(bipartite_state(x1, x2, state)) ** 2)
    if peak > 0 and edge > BOUNDARY_TOLERANCE * max(peak, 1e-300) and edge > 1e-300:
        warnings.warn(f"integrand at |shift| = {H:g} is {edge / peak:.2e} of peak; "
                      "increase half_width", TruncationWarning, stacklevel=3)


@dataclass(frozen=True)
class OracleResult:
    value: np.ndarray
    imag_residual: np.ndarray


def wigner_numeric_2mode(pt, state, quad=None, backend=None, return_residual=False,
                         check_truncation=True):
    """W(x1, p1, x2, p2) from the defining double integral.

    ``pt`` may carry arrays; points are evaluated independently. Raises
    ``QuadratureResolutionError`` if ``quad`` is too coarse for the largest
    momentum requested, and ``ArithmeticError`` if the imaginary residual is
    not negligible.
    """
    state = state if isinstance(state, NormalizedState) else normalize(state)
    p = state.params
    x1, p1, x2, p2 = (np.asarray(v, dtype=float) for v in pt)
    pmax = max(float(np.max(np.abs(p1), initial=0.0)), float(np.max(np.abs(p2), initial=0.0)), abs(p.p0))
    if quad is None:
        quad = auto_quadrature(p, pmax)
    check_resolution(quad, pmax, p.hbar)
    if check_truncation:
        _check_truncation(x1, x2, state, quad)
    t, w = quad.nodes_and_weights()
    re, im = kernels.oracle_points(x1, p1, x2, p2, t, w, _oracle_consts(state), backend=backend)
    scale = np.max(np.abs(re), initial=0.0) + 1.0 / (math.pi * p.hbar) ** 2
    if np.any(np.abs(im) > IMAGINARY_TOLERANCE * scale):
        raise ArithmeticError(f"oracle imaginary residual {np.max(np.abs(im)):.3e}")
    value = re if re.ndim else re.item()
    if return_residual:
        return OracleResult(value, im)
    return value


def wigner_numeric_1mode(wavefunction, x, p, hbar, quad):
    """Single-mode W(x, p) of a callable wavefunction; broadcasts over x and p."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    check_resolution(quad, float(np.max(np.abs(p), initial=0.0)), hbar)
    t, w = quad.nodes_and_weights()
    xb, pb = np.broadcast_arrays(x, p)
    xs = xb.ravel()[:, None]
    ps = pb.ravel()[:, None]
    corr = np.conj(wavefunction(xs + 0.5 * t)) * wavefunction(xs - 0.5 * t)
    vals = (corr * np.exp(1j * ps * t / hbar)) @ w / (2.0 * math.pi * hbar)
    scale = np.max(np.abs(vals.real), initial=0.0) + 1.0 / (math.pi * hbar)
    if np.any(np.abs(vals.imag) > IMAGINARY_TOLERANCE * scale):
        raise ArithmeticError(f"oracle imaginary residual {np.max(np.abs(vals.imag)):.3e}")
    out = vals.real.reshape(xb.shape)
    return out if out.ndim else out.item()


def normalization_integral(evaluator, params, nodes=64):
    """Iterated tensor Gauss-Legendre of W over the 4D box that confines its support.

    ``evaluator(x1, p1, x2, p2)`` must broadcast. Integrates one x1 slab at a
    time so memory stays at nodes^3 values.
    """
    X = abs(params.x0) + 8.0 * params.delta
    P = abs(params.p0) + 8.0 * params.hbar / params.delta
    xs, wx = gauss_legendre(nodes, -X, X)
    ps, wp = gauss_legendre(nodes, -P, P)
    p1 = ps[:, None, None]
    x2 = xs[None, :, None]
    p2 = ps[None, None, :]
    w3 = wp[:, None, None] * wx[None, :, None] * wp[None, None, :]
    total = 0.0
    for x1, w1 in zip(xs, wx):
        total += w1 * float(np.sum(w3 * evaluator(x1, p1, x2, p2)))
    return total


def point_from_array(arr):
    arr = np.asarray(arr, dtype=float)
    return PhasePoint(arr[..., 0], arr[..., 1], arr[..., 2], arr[..., 3])
