"""Overlap of a state with its displaced copy, and the shift of first zero overlap.

Shifts are complex numbers mapped to phase space by
``states.phase_space_shift``. The scalar sweeps below use purely imaginary
shifts ``i s`` (a momentum kick of ``2 hbar s / delta``): that is the
direction along which the position-cat fringes of separation ``2 x0`` are
probed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._quad import gauss_legendre
from .errors import NoBracketError, QuadratureResolutionError
from .states import (Displacement, NormalizedState, bipartite_state, compass_state, displace,
                     displaced_bipartite, normalize, phase_space_shift)
from .wigner_oracle import required_nodes

SAMPLES_PER_PERIOD = 400
CLAMP_TOLERANCE = 1e-9
GOLDEN_TOLERANCE = 1e-12
MODELS = ("entangled", "compass", "numeric", "compass-numeric")


def _state(state):
    return state if isinstance(state, NormalizedState) else normalize(state)


def _clamped(value, label):
    if value < -CLAMP_TOLERANCE or value > 1.0 + CLAMP_TOLERANCE:
        warnings.warn(f"{label} overlap {value:.3e} outside [0, 1]; clamped", RuntimeWarning,
                      stacklevel=3)
    return min(max(value, 0.0), 1.0)


def overlap_nodes(half_width, pd, params, nodes=None):
    """Gauss-Legendre count resolving a kick of momentum pd on top of the cat fringes."""
    need = max(64, required_nodes(half_width, abs(pd) + 2.0 * abs(params.p0), params.hbar))
    if nodes is None:
        return need
    if nodes < need:
        raise QuadratureResolutionError(f"{nodes} nodes on [-{half_width:g}, {half_width:g}] "
                                        f"cannot resolve the displaced integrand; need >= {need}")
    return int(nodes)


def overlap_displaced_numeric(state, d, nodes=None):
    """|<Psi|D1(alpha) D2(beta)|Psi>|^2 by tensor Gauss-Legendre over (x1, x2)."""
    state = _state(state)
    p = state.params
    xa, pa = phase_space_shift(d.alpha, p)
    xb, pb = phase_space_shift(d.beta, p)
    L = p.support + max(abs(xa), abs(xb))
    n = overlap_nodes(L, max(abs(pa), abs(pb)), p, nodes)
    xs, w = gauss_legendre(n, -L, L)
    X1, X2 = xs[:, None], xs[None, :]
    amp = np.sum(w[:, None] * w[None, :] * np.conj(bipartite_state(X1, X2, state))
                 * displaced_bipartite(state, d)(X1, X2))
    return _clamped(float(abs(amp) ** 2), "displaced")


def equal_shift(s, params):
    """The displacement alpha = beta = i s sign(x0)."""
    return Displacement.equal(1j * s * math.copysign(1.0, params.x0))


def equal_shift_overlap(state, s, normalized=True):
    """Closed-form overlap under the equal shift alpha = beta = i s sign(x0).

    Valid for balanced weights |A| = |B|. The raw form is
    8 |N|^4 (1 + cos 4 x0 s); normalizing by its value at s = 0 gives
    (1 + cos 4 x0 s) / 2.
    """
    state = _state(state)
    p = state.params
    if not math.isclose(abs(p.A), abs(p.B), rel_tol=1e-12):
        raise ValueError("equal-shift closed form needs |A| = |B|")
    s = np.asarray(s, dtype=float)
    shape = 1.0 + np.cos(4.0 * p.x0 * s)
    if normalized:
        return 0.5 * shape
    return 8.0 * abs(state.norm_const) ** 4 * shape


def compass_overlap(s1, x0, normalized=False):
    """Single-particle compass overlap (3 + 4 cos 2 x0 s + cos 4 x0 s) / 4.

    Its value at s = 0 is 2, so ``normalized=True`` divides by 2.
    """
    s1 = np.asarray(s1, dtype=float)
    val = 0.25 * (3.0 + 4.0 * np.cos(2.0 * x0 * s1) + np.cos(4.0 * x0 * s1))
    return 0.5 * val if normalized else val


def compass_overlap_numeric(params, s1, nodes=None):
    """|<chi|D(i s1)|chi>|^2 for chi = (psi + phi)/sqrt(2 + 2g), by Gauss-Legendre."""
    _, pd = phase_space_shift(1j * s1, params)
    L = params.support
    n = overlap_nodes(L, pd, params, nodes)
    xs, w = gauss_legendre(n, -L, L)
    chi = lambda x: compass_state(x, params)
    amp = np.sum(w * np.conj(chi(xs)) * displace(chi, 1j * s1, params)(xs))
    return _clamped(float(abs(amp) ** 2), "compass")


def printed_general_overlap(state, d):
    """The general two-shift overlap exactly as typeset, kept for conformance checks.

    16|N|^4 [(|A|^4 + |B|^4) c^2 h^2 + 2|A||B| c h c h] with c = cos(x0 (beta + beta*))
    and h = cosh(x0 (alpha* - alpha)). Both quartic terms carry the same
    shift dependence and the cross weight is |A||B|, so this is not the
    quadrature overlap in general.
    """
    state = _state(state)
    p = state.params
    a, b = complex(d.alpha), complex(d.beta)
    c = math.cos(p.x0 * 2.0 * b.real)
    h = np.cosh(p.x0 * (a.conjugate() - a)).real
    A, B = abs(p.A), abs(p.B)
    return float(16.0 * abs(state.norm_const) ** 4
                 * ((A**4 + B**4) * c**2 * h**2 + 2.0 * A * B * c * h * c * h))


def coherent_decay(d, params):
    """Gaussian envelope exp(-x_d^2/2delta^2 - p_d^2 delta^2/2hbar^2) per particle, multiplied."""
    total = 0.0
    for z in (d.alpha, d.beta):
        xd, pd = phase_space_shift(z, params)
        total += xd**2 / (2.0 * params.delta**2) + pd**2 * params.delta**2 / (2.0 * params.hbar**2)
    return math.exp(-total)


@dataclass
class OverlapCurve:
    shifts: np.ndarray
    overlaps: np.ndarray
    model: str
    minima: list = field(default_factory=list)
    evaluator: object = field(default=None, repr=False, compare=False)


def model_evaluator(model, state):
    """Scalar s -> normalized overlap for a named model."""
    state = _state(state)
    p = state.params
    if model == "entangled":
        return lambda s: float(equal_shift_overlap(state, s))
    if model == "compass":
        return lambda s: float(compass_overlap(s, p.x0, normalized=True))
    if model == "numeric":
        return lambda s: overlap_displaced_numeric(state, equal_shift(s, p))
    if model == "compass-numeric":
        return lambda s: compass_overlap_numeric(p, s)
    raise ValueError(f"unknown overlap model {model!r}; choose from {', '.join(MODELS)}")


def default_shifts(params, periods=2):
    """Uniform sweep over ``periods`` periods of cos(4 x0 s) at 400 samples per period."""
    if params.x0 == 0:
        raise ValueError("x0 = 0 has no interference period")
    period = math.pi / (2.0 * abs(params.x0))
    return np.linspace(0.0, periods * period, periods * SAMPLES_PER_PERIOD + 1)


def local_minima(shifts, values):
    y = np.asarray(values)
    idx = np.nonzero((y[1:-1] <= y[:-2]) & (y[1:-1] < y[2:]))[0] + 1
    return [float(shifts[i]) for i in idx]


def overlap_curve(model, state, shifts=None):
    state = _state(state)
    shifts = default_shifts(state.params) if shifts is None else np.asarray(shifts, dtype=float)
    f = model_evaluator(model, state)
    values = np.array([f(s) for s in shifts])
    return OverlapCurve(shifts, values, model, local_minima(shifts, values), f)


def _golden(f, lo, hi, tol=GOLDEN_TOLERANCE):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - inv * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def find_minimum_shift(curve, evaluator=None):
    """First interior local minimum of a sampled curve.

    Refined by the vertex of the parabola through the sampled minimum and its
    two neighbours. Passing ``evaluator`` (s -> overlap) switches to
    golden-section search on the bracketing interval instead.
    """
    s, y = np.asarray(curve.shifts), np.asarray(curve.overlaps)
    if len(s) < 3:
        raise NoBracketError("need at least three samples")
    inner = np.nonzero((y[1:-1] <= y[:-2]) & (y[1:-1] < y[2:]))[0]
    if len(inner) == 0:
        raise NoBracketError(f"no interior minimum in [{s[0]:g}, {s[-1]:g}]")
    k = int(inner[0]) + 1
    if evaluator is not None:
        return _golden(evaluator, s[k - 1], s[k + 1])
    y0, y1, y2 = y[k - 1], y[k], y[k + 1]
    h = s[k + 1] - s[k]
    denom = y0 - 2.0 * y1 + y2
    return float(s[k] + (0.5 * h * (y0 - y2) / denom if denom > 0 else 0.0))
