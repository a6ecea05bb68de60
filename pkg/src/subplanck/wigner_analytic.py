"""Closed-form Wigner function of the entangled compass state.

The function is assembled as::

    W = envelope * (wd1 + wd2 + damping * Re(wc1 + wc2))

with ``envelope = K exp(-(x1^2 + x2^2)/delta^2 - (p1^2 + p2^2) delta^2/hbar^2)``
and ``damping = exp(-x0^2/2 delta^2 - p0^2 delta^2/2 hbar^2)``.

``wd1`` and ``wd2`` are the |A|^2 and |B|^2 diagonal blocks. Their last
(purely oscillatory) term carries coefficient 1, not 2: with 2 the value at
the origin would exceed the 1/(pi hbar)^2 bound. ``wc1`` is the A*B coherence
block and ``wc2`` the A B* block, so ``wc1 + wc2 = 2 Re(A* B bracket)``. The
literal printed variants are kept in ``printed_decomposition`` for the
conformance report only.

``wigner`` evaluates the same function through a numerically stable
Gaussian-lobe form (no cosh growth) on the compiled kernel. Use it for grids;
the decomposition is valid while |coordinates| stay below roughly 700 delta^2/x0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels_py, kernels
from ._quad import gauss_legendre
from .errors import WignerAssemblyError
from .states import NormalizedState, normalize

COORDS = ("x1", "p1", "x2", "p2")


@dataclass(frozen=True)
class PhasePoint:
    """A point (x1, p1, x2, p2); fields may also be broadcastable arrays."""

    x1: float = 0.0
    p1: float = 0.0
    x2: float = 0.0
    p2: float = 0.0

    def __iter__(self):
        return iter((self.x1, self.p1, self.x2, self.p2))

    def swapped(self):
        """Exchange the two particles."""
        return PhasePoint(self.x2, self.p2, self.x1, self.p1)


@dataclass(frozen=True)
class WignerDecomposition:
    wd1: float
    wd2: float
    wc1: complex
    wc2: complex
    envelope: float
    damping: float
    total: float


def _as_state(state):
    return state if isinstance(state, NormalizedState) else normalize(state)


def prefactor(state):
    """K = |N|^2 / (2 pi^2 hbar^2 (1 + ex)(1 + ep)), fixed by unit normalization."""
    p = state.params
    return state.norm_const**2 / (
        2.0 * math.pi**2 * p.hbar**2 * (1.0 + p.position_overlap) * (1.0 + p.momentum_overlap))


def overall_constant(state):
    """The otherwise undetermined constant c of the printed prefactor 2 delta^2 c |N|^2/(pi hbar^2)."""
    p = state.params
    return 1.0 / (4.0 * math.pi * p.delta**2 * (1.0 + p.position_overlap) * (1.0 + p.momentum_overlap))


def envelope(pt, state):
    p = state.params
    x1, p1, x2, p2 = (np.asarray(v, dtype=float) for v in pt)
    return prefactor(state) * np.exp(-(x1**2 + x2**2) / p.delta**2
                                     - (p1**2 + p2**2) * p.delta**2 / p.hbar**2)


def damping(params):
    return math.exp(-params.x0**2 / (2 * params.delta**2)
                    - params.p0**2 * params.delta**2 / (2 * params.hbar**2))


def _diagonal(xa, pa, xb, pb, params, weight, last=1.0):
    # Block with the position cat on (xa, pa) and the momentum cat on (xb, pb).
    x0, p0, d, h = params.x0, params.p0, params.delta, params.hbar
    ex, ep = params.position_overlap, params.momentum_overlap
    ch_x = np.cosh(2.0 * x0 * xa / d**2)
    ch_p = np.cosh(2.0 * p0 * pb * d**2 / h**2)
    cos_x = np.cos(2.0 * p0 * xb / h)
    cos_p = np.cos(2.0 * x0 * pa / h)
    return 2.0 * weight * (ex * ep * ch_p * ch_x + ex * ch_x * cos_x
                           + ep * cos_p * ch_p + last * cos_x * cos_p)


def wigner_component_d1(pt, state):
    """|A|^2 diagonal block: position cat on particle 1, momentum cat on particle 2."""
    state = _as_state(state)
    x1, p1, x2, p2 = (np.asarray(v, dtype=float) for v in pt)
    return _diagonal(x1, p1, x2, p2, state.params, abs(state.params.A) ** 2)


def wigner_component_d2(pt, state):
    """|B|^2 diagonal block: roles of the particles exchanged."""
    state = _as_state(state)
    x1, p1, x2, p2 = (np.asarray(v, dtype=float) for v in pt)
    return _diagonal(x2, p2, x1, p1, state.params, abs(state.params.B) ** 2)


def coherence_bracket(pt, params, sign=1):
    """The six-term cosh/cos bracket of the off-diagonal blocks.

    ``sign=+1`` gives the A*B bracket and ``sign=-1`` the A B* bracket (the
    complex conjugate for real coordinates). Every term depends on the
    coordinates only through x1 +- x2 and p1 +- p2.
    """
    x1, p1, x2, p2 = (np.asarray(v, dtype=float) for v in pt)
    return _bracket_epr(x1 + x2, x1 - x2, p1 + p2, p1 - p2, params, sign)


def _bracket_epr(xs, xd, ps, pd, params, sign):
    x0, p0, d, h = params.x0, params.p0, params.delta, params.hbar
    a_m = x0 / d**2 - 1j * p0 / h
    a_p = x0 / d**2 + 1j * p0 / h
    b_m = 1j * x0 / h - p0 * d**2 / h**2
    b_p = 1j * x0 / h + p0 * d**2 / h**2
    s = float(sign)
    phase = np.exp(1j * p0 * x0 / h)
    return (phase * (np.cosh(a_m * xs + s * b_m * pd) + np.cosh(a_m * xd + s * b_m * ps))
            + np.conj(phase) * (np.cosh(a_p * xs + s * b_p * pd) + np.cosh(a_p * xd + s * b_p * ps))
            + 2.0 * (np.cos(p0 * (xd / h - s * 1j * ps * d**2 / h**2))
                     * np.cosh(x0 * (xs / d**2 + s * 1j * pd / h))
                     + np.cos(p0 * (xs / h - s * 1j * pd * d**2 / h**2))
                     * np.cosh(x0 * (xd / d**2 + s * 1j * ps / h))))


def wigner_component_c1(pt, state):
    state = _as_state(state)
    p = state.params
    return p.A.conjugate() * p.B * coherence_bracket(pt, p, +1)


def wigner_component_c2(pt, state):
    state = _as_state(state)
    p = state.params
    return p.A * p.B.conjugate() * coherence_bracket(pt, p, -1)


def wigner_total(pt, state, tol=1e-9):
    """Assemble the decomposition at one point (or a broadcast array of points)."""
    state = _as_state(state)
    wd1 = wigner_component_d1(pt, state)
    wd2 = wigner_component_d2(pt, state)
    wc1 = wigner_component_c1(pt, state)
    wc2 = wigner_component_c2(pt, state)
    wc = wc1 + wc2
    residual = np.abs(np.imag(wc))
    if np.any(residual > tol * (np.abs(wc1) + np.abs(wc2) + 1.0)):
        raise WignerAssemblyError(
            f"imaginary residual {np.max(residual):.3e} in off-diagonal blocks")
    env = envelope(pt, state)
    damp = damping(state.params)
    total = env * (wd1 + wd2 + damp * np.real(wc))
    scalar = np.ndim(total) == 0
    cast = (lambda v: v.item()) if scalar else (lambda v: v)
    return WignerDecomposition(cast(np.asarray(wd1)), cast(np.asarray(wd2)), cast(np.asarray(wc1)),
                               cast(np.asarray(wc2)), cast(np.asarray(env)), damp,
                               cast(np.asarray(total)))


def printed_decomposition(pt, state):
    """Components exactly as typeset, for the conformance report.

    The printed diagonal blocks double the cos*cos term, and the printed
    off-diagonal weights are the real numbers (R - I) and (R + I) with
    R = A1 B1 + A2 B2, I = A1 B2 - A2 B1, instead of A* B = R + iI and its
    conjugate. The returned total is complex when I != 0.
    """
    state = _as_state(state)
    p = state.params
    x1, p1, x2, p2 = (np.asarray(v, dtype=float) for v in pt)
    wd1 = _diagonal(x1, p1, x2, p2, p, abs(p.A) ** 2, last=2.0)
    wd2 = _diagonal(x2, p2, x1, p1, p, abs(p.B) ** 2, last=2.0)
    ab = p.A.conjugate() * p.B
    wc1 = (ab.real - ab.imag) * coherence_bracket(pt, p, +1)
    wc2 = (ab.real + ab.imag) * coherence_bracket(pt, p, -1)
    env = envelope(pt, state)
    damp = damping(p)
    return WignerDecomposition(wd1, wd2, wc1, wc2, env, damp, env * (wd1 + wd2 + damp * (wc1 + wc2)))


def _kernel_consts(state):
    p = state.params
    ab = p.A.conjugate() * p.B
    return np.array([p.x0, p.p0, p.delta, p.hbar, state.norm_const**2, abs(p.A) ** 2,
                     abs(p.B) ** 2, ab.real, ab.imag, p.position_overlap, p.momentum_overlap])


def wigner(x1, p1, x2, p2, state, backend=None):
    """Vectorized W(x1, p1, x2, p2) via the stable Gaussian-lobe form."""
    state = _as_state(state)
    return kernels.wigner_points(x1, p1, x2, p2, _kernel_consts(state), backend=backend)


def single_mode_blocks(x, p, params):
    """Per-particle Wigner functions W_psi, W_phi and the cross-Wigner W_{psi phi}.

    W = |N|^2 [|A|^2 W_psi(1) W_phi(2) + |B|^2 W_phi(1) W_psi(2)
               + 2 Re(A* B W_{psi phi}(1) conj W_{psi phi}(2))].
    """
    ex, ep = params.position_overlap, params.momentum_overlap
    h = params.hbar
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    w_psi = _kernels_py._w_psi(x, p, params.x0, params.delta, h, 1.0 / (2 * math.pi * h * (1 + ex)))
    w_phi = _kernels_py._w_phi(x, p, params.p0, params.delta, h, 1.0 / (2 * math.pi * h * (1 + ep)))
    cross = _kernels_py._cross(x, p, params.x0, params.p0, params.delta, h,
                               1.0 / (2 * math.pi * h * math.sqrt((1 + ex) * (1 + ep))))
    return w_psi, w_phi, cross


def integration_box(params):
    """Half-widths (X, P) of the box [-X, X] x [-P, P] per particle holding W's support."""
    return (abs(params.x0) + 8.0 * params.delta,
            abs(params.p0) + 8.0 * params.hbar / params.delta)


def normalization(state, nodes=160):
    """4D integral of W by the tensor Gauss-Legendre rule on ``integration_box``.

    W is a sum of three particle-1 x particle-2 products, so the n^4-point
    tensor sum equals the sum of products of n^2-point sums; this evaluates
    it that way.
    """
    state = _as_state(state)
    p = state.params
    X, P = integration_box(p)
    xs, wx = gauss_legendre(nodes, -X, X)
    ps, wp = gauss_legendre(nodes, -P, P)
    w2 = wx[:, None] * wp[None, :]
    w_psi, w_phi, cross = single_mode_blocks(xs[:, None], ps[None, :], p)
    i_psi, i_phi, i_cross = np.sum(w2 * w_psi), np.sum(w2 * w_phi), np.sum(w2 * cross)
    ab = p.A.conjugate() * p.B
    return state.norm_const**2 * (abs(p.A) ** 2 * i_psi * i_phi + abs(p.B) ** 2 * i_phi * i_psi
                                  + 2.0 * (ab * i_cross * np.conj(i_cross)).real)


def dominant_terms(pt, state):
    """The two purely oscillatory products, 4|A|^2 cos cos and 4|B|^2 cos cos."""
    state = _as_state(state)
    p = state.params
    x1, p1, x2, p2 = (np.asarray(v, dtype=float) for v in pt)
    ta = 4.0 * abs(p.A) ** 2 * np.cos(2 * p.p0 * x2 / p.hbar) * np.cos(2 * p.x0 * p1 / p.hbar)
    tb = 4.0 * abs(p.B) ** 2 * np.cos(2 * p.p0 * x1 / p.hbar) * np.cos(2 * p.x0 * p2 / p.hbar)
    return ta, tb


def dominant_oscillatory(pt, state):
    ta, tb = dominant_terms(pt, state)
    return ta + tb


# Near the origin W ~ envelope * DOMINANT_SCALE * dominant_oscillatory: the
# four-fold printed amplitude is twice the true cos*cos coefficient 2|A|^2.
DOMINANT_SCALE = 0.5


class Plane(enum.Enum):
    X1P1 = ("x1", "p1")
    X2P2 = ("x2", "p2")
    X1P2 = ("x1", "p2")
    X2P1 = ("x2", "p1")
    X1X2 = ("x1", "x2")
    P1P2 = ("p1", "p2")

    @property
    def axes(self):
        return self.value

    @property
    def fixed_names(self):
        return tuple(c for c in COORDS if c not in self.value)

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ValueError(f"unknown plane {name!r}; expected one of "
                             f"{', '.join(m.name for m in cls)}") from None


@dataclass(frozen=True)
class SectionSpec:
    """A 2D cut: ``fixed`` holds the two remaining coordinates in x1, p1, x2, p2 order."""

    plane: Plane = Plane.X1P1
    fixed: tuple = (0.0, 0.0)
    range1: tuple = (-8.0, 8.0)
    range2: tuple = (-8.0, 8.0)
    n1: int = 801
    n2: int = 801

    def __post_init__(self):
        object.__setattr__(self, "plane", Plane.parse(self.plane))
        object.__setattr__(self, "fixed", tuple(float(v) for v in self.fixed))
        object.__setattr__(self, "range1", tuple(float(v) for v in self.range1))
        object.__setattr__(self, "range2", tuple(float(v) for v in self.range2))
        if len(self.fixed) != 2:
            raise ValueError("fixed must hold exactly two coordinate values")
        for r in (self.range1, self.range2):
            if len(r) != 2 or not all(math.isfinite(v) for v in r) or not r[0] < r[1]:
                raise ValueError(f"range must be an increasing finite pair, got {r}")
        for n in (self.n1, self.n2):
            if int(n) != n or n < 2:
                raise ValueError(f"grid resolution must be an integer >= 2, got {n}")

    @property
    def axis1(self):
        return np.linspace(*self.range1, int(self.n1))

    @property
    def axis2(self):
        return np.linspace(*self.range2, int(self.n2))

    def coordinates(self):
        """Broadcast (x1, p1, x2, p2) arrays of shape (n1, n2), axis 1 along rows."""
        a1, a2 = np.meshgrid(self.axis1, self.axis2, indexing="ij")
        values = dict(zip(self.plane.fixed_names, self.fixed))
        values[self.plane.axes[0]] = a1
        values[self.plane.axes[1]] = a2
        return tuple(np.broadcast_to(values[c], a1.shape) for c in COORDS)


@dataclass(frozen=True)
class Grid2D:
    spec: SectionSpec
    values: np.ndarray
    axis1: np.ndarray
    axis2: np.ndarray
    params: object = None


def section(spec, state, evaluator=None):
    """Sample W on a section. ``evaluator(x1, p1, x2, p2, state)`` defaults to ``wigner``."""
    state = _as_state(state)
    evaluator = evaluator or wigner
    values = np.asarray(evaluator(*spec.coordinates(), state), dtype=float)
    if not np.all(np.isfinite(values)):
        raise WignerAssemblyError("non-finite Wigner values on section grid")
    return Grid2D(spec, values, spec.axis1, spec.axis2, state.params)


def dominant_section(spec, state, terms="both"):
    """Section of the oscillatory model alone; ``terms`` is 'A', 'B' or 'both'."""
    state = _as_state(state)

    def model(x1, p1, x2, p2, st):
        ta, tb = dominant_terms(PhasePoint(x1, p1, x2, p2), st)
        return {"A": ta, "B": tb, "both": ta + tb}[terms]

    return section(spec, state, evaluator=model)
