"""Quantitative reading of Wigner sections: zero lattices, tile areas,
checkerboard detection, position marginals and the variance witness."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._quad import gauss_legendre
from .errors import LatticeNotFoundError
from .states import (NormalizedState, even_momentum_state, even_momentum_state_dx,
                     even_position_state, even_position_state_dx, normalize)
from .wigner_analytic import integration_box, wigner

# Tunable detection constants, surfaced in reports.
WINDOW_PERIODS = 2.0
MIN_SAMPLES_PER_PERIOD = 8
MIN_SIGN_CHANGES = 4
CHECKERBOARD_CONTRAST = 0.5
CHECKERBOARD_MIN_LINES = 1
NOISE_FLOOR = 1e-13
DUAN_SCALING = 1.0


def predicted_period(coord, params):
    """Full oscillation period of the interference fringes along one coordinate.

    Position axes oscillate as cos(2 p0 x/hbar), momentum axes as cos(2 x0 p/hbar).
    """
    rate = params.p0 if coord.startswith("x") else params.x0
    if rate == 0:
        return math.inf
    return math.pi * params.hbar / abs(rate)


def predicted_tile_area(params):
    return (2.0 * math.pi * params.hbar) ** 2 / (4.0 * abs(params.x0 * params.p0))


@dataclass
class TileReport:
    zeros_axis1: list
    zeros_axis2: list
    period1: float
    period2: float
    tile_area: float
    predicted_area: float
    relative_error: float
    line1: float = None
    line2: float = None
    lines_used: tuple = (0, 0)
    settings: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


@dataclass
class CheckerboardResult:
    detected: bool
    contrast: float
    alternating_fraction1: float = 0.0
    alternating_fraction2: float = 0.0

    def __bool__(self):
        return self.detected


def sign_changes(axis, values, floor=0.0):
    """Linearly interpolated sign-change locations of ``values`` sampled on ``axis``.

    Samples with |value| <= floor count as zero and are skipped, so a crossing
    through an exact zero is reported once.
    """
    axis = np.asarray(axis, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = np.abs(values) > floor
    a, v = axis[keep], values[keep]
    if len(v) < 2:
        return np.empty(0)
    flip = np.nonzero(np.signbit(v[:-1]) != np.signbit(v[1:]))[0]
    v0, v1 = v[flip], v[flip + 1]
    return a[flip] - v0 * (a[flip + 1] - a[flip]) / (v1 - v0)


def _window(axis, period):
    center = 0.5 * (axis[0] + axis[-1])
    if not math.isfinite(period):
        return np.ones(len(axis), dtype=bool), center
    return np.abs(axis - center) <= WINDOW_PERIODS * period + 1e-12, center


def _scan(grid, along):
    """Sign-change lists for every window line running along axis ``along`` (0 or 1)."""
    names = grid.spec.plane.axes
    axes = (grid.axis1, grid.axis2)
    periods = [predicted_period(n, grid.params) for n in names]
    mask_along, _ = _window(axes[along], periods[along])
    other = 1 - along
    mask_other, center_other = _window(axes[other], periods[other])
    vals = grid.values if along == 0 else grid.values.T
    window_vals = vals[np.ix_(mask_along, mask_other)]
    floor = NOISE_FLOOR * float(np.max(np.abs(window_vals), initial=0.0))
    a = axes[along][mask_along]
    lines = []
    for j, pos in zip(np.nonzero(mask_other)[0], axes[other][mask_other]):
        lines.append((pos - center_other, pos, sign_changes(a, vals[mask_along, j], floor)))
    return lines


def _check_resolution(grid):
    for name, axis in zip(grid.spec.plane.axes, (grid.axis1, grid.axis2)):
        period = predicted_period(name, grid.params)
        step = axis[1] - axis[0]
        if math.isfinite(period) and period / step < MIN_SAMPLES_PER_PERIOD:
            raise ValueError(f"axis {name}: {period / step:.1f} samples per predicted period "
                             f"{period:.4g}; need >= {MIN_SAMPLES_PER_PERIOD}")


def _axis_lattice(grid, along):
    lines = _scan(grid, along)
    good = [(off, pos, z) for off, pos, z in lines if len(z) >= MIN_SIGN_CHANGES]
    if not good:
        name = grid.spec.plane.axes[along]
        best = max((len(z) for _, _, z in lines), default=0)
        raise LatticeNotFoundError(
            f"no line along {name} has {MIN_SIGN_CHANGES} sign changes in the central "
            f"window (best: {best})", axis=name)
    # Every-other-zero spacing is one full period whether the zeros are evenly
    # spaced (product of cosines) or come in pairs (sum of cosines).
    spans = np.concatenate([z[2:] - z[:-2] for _, _, z in good])
    _, pos, zeros = min(good, key=lambda item: (abs(item[0]), item[0]))
    return float(np.median(spans)), [float(v) for v in zeros], float(pos), len(good)


def find_zero_lattice(grid):
    """Detect the interference lattice of a section and its fundamental tile.

    Rows and columns inside the central window (two predicted periods either
    side of the section centre) are scanned for sign changes. The reported
    zeros come from the line nearest the centre that has at least four of
    them; the period along an axis is the median distance between every
    other zero, pooled over all such lines.
    """
    _check_resolution(grid)
    period1, zeros1, line1, used1 = _axis_lattice(grid, 0)
    period2, zeros2, line2, used2 = _axis_lattice(grid, 1)
    area = period1 * period2
    predicted = predicted_tile_area(grid.params)
    return TileReport(
        zeros_axis1=zeros1, zeros_axis2=zeros2, period1=period1, period2=period2,
        tile_area=area, predicted_area=predicted,
        relative_error=abs(area - predicted) / predicted,
        line1=line1, line2=line2, lines_used=(used1, used2),
        settings={"window_periods": WINDOW_PERIODS, "min_sign_changes": MIN_SIGN_CHANGES,
                  "plane": grid.spec.plane.name},
    )


def checkerboard_detect(grid):
    """Sign alternation along both axes of the central window plus high contrast.

    An axis alternates when at least ``CHECKERBOARD_MIN_LINES`` window lines
    along it carry ``MIN_SIGN_CHANGES`` sign changes. The fractions of such
    lines are reported; a weak second branch alternates only on a thin band of
    lines near the zeros of the strong one.
    """
    try:
        _check_resolution(grid)
    except ValueError:
        return CheckerboardResult(False, 0.0)
    fractions, counts = [], []
    for along in (0, 1):
        lines = _scan(grid, along)
        hits = sum(len(z) >= MIN_SIGN_CHANGES for _, _, z in lines)
        counts.append(hits)
        fractions.append(hits / len(lines) if lines else 0.0)
    names = grid.spec.plane.axes
    m1, _ = _window(grid.axis1, predicted_period(names[0], grid.params))
    m2, _ = _window(grid.axis2, predicted_period(names[1], grid.params))
    window = grid.values[np.ix_(m1, m2)]
    hi, lo = float(np.max(window)), float(np.min(window))
    denom = abs(hi) + abs(lo)
    contrast = (hi - lo) / denom if denom > 0 else 0.0
    detected = min(counts) >= CHECKERBOARD_MIN_LINES and contrast > CHECKERBOARD_CONTRAST
    return CheckerboardResult(bool(detected), contrast, fractions[0], fractions[1])


def marginal_position(state, x1, x2, nodes=160):
    """Integrate the closed-form W over p1 and p2 on a grid of (x1, x2).

    Returns an array of shape (len(x1), len(x2)) that should equal |Psi|^2.
    """
    state = state if isinstance(state, NormalizedState) else normalize(state)
    _, P = integration_box(state.params)
    ps, wp = gauss_legendre(nodes, -P, P)
    w2 = wp[:, None] * wp[None, :]
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    out = np.empty((len(x1), len(x2)))
    p1, p2 = ps[:, None], ps[None, :]
    for i, a in enumerate(x1):
        for j, b in enumerate(x2):
            out[i, j] = np.sum(w2 * wigner(a, p1, b, p2, state))
    return out


@dataclass
class WitnessReport:
    var_xminus: float
    var_pplus: float
    var_xplus: float
    var_pminus: float
    duan_value: float
    threshold: float
    separable_consistent: bool
    scaling: float = DUAN_SCALING
    first_moments: dict = field(default_factory=dict)
    second_moments: dict = field(default_factory=dict)
    weights_normalized: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def moments(state, nodes=400):
    """First and second moments of x1, x2, p1, p2 in the scaled units x/delta, p delta/hbar.

    Position moments integrate |Psi|^2; momentum moments integrate products of
    analytic derivatives (<p_i p_j> = hbar^2 Re <d_i Psi | d_j Psi>).
    """
    state = state if isinstance(state, NormalizedState) else normalize(state)
    p = state.params
    L = p.support
    xs, w = gauss_legendre(nodes, -L, L)
    X1, X2 = xs[:, None], xs[None, :]
    W2 = w[:, None] * w[None, :]
    A, B, N = p.A, p.B, state.norm_const
    s1, f1 = even_position_state(X1, p), even_momentum_state(X1, p)
    s2, f2 = even_position_state(X2, p), even_momentum_state(X2, p)
    ds1, df1 = even_position_state_dx(X1, p), even_momentum_state_dx(X1, p)
    ds2, df2 = even_position_state_dx(X2, p), even_momentum_state_dx(X2, p)
    psi = N * (A * s1 * f2 + B * f1 * s2)
    d1 = N * (A * ds1 * f2 + B * df1 * s2)
    d2 = N * (A * s1 * df2 + B * f1 * ds2)
    rho = np.abs(psi) ** 2
    xscale, pscale = 1.0 / p.delta, p.delta / p.hbar
    hb = p.hbar

    def integral(f):
        return float(np.sum(W2 * f))

    first = {
        "x1": integral(X1 * rho) * xscale,
        "x2": integral(X2 * rho) * xscale,
        "p1": float(np.sum(W2 * np.conj(psi) * (-1j * hb) * d1).real) * pscale,
        "p2": float(np.sum(W2 * np.conj(psi) * (-1j * hb) * d2).real) * pscale,
    }
    second = {
        "x1x1": integral(X1**2 * rho) * xscale**2,
        "x2x2": integral(X2**2 * rho) * xscale**2,
        "x1x2": integral(X1 * X2 * rho) * xscale**2,
        "p1p1": hb**2 * integral(np.abs(d1) ** 2) * pscale**2,
        "p2p2": hb**2 * integral(np.abs(d2) ** 2) * pscale**2,
        "p1p2": hb**2 * float(np.sum(W2 * np.conj(d1) * d2).real) * pscale**2,
        "norm": integral(rho),
    }
    return first, second


def variance_witness(state, nodes=400):
    """Duan-type sum of EPR variances, minimized over the two sign pairings.

    For separable states Var(X1 -+ X2) + Var(P1 +- P2) >= 2 in units where
    [X, P] = i (X = x/delta, P = p delta/hbar). A value below 2 witnesses
    entanglement; a value above it is merely consistent with separability.
    """
    state = state if isinstance(state, NormalizedState) else normalize(state)
    first, second = moments(state, nodes)

    def var(kind, sign):
        mean = first[f"{kind}1"] + sign * first[f"{kind}2"]
        square = (second[f"{kind}1{kind}1"] + second[f"{kind}2{kind}2"]
                  + 2.0 * sign * second[f"{kind}1{kind}2"])
        return square - mean**2

    var_xminus = var("x", -1.0)
    var_xplus = var("x", +1.0)
    var_pplus = var("p", +1.0)
    var_pminus = var("p", -1.0)
    duan = min(var_xminus + var_pplus, var_xplus + var_pminus)
    threshold = DUAN_SCALING**2 + 1.0 / DUAN_SCALING**2
    a, b = state.weights
    return WitnessReport(
        var_xminus=var_xminus, var_pplus=var_pplus, var_xplus=var_xplus, var_pminus=var_pminus,
        duan_value=duan, threshold=threshold, separable_consistent=bool(duan >= threshold),
        first_moments=first, second_moments=second,
        weights_normalized={"A_re": a.real, "A_im": a.imag, "B_re": b.real, "B_im": b.imag},
    )
