import math
import warnings

import numpy as np
import pytest

from subplanck import wigner_analytic as wa, wigner_oracle as wo
from subplanck._quad import gauss_legendre
from subplanck.errors import QuadratureResolutionError, TruncationWarning
from subplanck.states import (StateParams, bipartite_state, even_momentum_state,
                              even_position_state, normalize)


def test_quadrature_spec_validation():
    with pytest.raises(QuadratureResolutionError):
        wo.QuadratureSpec(10.0, 8)
    with pytest.raises(ValueError):
        wo.QuadratureSpec(-1.0, 64)
    q = wo.QuadratureSpec(10.0, 64)
    assert q.doubled().nodes == 128 and q.doubled().half_width == 10.0


def test_required_nodes_formula():
    assert wo.required_nodes(40.0, 7.0, 1.0) == math.ceil(8 * 40 * 7 / math.pi)


def test_too_few_nodes_raises(state):
    with pytest.raises(QuadratureResolutionError):
        wo.wigner_numeric_2mode(wa.PhasePoint(0, 6, 0, 0), state, quad=wo.QuadratureSpec(40, 100))


def test_truncation_warning(state):
    with pytest.warns(TruncationWarning):
        wo.wigner_numeric_2mode(wa.PhasePoint(0, 0, 0, 0), state, quad=wo.QuadratureSpec(6.0, 400))


def test_default_window_does_not_warn(state):
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationWarning)
        wo.wigner_numeric_2mode(wa.PhasePoint(5, 0, 0, 5), state)


def test_single_mode_oracle_matches_closed_blocks(params):
    x = np.linspace(-7, 7, 9)[:, None]
    p = np.linspace(-7, 7, 9)[None, :]
    quad = wo.auto_quadrature(params, 7.0)
    w_psi, w_phi, _ = wa.single_mode_blocks(x, p, params)
    num_psi = wo.wigner_numeric_1mode(lambda u: even_position_state(u, params), x, p, 1.0, quad)
    num_phi = wo.wigner_numeric_1mode(lambda u: even_momentum_state(u, params), x, p, 1.0, quad)
    assert np.max(np.abs(num_psi - w_psi)) < 1e-12
    assert np.max(np.abs(num_phi - w_phi)) < 1e-12


def test_two_mode_oracle_matches_closed_form(state):
    rng = np.random.default_rng(11)
    pts = wa.PhasePoint(*rng.uniform(-6, 6, size=(4, 30)))
    res = wo.wigner_numeric_2mode(pts, state, return_residual=True)
    closed = wa.wigner(*pts, state)
    assert np.max(np.abs(res.value - closed)) < 1e-12
    assert np.max(np.abs(res.imag_residual)) < 1e-14


def test_oracle_scalar_point(state):
    v = wo.wigner_numeric_2mode(wa.PhasePoint(0.1, 0.2, -0.3, 0.4), state)
    assert isinstance(v, float)
    assert v == pytest.approx(float(wa.wigner(0.1, 0.2, -0.3, 0.4, state)), abs=1e-13)


@pytest.mark.parametrize("p", [StateParams(x0=2.0, p0=3.0, delta=0.7, hbar=1.3, A=1, B=0.5j),
                               StateParams(x0=-3.0, p0=1.5, delta=1.4, hbar=0.8, A=0.3, B=-1)])
def test_oracle_other_parameters(p):
    s = normalize(p)
    rng = np.random.default_rng(12)
    pts = wa.PhasePoint(*rng.uniform(-4, 4, size=(4, 10)))
    assert np.max(np.abs(wo.wigner_numeric_2mode(pts, s) - wa.wigner(*pts, s))) < 1e-11


def test_generic_normalization_integral(state):
    # The brute-force tensor sum and the factorized one use the same rule and box.
    brute = wo.normalization_integral(lambda *c: wa.wigner(*c, state), state.params, nodes=32)
    assert brute == pytest.approx(wa.normalization(state, nodes=32), abs=1e-12)


def test_generic_normalization_converges():
    s = normalize(StateParams(x0=1.0, p0=1.0))
    total = wo.normalization_integral(lambda *c: wa.wigner(*c, s), s.params, nodes=40)
    assert total == pytest.approx(1.0, abs=1e-4)


def test_point_from_array():
    pt = wo.point_from_array([[1, 2, 3, 4], [5, 6, 7, 8]])
    assert list(pt.p2) == [4, 8]


def test_ground_state_peaks():
    ground = normalize(StateParams(x0=0.0, p0=0.0, A=1, B=0))
    quad = wo.QuadratureSpec(20.0, 64)
    assert wo.wigner_numeric_2mode(wa.PhasePoint(), ground, quad=quad) == pytest.approx(1 / math.pi**2, rel=1e-13)
    gauss = lambda u: math.pi**-0.25 * np.exp(-u * u / 2)
    assert wo.wigner_numeric_1mode(gauss, 0.0, 0.0, 1.0, quad) == pytest.approx(1 / math.pi, rel=1e-13)


def test_cat_fringe_zero(params):
    quad = wo.auto_quadrature(params, 1.0)
    p = np.linspace(0.0, 0.5, 501)
    w = wo.wigner_numeric_1mode(lambda u: even_position_state(u, params), 0.0, p, 1.0, quad)
    first = p[np.nonzero(np.diff(np.sign(w)))[0][0]]
    assert 0.9 * math.pi / 20 <= first <= 1.1 * math.pi / 20


def test_single_mode_normalization(params):
    quad = wo.auto_quadrature(params, 13.0)
    x, wx = gauss_legendre(120, -13, 13)
    W = wo.wigner_numeric_1mode(lambda u: even_position_state(u, params), x[:, None], x[None, :], 1.0, quad)
    assert wx @ W @ wx == pytest.approx(1.0, abs=1e-6)


def test_correlation_properties(state):
    rng = np.random.default_rng(5)
    x1, a, x2, b = rng.uniform(-6, 6, size=(4, 50))
    c = wo.correlation(x1, a, x2, b, state)
    assert np.allclose(c, np.conj(wo.correlation(x1, -a, x2, -b, state)), rtol=0, atol=1e-15)
    diag = wo.correlation(x1, 0.0, x2, 0.0, state)
    density = np.abs(bipartite_state(x1, x2, state)) ** 2
    assert np.allclose(diag, density, rtol=1e-13, atol=1e-16)


def test_doubling_nodes_converged(state):
    pts = wa.PhasePoint(*np.random.default_rng(6).uniform(-6, 6, size=(4, 12)))
    quad = wo.auto_quadrature(state.params, 6.0)
    once = wo.wigner_numeric_2mode(pts, state, quad=quad)
    twice = wo.wigner_numeric_2mode(pts, state, quad=quad.doubled())
    assert np.max(np.abs(once - twice)) < 1e-8


def test_numeric_parity(state):
    pt = wa.PhasePoint(0.7, -1.1, 2.3, 0.4)
    neg = wa.PhasePoint(-0.7, 1.1, -2.3, -0.4)
    assert wo.wigner_numeric_2mode(pt, state) == pytest.approx(wo.wigner_numeric_2mode(neg, state), abs=1e-14)


def test_hermite_rule():
    s = normalize(StateParams(x0=2.0, p0=2.0))
    quad = wo.QuadratureSpec(wo.default_half_width(s.params), 300, wo.Rule.GAUSS_HERMITE_WEIGHTED)
    pts = wa.PhasePoint(*np.random.default_rng(7).uniform(-3, 3, size=(4, 6)))
    assert np.max(np.abs(wo.wigner_numeric_2mode(pts, s, quad=quad) - wa.wigner(*pts, s))) < 1e-12
    with pytest.raises(QuadratureResolutionError):
        wo.QuadratureSpec(10.0, 400, "gauss-hermite-weighted")
