import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subplanck import sensitivity as se
from subplanck.errors import NoBracketError, QuadratureResolutionError
from subplanck.states import Displacement, StateParams, normalize


def test_equal_shift_closed_form(state):
    assert se.equal_shift_overlap(state, 0.0) == 1.0
    s = np.linspace(0, 0.6, 7)
    raw = se.equal_shift_overlap(state, s, normalized=False)
    assert np.allclose(raw / raw[0], se.equal_shift_overlap(state, s))


def test_equal_shift_requires_balanced_weights(params):
    with pytest.raises(ValueError):
        se.equal_shift_overlap(normalize(params.with_weights(B=0.3)), 0.1)


def test_equal_shift_direction_follows_x0():
    p = StateParams(x0=-5.0)
    d = se.equal_shift(0.2, p)
    assert d.alpha == d.beta == -0.2j


def test_numeric_overlap_is_closed_form_times_gaussian(state):
    # The displaced quadrature carries the coherent-state decay on top of the fringe shape.
    for s in (0.03, 0.1, 0.17, 0.25):
        d = se.equal_shift(s, state.params)
        expected = float(se.equal_shift_overlap(state, s)) * se.coherent_decay(d, state.params)
        assert se.overlap_displaced_numeric(state, d) == pytest.approx(expected, abs=1e-9)


def test_compass_numeric_is_shape_times_gaussian(params):
    for s in (0.05, 0.2, 0.31):
        expected = float(se.compass_overlap(s, params.x0, normalized=True))
        expected *= math.exp(-2 * s**2)
        assert se.compass_overlap_numeric(params, s) == pytest.approx(expected, abs=1e-5)


def test_compass_printed_value_at_zero():
    assert se.compass_overlap(0.0, 5.0) == 2.0
    assert se.compass_overlap(0.0, 5.0, normalized=True) == 1.0


def test_printed_general_overlap_shape(state):
    s = np.linspace(0.0, 0.3, 7)
    vals = np.array([se.printed_general_overlap(state, se.equal_shift(v, state.params)) for v in s])
    assert np.allclose(vals / vals[0], se.equal_shift_overlap(state, s), atol=1e-12)


def test_coherent_decay():
    p = StateParams()
    assert se.coherent_decay(Displacement(0.1, 0.2j), p) == pytest.approx(math.exp(-0.02 - 0.08))


def test_resolution_check(state):
    with pytest.raises(QuadratureResolutionError):
        se.overlap_displaced_numeric(state, se.equal_shift(0.1, state.params), nodes=50)


@settings(max_examples=15, deadline=None)
@given(st.complex_numbers(max_magnitude=0.8, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=0.8, allow_nan=False, allow_infinity=False))
def test_overlap_is_probability(a, b):
    s = normalize(StateParams(x0=3.0, p0=2.0, A=0.8, B=0.6j))
    v = se.overlap_displaced_numeric(s, Displacement(a, b))
    assert 0.0 <= v <= 1.0


def test_zero_shift_overlap_is_one(state):
    assert se.overlap_displaced_numeric(state, Displacement()) == pytest.approx(1.0, abs=1e-12)


def test_minimum_by_parabola_without_evaluator():
    s = np.linspace(0, 1, 201)
    curve = se.OverlapCurve(s, np.cos(3.0 * s) ** 2 + 0.1, "test")
    assert se.find_minimum_shift(curve) == pytest.approx(math.pi / 6, abs=1e-5)


def test_minimum_by_golden_section(state):
    curve = se.overlap_curve("entangled", state)
    assert curve.minima[0] == pytest.approx(math.pi / 20, abs=1e-3)
    assert se.find_minimum_shift(curve) == pytest.approx(math.pi / 20, abs=1e-9)
    golden = se.find_minimum_shift(curve, evaluator=curve.evaluator)
    assert golden == pytest.approx(math.pi / 20, abs=1e-7)


def test_no_bracket():
    s = np.linspace(0, 1, 11)
    with pytest.raises(NoBracketError):
        se.find_minimum_shift(se.OverlapCurve(s, np.exp(-s), "monotone"))


def test_unknown_model(state):
    with pytest.raises(ValueError):
        se.model_evaluator("bogus", state)


def test_default_sweep(params):
    s = se.default_shifts(params)
    assert len(s) == 801 and s[-1] == pytest.approx(math.pi / 5)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 0.6))
def test_overlap_even_in_shift(s):
    st_ = normalize(StateParams())
    assert se.equal_shift_overlap(st_, -s) == pytest.approx(float(se.equal_shift_overlap(st_, s)), abs=1e-15)
    assert se.overlap_displaced_numeric(st_, se.equal_shift(-s, st_.params)) == pytest.approx(
        se.overlap_displaced_numeric(st_, se.equal_shift(s, st_.params)), abs=1e-12)


def test_numeric_overlap_vanishes_at_first_zero(state):
    assert se.overlap_displaced_numeric(state, se.equal_shift(math.pi / 20, state.params)) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.0, 1.0), st.integers(-3, 3))
def test_closed_form_period(s, k):
    st_ = normalize(StateParams())
    period = math.pi / (2 * st_.params.x0)
    assert float(se.equal_shift_overlap(st_, s + k * period)) == pytest.approx(
        float(se.equal_shift_overlap(st_, s)), abs=1e-12)
