import numpy as np
import pytest

from subplanck import kernels
from subplanck.states import StateParams, normalize
from subplanck.wigner_analytic import _kernel_consts
from subplanck.wigner_oracle import _oracle_consts, auto_quadrature

compiled = pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled kernels not built")


@pytest.fixture(scope="module")
def setup():
    state = normalize(StateParams(A=0.6 + 0.3j, B=-0.2 + 0.7j))
    rng = np.random.default_rng(3)
    pts = rng.uniform(-7, 7, size=(4, 5000))
    quad = auto_quadrature(state.params, 7.0)
    t, w = quad.nodes_and_weights()
    return state, pts, t, w


@compiled
def test_wigner_backends_agree(setup):
    state, pts, _, _ = setup
    c = _kernel_consts(state)
    a = kernels.wigner_points(*pts, c, backend="compiled")
    b = kernels.wigner_points(*pts, c, backend="python")
    assert np.max(np.abs(a - b)) < 1e-15


@compiled
def test_oracle_backends_agree(setup):
    state, pts, t, w = setup
    c = _oracle_consts(state)
    a = kernels.oracle_points(*pts[:, :8], t, w, c, backend="compiled")
    b = kernels.oracle_points(*pts[:, :8], t, w, c, backend="python")
    assert np.max(np.abs(a[0] - b[0])) < 1e-14
    assert np.max(np.abs(a[1] - b[1])) < 1e-14


@compiled
def test_thread_count_independent(setup, monkeypatch):
    state, pts, t, w = setup
    c = _kernel_consts(state)
    monkeypatch.setenv("SUBPLANCK_THREADS", "1")
    one = kernels.wigner_points(*pts, c)
    monkeypatch.setenv("SUBPLANCK_THREADS", "4")
    monkeypatch.setattr(kernels.os, "cpu_count", lambda: 4)
    assert kernels.thread_count() == 4
    four = kernels.wigner_points(*pts, c)
    assert np.array_equal(one, four)


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("SUBPLANCK_THREADS", "nope")
    with pytest.raises(ValueError):
        kernels.thread_count()
    monkeypatch.setenv("SUBPLANCK_THREADS", "0")
    assert kernels.thread_count() == 1


def test_broadcast_shapes(setup):
    state, _, _, _ = setup
    x = np.linspace(-1, 1, 3)[:, None]
    out = kernels.wigner_points(x, 0.0, x.T, 0.5, _kernel_consts(state))
    assert out.shape == (3, 3)


def test_unknown_backend(setup):
    state, pts, _, _ = setup
    with pytest.raises(ValueError):
        kernels.wigner_points(*pts[:, :2], _kernel_consts(state), backend="gpu")


def test_empty_input(setup):
    state, _, t, w = setup
    for b in ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else []):
        assert kernels.wigner_points([], [], [], [], _kernel_consts(state), backend=b).size == 0
        re, im = kernels.oracle_points([], [], [], [], t, w, _oracle_consts(state), backend=b)
        assert re.size == 0 and im.size == 0
