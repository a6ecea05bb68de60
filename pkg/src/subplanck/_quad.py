from functools import lru_cache

import numpy as np

# Beyond this the Hermite weights underflow before the exp(x^2) factor is restored.
MAX_HERMITE_NODES = 300


@lru_cache(maxsize=64)
def _legendre(n):
    t, w = np.polynomial.legendre.leggauss(n)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


@lru_cache(maxsize=16)
def _hermite_unweighted(n):
    t, w = np.polynomial.hermite.hermgauss(n)
    w = np.exp(np.log(w) + t * t)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def gauss_legendre(n, lo, hi):
    """Nodes and weights of the n-point Gauss-Legendre rule on [lo, hi]."""
    t, w = _legendre(int(n))
    half = 0.5 * (hi - lo)
    return half * t + 0.5 * (hi + lo), half * w


def gauss_hermite_weighted(n, half_width):
    """Gauss-Hermite nodes scaled so the outermost sits at +-half_width, with the
    Gaussian weight divided back out: sum(w f(t)) approximates the plain integral of f.
    """
    n = int(n)
    if n > MAX_HERMITE_NODES:
        raise ValueError(f"Gauss-Hermite rule limited to {MAX_HERMITE_NODES} nodes, got {n}")
    t, w = _hermite_unweighted(n)
    scale = half_width / t[-1]
    return scale * t, scale * w
