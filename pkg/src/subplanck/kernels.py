"""Backend selection for the hot loops.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy implementation in ``_kernels_py`` takes over. Set
``SUBPLANCK_PURE_PYTHON=1`` to force the fallback and ``SUBPLANCK_THREADS``
to cap the worker count of the compiled backend.
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("SUBPLANCK_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def thread_count():
    cap = os.environ.get("SUBPLANCK_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"SUBPLANCK_THREADS must be an integer, got {cap!r}") from None
    return n


def _module(backend):
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available in this build")
        return _compiled
    if backend == "python":
        return _kernels_py
    raise ValueError(f"unknown backend {backend!r}")


def _flat(*arrays):
    arrays = np.broadcast_arrays(*[np.asarray(a, dtype=np.float64) for a in arrays])
    shape = arrays[0].shape
    return shape, [np.ascontiguousarray(a).ravel() for a in arrays]


def wigner_points(x1, p1, x2, p2, consts, backend=None):
    shape, flat = _flat(x1, p1, x2, p2)
    consts = np.ascontiguousarray(consts, dtype=np.float64)
    out = _module(backend).wigner_points(*flat, consts, thread_count())
    return np.asarray(out).reshape(shape)


def oracle_points(x1, p1, x2, p2, nodes, weights, consts, backend=None):
    shape, flat = _flat(x1, p1, x2, p2)
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    consts = np.ascontiguousarray(consts, dtype=np.float64)
    re, im = _module(backend).oracle_points(*flat, nodes, weights, consts, thread_count())
    return np.asarray(re).reshape(shape), np.asarray(im).reshape(shape)
