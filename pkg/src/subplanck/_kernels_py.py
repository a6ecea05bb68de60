"""Pure-numpy reference implementation of the compiled kernels.

Constant layouts (float64 vectors):

``wigner_points``: ``[x0, p0, delta, hbar, |N|^2, |A|^2, |B|^2, Re(A*B), Im(A*B), ex, ep]``
with ``ex = exp(-x0^2/delta^2)`` and ``ep = exp(-p0^2 delta^2/hbar^2)``.

``oracle_points``: ``[x0, p0, delta, hbar, N, Re A, Im A, Re B, Im B, n_psi, n_phi]``
where ``n_psi``, ``n_phi`` are the constituent normalization factors.
"""

import numpy as np

_CHUNK = 1 << 16


def _w_psi(x, p, x0, d, h, norm):
    d2 = d * d
    return ((np.exp(-(x - x0) ** 2 / d2) + np.exp(-(x + x0) ** 2 / d2)
             + 2.0 * np.exp(-x * x / d2) * np.cos(2.0 * x0 * p / h))
            * np.exp(-p * p * d2 / (h * h)) * norm)


def _w_phi(x, p, p0, d, h, norm):
    s = d * d / (h * h)
    return ((np.exp(-(p - p0) ** 2 * s) + np.exp(-(p + p0) ** 2 * s)
             + 2.0 * np.exp(-p * p * s) * np.cos(2.0 * p0 * x / h))
            * np.exp(-x * x / (d * d)) * norm)


def _cross(x, p, x0, p0, d, h, norm):
    total = np.zeros(np.broadcast_shapes(np.shape(x), np.shape(p)), dtype=complex)
    for sg in (1.0, -1.0):
        xs = x - 0.5 * sg * x0
        for ta in (1.0, -1.0):
            ps = p - 0.5 * ta * p0
            mag = np.exp(-xs * xs / (d * d) - ps * ps * d * d / (h * h))
            total += mag * np.exp(1j * (ta * p0 * xs + sg * p * x0) / h)
    return total * norm


def _wigner_chunk(x1, p1, x2, p2, c):
    x0, p0, d, h, nsq, a2, b2, abr, abi, ex, ep = c
    npsi = 1.0 / (2.0 * np.pi * h * (1.0 + ex))
    nphi = 1.0 / (2.0 * np.pi * h * (1.0 + ep))
    ncross = 1.0 / (2.0 * np.pi * h * np.sqrt((1.0 + ex) * (1.0 + ep)))
    total = np.zeros(x1.shape)
    if a2 != 0.0:
        total += a2 * _w_psi(x1, p1, x0, d, h, npsi) * _w_phi(x2, p2, p0, d, h, nphi)
    if b2 != 0.0:
        total += b2 * _w_phi(x1, p1, p0, d, h, nphi) * _w_psi(x2, p2, x0, d, h, npsi)
    if abr != 0.0 or abi != 0.0:
        q = _cross(x1, p1, x0, p0, d, h, ncross) * np.conj(_cross(x2, p2, x0, p0, d, h, ncross))
        total += 2.0 * (abr * q.real - abi * q.imag)
    return nsq * total


def wigner_points(x1, p1, x2, p2, consts, threads=1):
    out = np.empty(len(x1))
    for lo in range(0, len(x1), _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        out[sl] = _wigner_chunk(x1[sl], p1[sl], x2[sl], p2[sl], consts)
    return out


def _psi(u, x0, d, norm):
    return norm * (np.exp(-(u + x0) ** 2 / (2 * d * d)) + np.exp(-(u - x0) ** 2 / (2 * d * d)))


def _phi(u, p0, d, h, norm):
    return norm * 2.0 * np.cos(p0 * u / h) * np.exp(-u * u / (2 * d * d))


def oracle_points(x1, p1, x2, p2, nodes, weights, consts, threads=1):
    x0, p0, d, h, N, Ar, Ai, Br, Bi, npsi, nphi = consts
    A, B = complex(Ar, Ai), complex(Br, Bi)
    half = 0.5 * nodes
    re = np.empty(len(x1))
    im = np.empty(len(x1))
    for k in range(len(x1)):
        up, um = x1[k] + half, x1[k] - half
        vp, vm = x2[k] + half, x2[k] - half
        plus = (A * np.outer(_psi(up, x0, d, npsi), _phi(vp, p0, d, h, nphi))
                + B * np.outer(_phi(up, p0, d, h, nphi), _psi(vp, x0, d, npsi)))
        minus = (A * np.outer(_psi(um, x0, d, npsi), _phi(vm, p0, d, h, nphi))
                 + B * np.outer(_phi(um, p0, d, h, nphi), _psi(vm, x0, d, npsi)))
        row = weights * np.exp(1j * p1[k] * nodes / h)
        col = weights * np.exp(1j * p2[k] * nodes / h)
        val = row @ (np.conj(plus) * minus) @ col * N * N / (4.0 * np.pi**2 * h * h)
        re[k], im[k] = val.real, val.imag
    return re, im
