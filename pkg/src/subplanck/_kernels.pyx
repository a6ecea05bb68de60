# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: closed-form Wigner evaluation and the brute-force
tensor quadrature of the two-mode Wigner integral.

Both functions take flat float64 point arrays and a packed constants vector;
see ``_kernels_py`` for the reference numpy implementation and the layout of
the constants. Each output element is computed by a single thread with a
fixed summation order, so results do not depend on the thread count.
"""

import numpy as np

from cython.parallel cimport prange
from libc.math cimport exp, cos, sin, sqrt, M_PI
from libc.stdlib cimport malloc, free


cdef inline double _w_psi(double x, double p, double x0, double d, double h, double norm) noexcept nogil:
    cdef double d2 = d * d
    return (exp(-(x - x0) * (x - x0) / d2) + exp(-(x + x0) * (x + x0) / d2)
            + 2.0 * exp(-x * x / d2) * cos(2.0 * x0 * p / h)) * exp(-p * p * d2 / (h * h)) * norm


cdef inline double _w_phi(double x, double p, double p0, double d, double h, double norm) noexcept nogil:
    cdef double s = d * d / (h * h)
    return (exp(-(p - p0) * (p - p0) * s) + exp(-(p + p0) * (p + p0) * s)
            + 2.0 * exp(-p * p * s) * cos(2.0 * p0 * x / h)) * exp(-x * x / (d * d)) * norm


cdef inline void _cross(double x, double p, double x0, double p0, double d, double h,
                        double norm, double* re, double* im) noexcept nogil:
    cdef double sr = 0.0, si = 0.0, mag, ph, xs, ps
    cdef int a, b
    cdef double sg, ta
    for a in range(2):
        sg = 1.0 - 2.0 * a
        xs = x - 0.5 * sg * x0
        for b in range(2):
            ta = 1.0 - 2.0 * b
            ps = p - 0.5 * ta * p0
            mag = exp(-xs * xs / (d * d) - ps * ps * d * d / (h * h))
            ph = (ta * p0 * xs + sg * p * x0) / h
            sr += mag * cos(ph)
            si += mag * sin(ph)
    re[0] = sr * norm
    im[0] = si * norm


cdef double _wigner_one(double x1, double p1, double x2, double p2, const double* c) noexcept nogil:
    cdef double x0 = c[0], p0 = c[1], d = c[2], h = c[3]
    cdef double nsq = c[4], a2 = c[5], b2 = c[6], abr = c[7], abi = c[8]
    cdef double ex = c[9], ep = c[10]
    cdef double npsi = 1.0 / (2.0 * M_PI * h * (1.0 + ex))
    cdef double nphi = 1.0 / (2.0 * M_PI * h * (1.0 + ep))
    cdef double ncross = 1.0 / (2.0 * M_PI * h * sqrt((1.0 + ex) * (1.0 + ep)))
    cdef double c1r, c1i, c2r, c2i, qr, qi, total
    total = 0.0
    if a2 != 0.0:
        total += a2 * _w_psi(x1, p1, x0, d, h, npsi) * _w_phi(x2, p2, p0, d, h, nphi)
    if b2 != 0.0:
        total += b2 * _w_phi(x1, p1, p0, d, h, nphi) * _w_psi(x2, p2, x0, d, h, npsi)
    if abr != 0.0 or abi != 0.0:
        _cross(x1, p1, x0, p0, d, h, ncross, &c1r, &c1i)
        _cross(x2, p2, x0, p0, d, h, ncross, &c2r, &c2i)
        # C1 * conj(C2)
        qr = c1r * c2r + c1i * c2i
        qi = c1i * c2r - c1r * c2i
        total += 2.0 * (abr * qr - abi * qi)
    return nsq * total


def wigner_points(const double[::1] x1, const double[::1] p1, const double[::1] x2, const double[::1] p2,
                  const double[::1] consts, int threads=1):
    cdef Py_ssize_t m = x1.shape[0], k
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef const double* c = &consts[0]
    if m == 0:
        return out
    for k in prange(m, nogil=True, num_threads=threads, schedule="static"):
        o[k] = _wigner_one(x1[k], p1[k], x2[k], p2[k], c)
    return out


cdef inline double _psi(double x, double x0, double d, double norm) noexcept nogil:
    return norm * (exp(-(x + x0) * (x + x0) / (2.0 * d * d)) + exp(-(x - x0) * (x - x0) / (2.0 * d * d)))


cdef inline double _phi(double x, double p0, double d, double h, double norm) noexcept nogil:
    return norm * 2.0 * cos(p0 * x / h) * exp(-x * x / (2.0 * d * d))


cdef void _oracle_one(double x1, double p1, double x2, double p2, const double* t,
                      const double* w, Py_ssize_t n, const double* c,
                      double* out_re, double* out_im) noexcept nogil:
    cdef double x0 = c[0], p0 = c[1], d = c[2], h = c[3], N = c[4]
    cdef double Ar = c[5], Ai = c[6], Br = c[7], Bi = c[8], npsi = c[9], nphi = c[10]
    cdef double* buf = <double*> malloc(10 * n * sizeof(double))
    cdef double* s1p = buf
    cdef double* f1p = buf + n
    cdef double* s1m = buf + 2 * n
    cdef double* f1m = buf + 3 * n
    cdef double* s2p = buf + 4 * n
    cdef double* f2p = buf + 5 * n
    cdef double* s2m = buf + 6 * n
    cdef double* f2m = buf + 7 * n
    cdef double* vr = buf + 8 * n
    cdef double* vi = buf + 9 * n
    cdef Py_ssize_t i, j
    cdef double u, a1, b1, a2, b2, ppr, ppi, pmr, pmi, qr, qi, ir, ii, rr, ri
    cdef double tr = 0.0, ti = 0.0
    for i in range(n):
        u = x1 + 0.5 * t[i]
        s1p[i] = _psi(u, x0, d, npsi)
        f1p[i] = _phi(u, p0, d, h, nphi)
        u = x1 - 0.5 * t[i]
        s1m[i] = _psi(u, x0, d, npsi)
        f1m[i] = _phi(u, p0, d, h, nphi)
        u = x2 + 0.5 * t[i]
        s2p[i] = _psi(u, x0, d, npsi)
        f2p[i] = _phi(u, p0, d, h, nphi)
        u = x2 - 0.5 * t[i]
        s2m[i] = _psi(u, x0, d, npsi)
        f2m[i] = _phi(u, p0, d, h, nphi)
        vr[i] = w[i] * cos(p2 * t[i] / h)
        vi[i] = w[i] * sin(p2 * t[i] / h)
    for i in range(n):
        ir = 0.0
        ii = 0.0
        for j in range(n):
            a1 = s1p[i] * f2p[j]
            b1 = f1p[i] * s2p[j]
            a2 = s1m[i] * f2m[j]
            b2 = f1m[i] * s2m[j]
            ppr = Ar * a1 + Br * b1
            ppi = Ai * a1 + Bi * b1
            pmr = Ar * a2 + Br * b2
            pmi = Ai * a2 + Bi * b2
            qr = ppr * pmr + ppi * pmi
            qi = ppr * pmi - ppi * pmr
            ir = ir + vr[j] * qr - vi[j] * qi
            ii = ii + vr[j] * qi + vi[j] * qr
        rr = w[i] * cos(p1 * t[i] / h)
        ri = w[i] * sin(p1 * t[i] / h)
        tr = tr + rr * ir - ri * ii
        ti = ti + rr * ii + ri * ir
    free(buf)
    out_re[0] = tr * N * N / (4.0 * M_PI * M_PI * h * h)
    out_im[0] = ti * N * N / (4.0 * M_PI * M_PI * h * h)


def oracle_points(const double[::1] x1, const double[::1] p1, const double[::1] x2, const double[::1] p2,
                  const double[::1] nodes, const double[::1] weights, const double[::1] consts, int threads=1):
    cdef Py_ssize_t m = x1.shape[0], n = nodes.shape[0], k
    re = np.empty(m, dtype=np.float64)
    im = np.empty(m, dtype=np.float64)
    cdef double[::1] ore = re
    cdef double[::1] oim = im
    cdef const double* c = &consts[0]
    cdef const double* t = &nodes[0]
    cdef const double* w = &weights[0]
    if m == 0:
        return re, im
    for k in prange(m, nogil=True, num_threads=threads, schedule="dynamic"):
        _oracle_one(x1[k], p1[k], x2[k], p2[k], t, w, n, c, &ore[k], &oim[k])
    return re, im
