# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature kernels; see ``_kernels_py`` for the reference."""
from libc.math cimport sqrt, fabs

import numpy as np

cdef int GL_ORDER = 20
cdef double GRADE_RATIO = 4.0
cdef int MAX_GRADES = 60
cdef int MAX_CUTS = 2 + 1 + 2 * 60

_nodes, _weights = np.polynomial.legendre.leggauss(20)
cdef double[::1] GL_NODES = np.ascontiguousarray(_nodes)
cdef double[::1] GL_WEIGHTS = np.ascontiguousarray(_weights)


cdef int _cuts(double a, double b, double X, double Y, double* cuts) noexcept nogil:
    cdef int n = 2, i, j, k
    cdef double g, c, t, span = b - a, reach
    cuts[0] = a
    cuts[1] = b
    if a < X < b:
        cuts[n] = X
        n += 1
    if Y > 0.0:
        reach = span + fabs(X - 0.5 * (a + b))
        g = Y
        for k in range(MAX_GRADES):
            if g >= reach:
                break
            c = X - g
            if a < c < b:
                cuts[n] = c
                n += 1
            c = X + g
            if a < c < b:
                cuts[n] = c
                n += 1
            g *= GRADE_RATIO
    for i in range(1, n):
        t = cuts[i]
        j = i - 1
        while j >= 0 and cuts[j] > t:
            cuts[j + 1] = cuts[j]
            j -= 1
        cuts[j + 1] = t
    return n


cdef void _moments(double X, double Y, double b,
                   const double[::1] lo, const double[::1] hi,
                   const double[::1] s0, const double[::1] s1,
                   double* out) noexcept nogil:
    cdef double cuts[123]
    cdef Py_ssize_t k, m, q
    cdef int n
    cdef double p0, p1, half, mid, x, w, dx, r, inv
    cdef double mass = 0.0, i_r = 0.0, i_dx = 0.0, i_inv = 0.0
    for k in range(lo.shape[0]):
        n = _cuts(lo[k], hi[k], X, Y, cuts)
        for m in range(n - 1):
            p0 = cuts[m]
            p1 = cuts[m + 1]
            if p1 <= p0:
                continue
            half = 0.5 * (p1 - p0)
            mid = 0.5 * (p0 + p1)
            for q in range(GL_ORDER):
                x = mid + half * GL_NODES[q]
                w = half * GL_WEIGHTS[q] * (s0[k] + s1[k] * x)
                dx = X - x
                r = sqrt(b * dx * dx + Y * Y)
                mass += w
                i_r += w * r
                if r > 0.0:
                    inv = 1.0 / r
                    i_dx += w * dx * inv
                    i_inv += w * inv
    out[0] = mass
    out[1] = i_r
    out[2] = i_dx
    out[3] = i_inv


def region_moments(double X, double Y, double b, lo, hi, s0, s1):
    cdef double out[4]
    cdef const double[::1] vlo = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] vhi = np.ascontiguousarray(hi, dtype=np.float64)
    cdef const double[::1] v0 = np.ascontiguousarray(s0, dtype=np.float64)
    cdef const double[::1] v1 = np.ascontiguousarray(s1, dtype=np.float64)
    with nogil:
        _moments(X, Y, b, vlo, vhi, v0, v1, out)
    return out[0], out[1], out[2], out[3]


def cost_and_gradient(double X, double Y, double a, double b, double c, lo, hi, s0, s1):
    mass, i_r, i_dx, i_inv = region_moments(X, Y, b, lo, hi, s0, s1)
    return a * i_r - c * Y * mass, a * b * i_dx, a * Y * i_inv - c * mass


cdef void _field(double X, double Y, double a, double b, double c,
                 const double[::1] lo, const double[::1] hi,
                 const double[::1] s0, const double[::1] s1,
                 double* v) noexcept nogil:
    cdef double out[4]
    cdef double gx, gy, n
    if Y < 0.0:
        Y = 0.0
    _moments(X, Y, b, lo, hi, s0, s1, out)
    gx = a * b * out[2]
    gy = a * Y * out[3] - c * out[0]
    n = sqrt(gx * gx + gy * gy)
    if n > 1.0:
        gx /= n
        gy /= n
    v[0] = -gx
    v[1] = -gy


def flow_round(double X, double Y, double a, double b, double c, lo, hi, s0, s1,
               int substeps, double duration=1.0):
    cdef const double[::1] vlo = np.ascontiguousarray(lo, dtype=np.float64)
    cdef const double[::1] vhi = np.ascontiguousarray(hi, dtype=np.float64)
    cdef const double[::1] v0 = np.ascontiguousarray(s0, dtype=np.float64)
    cdef const double[::1] v1 = np.ascontiguousarray(s1, dtype=np.float64)
    cdef double k1[2]
    cdef double k2[2]
    cdef double k3[2]
    cdef double k4[2]
    cdef double h = duration / substeps
    cdef int s
    with nogil:
        for s in range(substeps):
            _field(X, Y, a, b, c, vlo, vhi, v0, v1, k1)
            _field(X + 0.5 * h * k1[0], Y + 0.5 * h * k1[1], a, b, c, vlo, vhi, v0, v1, k2)
            _field(X + 0.5 * h * k2[0], Y + 0.5 * h * k2[1], a, b, c, vlo, vhi, v0, v1, k3)
            _field(X + h * k3[0], Y + h * k3[1], a, b, c, vlo, vhi, v0, v1, k4)
            X += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            Y += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            if Y < 0.0:
                Y = 0.0
    return X, Y
