# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the functions in ``_pykernels``."""

import numpy as np

from libc.math cimport sqrt

cdef double XI0 = 0.5 - 0.5 / sqrt(3.0)
cdef double XI1 = 0.5 + 0.5 / sqrt(3.0)


def g1_nodal(const double[::1] x, const double[::1] U, const double[::1] Q):
    cdef Py_ssize_t n = x.shape[0] - 1, e, g
    out_arr = np.zeros(n + 1)
    cdef double[::1] out = out_arr
    cdef double h, su, sq, xi, u, q, f
    for e in range(n):
        h = x[e + 1] - x[e]
        su = (U[e + 1] - U[e]) / h
        sq = (Q[e + 1] - Q[e]) / h
        for g in range(2):
            xi = XI0 if g == 0 else XI1
            u = U[e] * (1.0 - xi) + U[e + 1] * xi
            q = Q[e] * (1.0 - xi) + Q[e + 1] * xi
            f = 0.5 * h * (2.0 * su * q + sq * u)
            out[e] += f * (1.0 - xi)
            out[e + 1] += f * xi
    return out_arr


def g1_element_jacobians(const double[::1] x, const double[::1] U, const double[::1] Q):
    cdef Py_ssize_t n = x.shape[0] - 1, e, g, a, b
    KU_arr = np.zeros((n, 2, 2))
    KQ_arr = np.zeros((n, 2, 2))
    cdef double[:, :, ::1] KU = KU_arr
    cdef double[:, :, ::1] KQ = KQ_arr
    cdef double h, su, sq, xi, u, q, w
    cdef double psi[2]
    cdef double ds[2]
    for e in range(n):
        h = x[e + 1] - x[e]
        su = (U[e + 1] - U[e]) / h
        sq = (Q[e + 1] - Q[e]) / h
        ds[0] = -1.0 / h
        ds[1] = 1.0 / h
        w = 0.5 * h
        for g in range(2):
            xi = XI0 if g == 0 else XI1
            psi[0] = 1.0 - xi
            psi[1] = xi
            u = U[e] * psi[0] + U[e + 1] * psi[1]
            q = Q[e] * psi[0] + Q[e + 1] * psi[1]
            for a in range(2):
                for b in range(2):
                    KU[e, a, b] += w * (2.0 * q * ds[b] + sq * psi[b]) * psi[a]
                    KQ[e, a, b] += w * (2.0 * su * psi[b] + ds[b] * u) * psi[a]
    return KU_arr, KQ_arr


def g2_nodal(const double[::1] x, const double[::1] U, const double[::1] R):
    cdef Py_ssize_t n = x.shape[0] - 1, e, g
    out_arr = np.zeros(n + 1)
    cdef double[::1] out = out_arr
    cdef double h, su, sr, xi, u, r, f
    for e in range(n):
        h = x[e + 1] - x[e]
        su = (U[e + 1] - U[e]) / h
        sr = (R[e + 1] - R[e]) / h
        for g in range(2):
            xi = XI0 if g == 0 else XI1
            u = U[e] * (1.0 - xi) + U[e + 1] * xi
            r = R[e] * (1.0 - xi) + R[e + 1] * xi
            f = -0.25 * h * (2.0 * u * sr + su * r)
            out[e] += f * (1.0 - xi)
            out[e + 1] += f * xi
    return out_arr


def g2_element_jacobians(const double[::1] x, const double[::1] U, const double[::1] R):
    cdef Py_ssize_t n = x.shape[0] - 1, e, g, a, b
    KU_arr = np.zeros((n, 2, 2))
    KR_arr = np.zeros((n, 2, 2))
    cdef double[:, :, ::1] KU = KU_arr
    cdef double[:, :, ::1] KR = KR_arr
    cdef double h, su, sr, xi, u, r, w
    cdef double psi[2]
    cdef double ds[2]
    for e in range(n):
        h = x[e + 1] - x[e]
        su = (U[e + 1] - U[e]) / h
        sr = (R[e + 1] - R[e]) / h
        ds[0] = -1.0 / h
        ds[1] = 1.0 / h
        w = -0.25 * h
        for g in range(2):
            xi = XI0 if g == 0 else XI1
            psi[0] = 1.0 - xi
            psi[1] = xi
            u = U[e] * psi[0] + U[e + 1] * psi[1]
            r = R[e] * psi[0] + R[e + 1] * psi[1]
            for a in range(2):
                for b in range(2):
                    KU[e, a, b] += w * (2.0 * psi[b] * sr + ds[b] * r) * psi[a]
                    KR[e, a, b] += w * (2.0 * u * ds[b] + su * psi[b]) * psi[a]
    return KU_arr, KR_arr


cdef inline double _ext(const double[::1] v, Py_ssize_t j, Py_ssize_t n) nogil:
    # ghost rules: v[-1] = v[1], v[n+1] = v[n-1], v[n+2] = 2 v[n] - v[n-2]
    if j == -1:
        return v[1]
    if j == n + 1:
        return v[n - 1]
    if j == n + 2:
        return 2.0 * v[n] - v[n - 2]
    return v[j]


cdef inline double _w(const double[::1] a, const double[::1] b, Py_ssize_t j, Py_ssize_t n) nogil:
    return 0.5 * (_ext(a, j, n) + _ext(b, j, n))


cdef inline double _s(const double[::1] a, const double[::1] b, Py_ssize_t j, Py_ssize_t n, double dx2) nogil:
    return (_w(a, b, j + 1, n) - 2.0 * _w(a, b, j, n) + _w(a, b, j - 1, n)) / dx2


def fd_residual(const double[::1] u0, const double[::1] u1, double dx, double dt):
    cdef Py_ssize_t n = u1.shape[0] - 1, k
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double dx2 = dx * dx, sk, ck, pp, pm, time
    for k in range(1, n + 1):
        sk = _s(u0, u1, k, n, dx2)
        ck = (_w(u0, u1, k + 1, n) - _w(u0, u1, k - 1, n)) / (2.0 * dx)
        pp = _w(u0, u1, k + 1, n) * _s(u0, u1, k + 1, n, dx2)
        pm = _w(u0, u1, k - 1, n) * _s(u0, u1, k - 1, n, dx2)
        time = ((_ext(u1, k + 1, n) - _ext(u0, k + 1, n))
                - 2.0 * (u1[k] - u0[k])
                + (_ext(u1, k - 1, n) - _ext(u0, k - 1, n)))
        out[k - 1] = time + dt * dx2 * (sk * ck + (pp - pm) / (2.0 * dx))
    return out_arr


cdef inline void _put(double[:, ::1] ab, Py_ssize_t n, Py_ssize_t k, Py_ssize_t j, double v) nogil:
    # k is the equation index (1..n), j the extended column index
    if j == -1:
        j = 1
    elif j == n + 1:
        j = n - 1
    elif j == n + 2:
        if n - 2 >= 1:
            ab[2 + (k - 1) - (n - 3), n - 3] -= v
        v = 2.0 * v
        j = n
    if j >= 1:
        ab[2 + (k - 1) - (j - 1), j - 1] += v


def fd_jacobian_banded(const double[::1] u0, const double[::1] u1, double dx, double dt):
    cdef Py_ssize_t n = u1.shape[0] - 1, k
    ab_arr = np.zeros((5, n))
    cdef double[:, ::1] ab = ab_arr
    cdef double dx2 = dx * dx, dx3 = dx2 * dx, scale = 0.5 * dt * dx2
    cdef double wm, wp, sm, sk, sp, ck
    for k in range(1, n + 1):
        wm = _w(u0, u1, k - 1, n)
        wp = _w(u0, u1, k + 1, n)
        sm = _s(u0, u1, k - 1, n, dx2)
        sk = _s(u0, u1, k, n, dx2)
        sp = _s(u0, u1, k + 1, n, dx2)
        ck = (wp - wm) / (2.0 * dx)
        _put(ab, n, k, k - 2, scale * (-wm / (2.0 * dx3)))
        _put(ab, n, k, k - 1, 1.0 + scale * (ck / dx2 - sk / (2.0 * dx) - (sm - 2.0 * wm / dx2) / (2.0 * dx)))
        _put(ab, n, k, k, -2.0 + scale * (-2.0 * ck / dx2 + (wp - wm) / (2.0 * dx3)))
        _put(ab, n, k, k + 1, 1.0 + scale * (ck / dx2 + sk / (2.0 * dx) + (sp - 2.0 * wp / dx2) / (2.0 * dx)))
        _put(ab, n, k, k + 2, scale * (wp / (2.0 * dx3)))
    return ab_arr
