"""NumPy implementation of the inner kernels.

Every function here has a twin with the same signature in the compiled
``_ckernels`` module. Nodal arrays have length ``N + 1`` and carry the
homogeneous boundary value explicitly.
"""

import numpy as np

_XI = (0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0))


def _slopes(x, v):
    return np.diff(v) / np.diff(x)


def g1_nodal(x, U, Q):
    """Nodal load of ``(q u_x + (q u)_x, psi_a)`` for every hat ``psi_a``."""
    h = np.diff(x)
    su, sq = _slopes(x, U), _slopes(x, Q)
    out = np.zeros(x.size)
    for xi in _XI:
        u = U[:-1] * (1.0 - xi) + U[1:] * xi
        q = Q[:-1] * (1.0 - xi) + Q[1:] * xi
        f = 0.5 * h * (2.0 * su * q + sq * u)
        out[:-1] += f * (1.0 - xi)
        out[1:] += f * xi
    return out


def g1_element_jacobians(x, U, Q):
    """Element blocks ``K[e, a, b]`` of d(g1_nodal)/dU and d(g1_nodal)/dQ."""
    h = np.diff(x)
    su, sq = _slopes(x, U), _slopes(x, Q)
    n = h.size
    KU = np.zeros((n, 2, 2))
    KQ = np.zeros((n, 2, 2))
    dslope = (-1.0 / h, 1.0 / h)
    for xi in _XI:
        psi = (1.0 - xi, xi)
        u = U[:-1] * psi[0] + U[1:] * psi[1]
        q = Q[:-1] * psi[0] + Q[1:] * psi[1]
        w = 0.5 * h
        for a in range(2):
            for b in range(2):
                KU[:, a, b] += w * (2.0 * q * dslope[b] + sq * psi[b]) * psi[a]
                KQ[:, a, b] += w * (2.0 * su * psi[b] + dslope[b] * u) * psi[a]
    return KU, KQ


def g2_nodal(x, U, R):
    """Nodal load of ``-1/2 (u r_x + (u r)_x, psi_a)``."""
    h = np.diff(x)
    su, sr = _slopes(x, U), _slopes(x, R)
    out = np.zeros(x.size)
    for xi in _XI:
        u = U[:-1] * (1.0 - xi) + U[1:] * xi
        r = R[:-1] * (1.0 - xi) + R[1:] * xi
        f = -0.25 * h * (2.0 * u * sr + su * r)
        out[:-1] += f * (1.0 - xi)
        out[1:] += f * xi
    return out


def g2_element_jacobians(x, U, R):
    h = np.diff(x)
    su, sr = _slopes(x, U), _slopes(x, R)
    n = h.size
    KU = np.zeros((n, 2, 2))
    KR = np.zeros((n, 2, 2))
    dslope = (-1.0 / h, 1.0 / h)
    for xi in _XI:
        psi = (1.0 - xi, xi)
        u = U[:-1] * psi[0] + U[1:] * psi[1]
        r = R[:-1] * psi[0] + R[1:] * psi[1]
        w = -0.25 * h
        for a in range(2):
            for b in range(2):
                KU[:, a, b] += w * (2.0 * psi[b] * sr + dslope[b] * r) * psi[a]
                KR[:, a, b] += w * (2.0 * u * dslope[b] + su * psi[b]) * psi[a]
    return KU, KR


def _ghost_extend(v):
    # indices -1 .. N+2
    return np.concatenate(([v[1]], v, [v[-2], 2.0 * v[-1] - v[-3]]))


def fd_residual(u0, u1, dx, dt):
    """Residual of the midpoint finite difference scheme at k = 1..N.

    Scaled by ``dx**2`` so the time-difference part has O(1) entries.
    """
    e0, e1 = _ghost_extend(u0), _ghost_extend(u1)
    w = 0.5 * (e0 + e1)
    d = e1 - e0
    # s, c, p at grid indices 0..N+1 (positions 1..N+2 of the extended array)
    s = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / dx**2
    c = (w[2:] - w[:-2]) / (2.0 * dx)
    p = w[1:-1] * s
    nonlin = s[1:-1] * c[1:-1] + (p[2:] - p[:-2]) / (2.0 * dx)
    time = d[3:-1] - 2.0 * d[2:-2] + d[1:-3]
    return time + dt * dx**2 * nonlin


def fd_jacobian_banded(u0, u1, dx, dt):
    """d(fd_residual)/d(u1[1:]) in band storage with two sub/super-diagonals."""
    n = u1.size - 1
    e0, e1 = _ghost_extend(u0), _ghost_extend(u1)
    w = 0.5 * (e0 + e1)
    s = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / dx**2
    c = (w[2:] - w[:-2]) / (2.0 * dx)
    # values at k-1, k, k+1 for k = 1..N
    wm, wp = w[1:-3], w[3:-1]
    sm, sk, sp = s[:-2], s[1:-1], s[2:]
    ck = c[1:-1]
    dx2, dx3 = dx**2, dx**3
    a = np.empty((5, n))
    a[0] = -wm / (2.0 * dx3)
    a[1] = ck / dx2 - sk / (2.0 * dx) - (sm - 2.0 * wm / dx2) / (2.0 * dx)
    a[2] = -2.0 * ck / dx2 + (wp - wm) / (2.0 * dx3)
    a[3] = ck / dx2 + sk / (2.0 * dx) + (sp - 2.0 * wp / dx2) / (2.0 * dx)
    a[4] = wp / (2.0 * dx3)
    a *= 0.5 * dt * dx2
    a[1] += 1.0
    a[2] -= 2.0
    a[3] += 1.0

    ab = np.zeros((5, n))
    k = np.arange(1, n + 1)
    for m in range(-2, 3):
        j = k + m
        vals = a[m + 2]
        cols, rows, v = [], [], []
        # fold ghost indices onto unknowns
        cols.append(np.where(j == -1, 1, np.where(j == n + 1, n - 1, np.where(j == n + 2, n, j))))
        rows.append(k)
        v.append(np.where(j == n + 2, 2.0 * vals, vals))
        extra = j == n + 2
        cols.append(np.full(int(extra.sum()), n - 2))
        rows.append(k[extra])
        v.append(-vals[extra])
        cols, rows, v = np.concatenate(cols), np.concatenate(rows), np.concatenate(v)
        keep = cols >= 1
        r, cc = rows[keep] - 1, cols[keep] - 1
        np.add.at(ab, (2 + r - cc, cc), v[keep])
    return ab
