"""Banded matrices in LAPACK band storage with factor-once / solve-many."""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded
from scipy.linalg.lapack import dgbtrf, dgbtrs


class BandedMatrix:
    """Square matrix with ``lower`` sub- and ``upper`` super-diagonals.

    ``ab[upper + i - j, j] == M[i, j]`` (the layout used by
    ``scipy.linalg.solve_banded``).
    """

    def __init__(self, ab, lower: int, upper: int, symmetric: bool = False):
        ab = np.asarray(ab, dtype=float)
        if ab.ndim != 2 or ab.shape[0] != lower + upper + 1:
            raise ValueError(f"band storage of shape {ab.shape} does not match bandwidths ({lower}, {upper})")
        self.ab = ab
        self.lower = lower
        self.upper = upper
        self.symmetric = symmetric
        self._factor = None

    @property
    def order(self) -> int:
        return self.ab.shape[1]

    @property
    def shape(self):
        return (self.order, self.order)

    @classmethod
    def zeros(cls, n, lower, upper):
        return cls(np.zeros((lower + upper + 1, n)), lower, upper)

    @classmethod
    def from_dense(cls, M, lower=None, upper=None, symmetric=False, tol=0.0):
        """Pack a dense matrix; bandwidths default to the detected ones."""
        M = np.asarray(M, dtype=float)
        n = M.shape[0]
        if lower is None or upper is None:
            i, j = np.nonzero(np.abs(M) > tol)
            lo = int(max(0, np.max(i - j, initial=0)))
            up = int(max(0, np.max(j - i, initial=0)))
            lower = lo if lower is None else lower
            upper = up if upper is None else upper
        ab = np.zeros((lower + upper + 1, n))
        for k in range(-lower, upper + 1):
            d = np.diagonal(M, k)
            if k >= 0:
                ab[upper - k, k:] = d
            else:
                ab[upper - k, : n + k] = d
        return cls(ab, lower, upper, symmetric=symmetric)

    def diagonal(self, k=0) -> np.ndarray:
        n = self.order
        if k > self.upper or -k > self.lower:
            return np.zeros(n - abs(k))
        row = self.ab[self.upper - k]
        return row[k:].copy() if k >= 0 else row[: n + k].copy()

    def to_dense(self) -> np.ndarray:
        n = self.order
        M = np.zeros((n, n))
        for k in range(-self.lower, self.upper + 1):
            d = self.diagonal(k)
            if d.size:
                M += np.diag(d, k)
        return M

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        n = self.order
        y = np.zeros(n)
        for k in range(-self.lower, self.upper + 1):
            if k >= 0:
                y[: n - k] += self.ab[self.upper - k, k:] * x[k:]
            else:
                y[-k:] += self.ab[self.upper - k, : n + k] * x[: n + k]
        return y

    def __matmul__(self, x):
        return self.matvec(x)

    @property
    def T(self) -> BandedMatrix:
        n, l, u = self.order, self.lower, self.upper
        ab = np.zeros((l + u + 1, n))
        for k in range(-l, u + 1):
            d = self.diagonal(k)
            # diagonal k of M is diagonal -k of M^T
            if k <= 0:
                ab[l + k, -k:] = d
            else:
                ab[l + k, : n - k] = d
        return BandedMatrix(ab, u, l, symmetric=self.symmetric)

    def factor(self):
        """Factor once; subsequent ``solve`` calls reuse the factors."""
        if self._factor is None:
            if self.symmetric and self.lower == self.upper:
                self._factor = _CholeskyFactor(self)
            else:
                self._factor = _LUFactor(self)
        return self._factor

    def solve(self, b) -> np.ndarray:
        return self.factor().solve(b)

    def __repr__(self):
        return f"BandedMatrix(order={self.order}, lower={self.lower}, upper={self.upper})"


class _CholeskyFactor:
    def __init__(self, m: BandedMatrix):
        # upper-form storage is the top (upper+1) rows of the general layout
        self._c = cholesky_banded(m.ab[: m.upper + 1], lower=False)

    def solve(self, b):
        return cho_solve_banded((self._c, False), np.asarray(b, dtype=float))


class _LUFactor:
    def __init__(self, m: BandedMatrix):
        l, u, n = m.lower, m.upper, m.order
        work = np.zeros((2 * l + u + 1, n))
        work[l:] = m.ab
        lu, piv, info = dgbtrf(work, l, u)
        if info > 0:
            raise np.linalg.LinAlgError(f"banded matrix is singular (U[{info - 1},{info - 1}] = 0)")
        self._lu, self._piv, self._l, self._u = lu, piv, l, u

    def solve(self, b):
        x, info = dgbtrs(self._lu, self._l, self._u, np.asarray(b, dtype=float), self._piv)
        if info != 0:
            raise np.linalg.LinAlgError(f"dgbtrs failed with info={info}")
        return x
