"""Exact rarefaction solution and error metrics."""

from __future__ import annotations

import math

import numpy as np

from hunter_saxton.errors import DomainError
from hunter_saxton.fem import CoeffVector
from hunter_saxton.fd import FdState


def horizon(L: float) -> float:
    """End of the window ``[0, 2(sqrt(L) - 1))`` where the solution is valid on [-L, L]."""
    return 2.0 * (math.sqrt(L) - 1.0)


class ExactSolution:
    """``u = 0`` left of 0, ``x/s`` on ``(0, s^2)``, ``s`` beyond, with ``s = t/2 + 1``."""

    def __init__(self, L: float):
        if not L > 1.0:
            raise DomainError(f"the exact solution needs L > 1, got {L}")
        self.L = float(L)
        self.t_max = horizon(L)

    def _check(self, x, t):
        if not 0.0 <= t < self.t_max:
            raise DomainError(f"t={t} outside the validity window [0, {self.t_max})")
        if np.any(np.abs(x) > self.L * (1.0 + 1e-14)):
            raise DomainError(f"x outside [-{self.L}, {self.L}]")

    def contains(self, t: float) -> bool:
        return 0.0 <= t < self.t_max

    def u(self, x, t: float):
        x = np.asarray(x, dtype=float)
        self._check(x, t)
        s = 0.5 * t + 1.0
        out = np.where(x <= 0.0, 0.0, np.where(x < s * s, x / s, s))
        return out if out.ndim else float(out)

    def ux(self, x, t: float, with_flag: bool = False):
        """Derivative; at a kink the left-branch value is returned (flagged)."""
        x = np.asarray(x, dtype=float)
        self._check(x, t)
        s = 0.5 * t + 1.0
        out = np.where(x <= 0.0, 0.0, np.where(x <= s * s, 1.0 / s, 0.0))
        out = out if out.ndim else float(out)
        if with_flag:
            kink = (x == 0.0) | (x == s * s)
            return out, (kink if kink.ndim else bool(kink))
        return out

    def invariants(self, t: float):
        """``(H1, H2)`` along the solution: 1/2 and ``(t/2 + 1)/4``."""
        if not self.contains(t):
            raise DomainError(f"t={t} outside the validity window [0, {self.t_max})")
        s = 0.5 * t + 1.0
        # H1 = 1/2 * (1/s)^2 * s^2, H2 = 1/2 * int_0^{s^2} (x/s) / s^2 dx = s/4
        return 0.5, s / 4.0


_DEFAULT = {}


def _solution(L):
    if L not in _DEFAULT:
        _DEFAULT[L] = ExactSolution(L)
    return _DEFAULT[L]


def exact_u(x, t, L: float = 6.0):
    return _solution(L).u(x, t)


def exact_ux(x, t, L: float = 6.0):
    return _solution(L).ux(x, t)


def exact_invariants(t, L: float = 6.0):
    return _solution(L).invariants(t)


def linf_error(u, t: float, L: float | None = None, nodes=None) -> float:
    """Maximum nodal deviation from the exact solution.

    ``u`` is a ``CoeffVector`` (all mesh nodes are sampled, including the
    pinned boundary node) or an ``FdState`` (grid ``-L + k dx``).
    """
    if isinstance(u, CoeffVector):
        x = u.mesh.nodes
        values = u.nodal()
        L = u.mesh.L
    elif isinstance(u, FdState):
        values = u.values
        x = -u.dx * u.N / 2.0 + u.dx * np.arange(u.N + 1) if nodes is None else np.asarray(nodes)
        L = u.dx * u.N / 2.0 if L is None else L
    else:
        values = np.asarray(u, dtype=float)
        if nodes is None or L is None:
            raise ValueError("raw values need nodes and L")
        x = np.asarray(nodes, dtype=float)
    sol = _solution(float(L))
    x = np.clip(x, -sol.L, sol.L)
    return float(np.max(np.abs(values - sol.u(x, t))))
