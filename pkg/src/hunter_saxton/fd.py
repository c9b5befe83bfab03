"""Energy-preserving finite difference scheme on a uniform grid.

Grid values ``u_0..u_N`` with ``u_0 = 0``. Ghost values outside the grid
follow ``u_{-1} = u_1``, ``u_{N+1} = u_{N-1}`` and
``u_{N+2} = 2 u_N - u_{N-2}``. The scheme is the midpoint discretisation

    d2 (u^{n+1} - u^n) / dt = -(d2 w)(d1 w) - d1 (w d2 w),   w = (u^n + u^{n+1}) / 2

with central differences ``d1`` and ``d2``, imposed at ``k = 1..N``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from hunter_saxton import kernels
from hunter_saxton.errors import ParameterError
from hunter_saxton.newton import newton


@dataclass(frozen=True, eq=False)
class FdState:
    """Grid function on a uniform grid. ``dt`` may be negative for backward steps."""

    values: np.ndarray
    dx: float
    dt: float

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 4:
            raise ParameterError("an FD state needs at least 4 grid values")
        if values[0] != 0.0:
            raise ParameterError(f"u_0 must be exactly 0, got {values[0]}")
        if not np.all(np.isfinite(values)):
            raise ParameterError("FD state values must be finite")
        if not self.dx > 0:
            raise ParameterError(f"dx must be positive, got {self.dx}")
        if self.dt == 0 or not np.isfinite(self.dt):
            raise ParameterError(f"dt must be finite and nonzero, got {self.dt}")
        object.__setattr__(self, "values", values)

    @property
    def N(self) -> int:
        return self.values.size - 1


def fd_residual(state: FdState, u_new) -> np.ndarray:
    """Residual of the scheme for a candidate ``u_new`` (scaled by ``dx**2``)."""
    u_new = np.asarray(u_new, dtype=float)
    return kernels.fd_residual(state.values, u_new, state.dx, state.dt)


def fd_step(state: FdState, tol: float = 1e-12, max_iter: int = 50, with_info: bool = False):
    """Advance one step; Newton from the previous value.

    Returns the new ``FdState`` or, with ``with_info=True``, the pair
    ``(state, NewtonResult)``.
    """
    u0 = state.values
    dx, dt = state.dx, state.dt

    def full(x):
        return np.concatenate(([0.0], x))

    def residual(x):
        return kernels.fd_residual(u0, full(x), dx, dt)

    def update(x, F):
        ab = kernels.fd_jacobian_banded(u0, full(x), dx, dt)
        return solve_banded((2, 2), ab, -F, check_finite=False)

    result = newton(residual, update, u0[1:], tol=tol, max_iter=max_iter)
    new = FdState(full(result.x), dx, dt)
    return (new, result) if with_info else new


def _ghost(u):
    return np.concatenate(([u[1]], u, [u[-2]]))


def fd_hamiltonian(state_or_values, dx=None) -> float:
    """Trapezoidal discrete energy with forward/backward differences."""
    if isinstance(state_or_values, FdState):
        u, dx = state_or_values.values, state_or_values.dx
    else:
        u = np.asarray(state_or_values, dtype=float)
        if dx is None:
            raise ParameterError("dx is required when passing raw values")
    e = _ghost(u)
    fwd = (e[2:] - e[1:-1]) / dx
    bwd = (e[1:-1] - e[:-2]) / dx
    f = 0.5 * (fwd**2 + bwd**2) / 2.0
    weights = np.ones(u.size)
    weights[0] = weights[-1] = 0.5
    return float(dx * np.sum(weights * f))


def fd_derivative(u, dx) -> np.ndarray:
    """Central-difference ``u_x`` at every grid point, using the ghost rules."""
    e = _ghost(np.asarray(u, dtype=float))
    return (e[2:] - e[:-2]) / (2.0 * dx)
