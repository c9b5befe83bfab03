"""Newton iteration shared by the implicit steppers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hunter_saxton.errors import NewtonError

_EPS = np.finfo(float).eps


@dataclass
class NewtonResult:
    x: np.ndarray
    iterations: int
    residual: float


def newton(residual, solve_update, x0, tol=1e-12, max_iter=50) -> NewtonResult:
    """Solve ``residual(x) = 0``.

    ``solve_update(x, F)`` returns ``delta`` with ``J(x) delta = -F``.
    Converges when the residual infinity norm drops to ``tol``, or when the
    update stalls at round-off level after the residual has stopped
    improving.
    """
    x = np.array(x0, dtype=float)
    F = residual(x)
    res = float(np.max(np.abs(F), initial=0.0))
    for it in range(max_iter + 1):
        if res <= tol:
            return NewtonResult(x, it, res)
        if it == max_iter:
            break
        delta = solve_update(x, F)
        if not np.all(np.isfinite(delta)):
            raise NewtonError("Newton update is not finite", it + 1, res)
        x = x + delta
        F = residual(x)
        new_res = float(np.max(np.abs(F), initial=0.0))
        step = float(np.max(np.abs(delta), initial=0.0))
        scale = max(1.0, float(np.max(np.abs(x), initial=0.0)))
        if step <= 8.0 * _EPS * scale and new_res <= 1e3 * tol:
            return NewtonResult(x, it + 1, new_res)
        res = new_res
    raise NewtonError("Newton iteration did not converge", max_iter, res)
