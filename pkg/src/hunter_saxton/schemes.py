"""Time steppers and the trajectory driver.

The Galerkin steppers solve the reduced systems

    A (u1 - u0) = dt * g1(w, -B^{-1} C^T w)          (Scheme 1)
    D (u1 - u0) = dt * g2(w, D^{-T} A w)             (Scheme 2)

with ``w = (1 - theta) u0 + theta u1``. ``theta = 1/2`` gives the
energy-preserving midpoint schemes, ``theta = 1`` implicit Euler and
``theta = 0`` explicit Euler.

Newton runs on ``u1`` only. Its linear systems are solved through an
equivalent banded system that carries the auxiliary increment alongside
the ``u`` increment (interleaved), so no dense ``B^{-1}`` or ``D^{-T}``
ever appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from hunter_saxton import kernels
from hunter_saxton.errors import NewtonError, ParameterError, StepError
from hunter_saxton.fd import FdState, fd_derivative, fd_hamiltonian, fd_step
from hunter_saxton.fem import (
    X1,
    X2,
    AuxiliaryMap,
    CoeffVector,
    _NODE_OFFSET,
    _mass_blocks,
    _mixed_blocks,
    _stiffness_blocks,
    assemble_A,
    assemble_D,
    h1_energy,
    h2_energy,
    interpolate,
    nodal_average_slope,
)
from hunter_saxton.mesh import Mesh
from hunter_saxton.newton import NewtonResult, newton
from hunter_saxton.reference import ExactSolution

KINDS = ("fd", "galerkin1", "galerkin2", "euler_explicit", "euler_implicit")
ALIASES = {
    "g1": "galerkin1",
    "g2": "galerkin2",
    "euler-exp": "euler_explicit",
    "euler-imp": "euler_implicit",
}


def canonical_kind(kind: str) -> str:
    kind = ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ParameterError(f"unknown scheme {kind!r}; expected one of {', '.join(KINDS)}")
    return kind


@dataclass(frozen=True)
class SchemeConfig:
    kind: str
    dt: float
    t_end: float
    newton_tol: float = 1e-12
    newton_max_iter: int = 50

    def __post_init__(self):
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ParameterError(f"t_end must be positive, got {self.t_end}")
        if self.dt > self.t_end:
            raise ParameterError(f"dt={self.dt} exceeds t_end={self.t_end}")
        if not self.newton_tol > 0:
            raise ParameterError(f"newton_tol must be positive, got {self.newton_tol}")
        if int(self.newton_max_iter) != self.newton_max_iter or self.newton_max_iter < 1:
            raise ParameterError(f"newton_max_iter must be a positive integer, got {self.newton_max_iter}")

    @property
    def n_steps(self) -> int:
        return math.ceil(self.t_end / self.dt - 1e-9)


# -- augmented banded Newton systems ----------------------------------------


class _BlockLayout:
    """Scatter plan for a 2x2 block system with interleaved unknowns."""

    def __init__(self, N, row_spaces, col_spaces):
        self.N = N
        self.row_spaces = row_spaces
        self.col_spaces = col_spaces
        self._plans = {}
        self.lower = 0
        self.upper = 0
        e = np.arange(N)
        self._local = (
            np.broadcast_to(e[:, None, None] + np.array([0, 1])[None, :, None], (N, 2, 2)).ravel(),
            np.broadcast_to(e[:, None, None] + np.array([0, 1])[None, None, :], (N, 2, 2)).ravel(),
        )
        for bi in range(2):
            for bj in range(2):
                rows, cols, keep = self._dofs(bi, bj)
                d = rows - cols
                self.lower = max(self.lower, int(d.max()))
                self.upper = max(self.upper, int(-d.min()))

    def _dofs(self, bi, bj):
        nr, nc = self._local
        r = nr - _NODE_OFFSET[self.row_spaces[bi]]
        c = nc - _NODE_OFFSET[self.col_spaces[bj]]
        keep = (r >= 0) & (r < self.N) & (c >= 0) & (c < self.N)
        return 2 * r[keep] + bi, 2 * c[keep] + bj, keep

    def plan(self, bi, bj):
        if (bi, bj) not in self._plans:
            rows, cols, keep = self._dofs(bi, bj)
            n = 2 * self.N
            flat = (self.upper + rows - cols) * n + cols
            self._plans[bi, bj] = (flat, keep)
        return self._plans[bi, bj]

    @property
    def size(self):
        return (self.lower + self.upper + 1) * 2 * self.N

    def scatter(self, bi, bj, K, scale=1.0):
        """Band-storage contribution of element blocks ``K`` to block ``(bi, bj)``."""
        flat, keep = self.plan(bi, bj)
        vals = np.asarray(K).ravel()[keep]
        return np.bincount(flat, weights=scale * vals, minlength=self.size)

    def shape_ab(self, flat_ab):
        return flat_ab.reshape(self.lower + self.upper + 1, 2 * self.N)


class _GalerkinStepper:
    kind = ""
    aux_kind = ""
    # spaces of (equation rows, aux rows) and (u columns, aux columns)
    row_spaces = (X1, X2)
    col_spaces = (X1, X2)

    def __init__(self, mesh: Mesh, dt: float, theta: float = 0.5, tol: float = 1e-12, max_iter: int = 50):
        if dt == 0 or not math.isfinite(dt):
            raise ParameterError(f"dt must be finite and nonzero, got {dt}")
        self.mesh = mesh
        self.dt = float(dt)
        self.theta = float(theta)
        self.tol = tol
        self.max_iter = max_iter
        self.aux = AuxiliaryMap(mesh, self.aux_kind)
        self.layout = _BlockLayout(mesh.N, self.row_spaces, self.col_spaces)
        self._linear_ab = self._linear_blocks()
        self.last = None

    # subclasses provide: _time_matrix, _nodal_form, _element_jacobians,
    # _linear_blocks, _form_slice

    def aux_of(self, u):
        return self.aux(u)

    def residual(self, u0, u1):
        w = (1.0 - self.theta) * u0 + self.theta * u1
        return self._time_matrix @ (u1 - u0) - self.dt * self.form(w)

    def form(self, u):
        """Nonlinear right-hand side at ``u`` with its own auxiliary variable."""
        x = self.mesh.nodes
        U = np.concatenate(([0.0], u))
        Z = np.concatenate((self.aux(u), [0.0]))
        return self._nodal_form(x, U, Z)[self._form_slice]

    def _update(self, u0, u1, F):
        w = (1.0 - self.theta) * u0 + self.theta * u1
        x = self.mesh.nodes
        U = np.concatenate(([0.0], w))
        Z = np.concatenate((self.aux(w), [0.0]))
        KU, KZ = self._element_jacobians(x, U, Z)
        c = -self.dt * self.theta
        lay = self.layout
        flat = self._linear_ab + lay.scatter(0, 0, KU, c) + lay.scatter(0, 1, KZ, c)
        rhs = np.zeros(2 * self.mesh.N)
        rhs[0::2] = -F
        z = solve_banded((lay.lower, lay.upper), lay.shape_ab(flat), rhs, check_finite=False)
        return z[0::2]

    def advance(self, u0) -> tuple[np.ndarray, NewtonResult]:
        """One step on raw coefficient arrays."""
        u0 = np.asarray(u0, dtype=float)
        if self.theta == 0.0:
            u1 = u0 + self.dt * self._time_matrix.solve(self.form(u0))
            res = float(np.max(np.abs(self.residual(u0, u1))))
            self.last = NewtonResult(u1, 0, res)
            return u1, self.last
        result = newton(
            lambda v: self.residual(u0, v),
            lambda v, F: self._update(u0, v, F),
            u0,
            tol=self.tol,
            max_iter=self.max_iter,
        )
        self.last = result
        return result.x, result

    def step(self, u: CoeffVector) -> CoeffVector:
        if u.space != X1:
            raise ParameterError("the stepped variable must lie in X1")
        if u.mesh != self.mesh:
            raise ParameterError("coefficient vector lives on a different mesh")
        return CoeffVector(X1, self.advance(u.values)[0], self.mesh)


class Galerkin1Stepper(_GalerkinStepper):
    """``A (u1 - u0) = dt g1(w, q(w))`` with ``B q = -C^T w``."""

    kind = "galerkin1"
    aux_kind = "q"
    row_spaces = (X1, X2)
    col_spaces = (X1, X2)
    _form_slice = slice(1, None)

    def __init__(self, mesh, dt, theta=0.5, tol=1e-12, max_iter=50):
        self._time_matrix = assemble_A(mesh)
        self._time_matrix.factor()
        super().__init__(mesh, dt, theta, tol, max_iter)

    @staticmethod
    def _nodal_form(x, U, Z):
        return kernels.g1_nodal(x, U, Z)

    @staticmethod
    def _element_jacobians(x, U, Z):
        return kernels.g1_element_jacobians(x, U, Z)

    def _linear_blocks(self):
        lay = self.layout
        K = _stiffness_blocks(self.mesh)
        # [[A, .], [C^T, B]]; C^T has rows X2, columns X1 (stiffness is symmetric)
        return lay.scatter(0, 0, K) + lay.scatter(1, 0, K) + lay.scatter(1, 1, _mass_blocks(self.mesh))


class Galerkin2Stepper(_GalerkinStepper):
    """``D (u1 - u0) = dt g2(w, r(w))`` with ``D^T r = A w``."""

    kind = "galerkin2"
    aux_kind = "r"
    row_spaces = (X2, X1)
    col_spaces = (X1, X2)
    _form_slice = slice(None, -1)

    def __init__(self, mesh, dt, theta=0.5, tol=1e-12, max_iter=50):
        self._time_matrix = assemble_D(mesh)
        self._time_matrix.factor()
        super().__init__(mesh, dt, theta, tol, max_iter)

    @staticmethod
    def _nodal_form(x, U, Z):
        return kernels.g2_nodal(x, U, Z)

    @staticmethod
    def _element_jacobians(x, U, Z):
        return kernels.g2_element_jacobians(x, U, Z)

    def _linear_blocks(self):
        lay = self.layout
        Dm = _mixed_blocks(self.mesh)
        # [[D, .], [-A, D^T]]; D^T blocks are the transposed element blocks
        return (
            lay.scatter(0, 0, Dm)
            + lay.scatter(1, 0, _stiffness_blocks(self.mesh), -1.0)
            + lay.scatter(1, 1, np.transpose(Dm, (0, 2, 1)))
        )


class FdStepper:
    """Adapter giving the finite difference scheme the stepper interface."""

    kind = "fd"

    def __init__(self, mesh: Mesh, dt: float, tol: float = 1e-12, max_iter: int = 50):
        if not mesh.is_uniform():
            raise ParameterError("the finite difference scheme requires a uniform mesh")
        self.mesh = mesh
        self.dx = 2.0 * mesh.L / mesh.N
        self.dt = float(dt)
        self.tol = tol
        self.max_iter = max_iter
        self.last = None

    def advance(self, u0):
        state = FdState(np.concatenate(([0.0], u0)), self.dx, self.dt)
        new, info = fd_step(state, tol=self.tol, max_iter=self.max_iter, with_info=True)
        self.last = info
        return new.values[1:], info


def make_stepper(kind: str, mesh: Mesh, dt: float, tol: float = 1e-12, max_iter: int = 50):
    kind = canonical_kind(kind)
    if kind == "fd":
        return FdStepper(mesh, dt, tol, max_iter)
    if kind == "galerkin1":
        return Galerkin1Stepper(mesh, dt, 0.5, tol, max_iter)
    if kind == "galerkin2":
        return Galerkin2Stepper(mesh, dt, 0.5, tol, max_iter)
    if kind == "euler_explicit":
        return Galerkin1Stepper(mesh, dt, 0.0, tol, max_iter)
    return Galerkin1Stepper(mesh, dt, 1.0, tol, max_iter)


_STEPPERS = {}


def _cached(kind, mesh, dt, tol, max_iter):
    key = (kind, mesh, float(dt), tol, max_iter)
    if key not in _STEPPERS:
        if len(_STEPPERS) > 32:
            _STEPPERS.clear()
        _STEPPERS[key] = make_stepper(kind, mesh, dt, tol, max_iter)
    return _STEPPERS[key]


def galerkin1_step(u: CoeffVector, dt: float, tol: float = 1e-12, max_iter: int = 50) -> CoeffVector:
    return _cached("galerkin1", u.mesh, dt, tol, max_iter).step(u)


def galerkin2_step(u: CoeffVector, dt: float, tol: float = 1e-12, max_iter: int = 50) -> CoeffVector:
    return _cached("galerkin2", u.mesh, dt, tol, max_iter).step(u)


def euler_explicit_step(u: CoeffVector, dt: float) -> CoeffVector:
    return _cached("euler_explicit", u.mesh, dt, 1e-12, 50).step(u)


def euler_implicit_step(u: CoeffVector, dt: float, tol: float = 1e-12, max_iter: int = 50) -> CoeffVector:
    return _cached("euler_implicit", u.mesh, dt, tol, max_iter).step(u)


# -- trajectories -----------------------------------------------------------


@dataclass
class StepRecord:
    n: int
    t: float
    values: np.ndarray | None
    H1: float
    H2: float
    linf_error: float | None
    newton_iters: int


@dataclass
class Trajectory:
    kind: str
    mesh: Mesh
    config: SchemeConfig
    initial: StepRecord
    steps: list = field(default_factory=list)
    final_values: np.ndarray | None = None
    horizon_exceeded: bool = False

    def __len__(self):
        return len(self.steps)

    def records(self):
        """Initial state followed by every step."""
        return [self.initial, *self.steps]

    @property
    def H1(self) -> np.ndarray:
        return np.array([r.H1 for r in self.records()])

    def h1_drift(self) -> float:
        """Largest deviation of the scheme's own energy from its initial value."""
        return float(np.max(np.abs(self.H1 - self.initial.H1)))

    def final(self) -> CoeffVector:
        return CoeffVector(X1, self.final_values, self.mesh)


def discrete_energy(kind: str, mesh: Mesh, values) -> float:
    """The invariant each scheme conserves: the grid energy for FD, else ``1/2 int u_x^2``."""
    if kind == "fd":
        return fd_hamiltonian(np.concatenate(([0.0], values)), mesh.h[0])
    return h1_energy(CoeffVector(X1, values, mesh))


def _linf(mesh, values, exact, t):
    if exact is None or not exact.contains(t):
        return None
    return float(np.max(np.abs(np.concatenate(([0.0], values)) - exact.u(mesh.nodes, t))))


def run(config: SchemeConfig, mesh: Mesh, initial=None, exact: ExactSolution | bool = True,
        store_values: bool = False, stepper=None) -> Trajectory:
    """Integrate from ``initial`` to ``config.t_end``.

    ``initial`` is a callable of ``x``, an X1 ``CoeffVector`` or raw
    coefficients; by default the exact solution at ``t = 0``. ``exact=True``
    tracks the nodal error against the exact solution while it is valid.
    """
    kind = config.kind
    if kind == "fd" and not mesh.is_uniform():
        raise ParameterError("the finite difference scheme requires a uniform mesh")
    if exact is True:
        exact = ExactSolution(mesh.L) if mesh.L > 1.0 else None
    elif exact is False:
        exact = None
    if initial is None:
        if exact is None:
            raise ParameterError("no initial data and no exact solution to take it from")
        initial = lambda x: exact.u(x, 0.0)  # noqa: E731
    if isinstance(initial, CoeffVector):
        u = initial.values.copy()
    elif callable(initial):
        u = interpolate(initial, mesh, X1).values
    else:
        u = np.asarray(initial, dtype=float).copy()
        if u.shape != (mesh.N,):
            raise ParameterError(f"initial coefficients need shape ({mesh.N},), got {u.shape}")

    if stepper is None:
        stepper = make_stepper(kind, mesh, config.dt, config.newton_tol, config.newton_max_iter)

    def record(n, values, iters):
        t = n * config.dt
        return StepRecord(
            n=n,
            t=t,
            values=values.copy() if store_values else None,
            H1=discrete_energy(kind, mesh, values),
            H2=h2_energy(CoeffVector(X1, values, mesh)),
            linf_error=_linf(mesh, values, exact, t),
            newton_iters=iters,
        )

    traj = Trajectory(kind, mesh, config, record(0, u, 0))
    for n in range(1, config.n_steps + 1):
        try:
            u, info = stepper.advance(u)
        except (NewtonError, np.linalg.LinAlgError, ValueError) as exc:
            raise StepError(n, exc) from exc
        if not np.all(np.isfinite(u)):
            raise StepError(n, "solution is no longer finite")
        traj.steps.append(record(n, u, info.iterations))
    traj.final_values = u
    traj.horizon_exceeded = exact is not None and not exact.contains(config.n_steps * config.dt)
    return traj


def derivative_profiles(kind: str, mesh: Mesh, values, dt: float | None = None):
    """Nodal ``(ux_element, ux_recovered)`` for output.

    ``ux_element[k]`` is the slope of the element right of node ``k`` (the
    last node repeats the last element). ``ux_recovered`` is the central
    difference for FD, the auxiliary ``r = D^{-T} A u`` for Scheme 2 and
    the average of adjacent slopes otherwise.
    """
    kind = canonical_kind(kind)
    u = CoeffVector(X1, values, mesh)
    s = u.slopes()
    ux_element = np.append(s, s[-1])
    if kind == "fd":
        recovered = fd_derivative(u.nodal(), mesh.h[0])
    elif kind == "galerkin2":
        recovered = np.append(AuxiliaryMap(mesh, "r")(values), 0.0)
    else:
        recovered = nodal_average_slope(u)
    return ux_element, recovered


def total_variation(v) -> float:
    return float(np.sum(np.abs(np.diff(np.asarray(v, dtype=float)))))
