"""P1 finite-element spaces, assembly and the nonlinear forms.

Two spaces of continuous piecewise-linear functions live on a mesh with
nodes ``x_0..x_N``:

* ``X1`` vanishes at ``x_0 = -L``; dof ``i`` is the hat at node ``i + 1``.
* ``X2`` vanishes at ``x_N = L``; dof ``i`` is the hat at node ``i``.

Both have ``N`` degrees of freedom. With these orderings the mixed matrix
``D_ij = (varphi_i, (phi_j)_x)`` is lower triangular.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hunter_saxton import kernels
from hunter_saxton.banded import BandedMatrix
from hunter_saxton.errors import ParameterError
from hunter_saxton.mesh import Mesh

X1 = "X1"
X2 = "X2"

# first node carrying a dof in each space
_NODE_OFFSET = {X1: 1, X2: 0}


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0):
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on [a, b]."""
    t, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * t + 0.5 * (b + a), 0.5 * (b - a) * w


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """Coefficients of a P1 function in ``X1`` or ``X2``."""

    space: str
    values: np.ndarray
    mesh: Mesh

    def __post_init__(self):
        if self.space not in _NODE_OFFSET:
            raise ParameterError(f"unknown space {self.space!r}")
        values = np.array(self.values, dtype=float)
        if values.shape != (self.mesh.N,):
            raise ParameterError(f"{self.space} on a mesh with N={self.mesh.N} needs {self.mesh.N} coefficients, got {values.shape}")
        object.__setattr__(self, "values", values)

    def nodal(self) -> np.ndarray:
        """Values at all ``N + 1`` nodes, including the pinned boundary zero."""
        if self.space == X1:
            return np.concatenate(([0.0], self.values))
        return np.concatenate((self.values, [0.0]))

    def dof_nodes(self) -> np.ndarray:
        off = _NODE_OFFSET[self.space]
        return self.mesh.nodes[off : off + self.mesh.N]

    def slopes(self) -> np.ndarray:
        """Constant derivative on each element."""
        return np.diff(self.nodal()) / self.mesh.h

    def __mul__(self, c):
        return CoeffVector(self.space, c * self.values, self.mesh)

    __rmul__ = __mul__


def _check_same_mesh(*vecs):
    m = vecs[0].mesh
    for v in vecs[1:]:
        if v.mesh is not m and v.mesh != m:
            raise ParameterError("coefficient vectors live on different meshes")


def _check_space(v, space, name):
    if v.space != space:
        raise ParameterError(f"{name} must lie in {space}, got {v.space}")


# -- assembly ---------------------------------------------------------------


def element_triplets(K, N, row_space, col_space):
    """Map element blocks ``K[e, a, b]`` to (row, col, value) dof triplets."""
    e = np.arange(N)
    rows = (e[:, None, None] + np.array([0, 1])[None, :, None]) - _NODE_OFFSET[row_space]
    cols = (e[:, None, None] + np.array([0, 1])[None, None, :]) - _NODE_OFFSET[col_space]
    rows = np.broadcast_to(rows, K.shape).ravel()
    cols = np.broadcast_to(cols, K.shape).ravel()
    vals = np.asarray(K).ravel()
    keep = (rows >= 0) & (rows < N) & (cols >= 0) & (cols < N)
    return rows[keep], cols[keep], vals[keep]


def assemble_elements(K, N, row_space, col_space, symmetric=False) -> BandedMatrix:
    """Assemble element blocks into an ``N x N`` banded dof matrix."""
    shift = _NODE_OFFSET[row_space] - _NODE_OFFSET[col_space]
    upper = max(0, 1 + shift)
    lower = max(0, 1 - shift)
    rows, cols, vals = element_triplets(K, N, row_space, col_space)
    ab = np.zeros((lower + upper + 1, N))
    np.add.at(ab, (upper + rows - cols, cols), vals)
    return BandedMatrix(ab, lower, upper, symmetric=symmetric)


def _stiffness_blocks(mesh):
    inv_h = 1.0 / mesh.h
    return inv_h[:, None, None] * np.array([[1.0, -1.0], [-1.0, 1.0]])


def _mass_blocks(mesh):
    return (mesh.h / 6.0)[:, None, None] * np.array([[2.0, 1.0], [1.0, 2.0]])


def _mixed_blocks(mesh):
    # int psi_a (psi_b)_x over one element; independent of h
    return np.broadcast_to(np.array([[-0.5, 0.5], [-0.5, 0.5]]), (mesh.N, 2, 2))


def assemble_A(mesh: Mesh) -> BandedMatrix:
    """Stiffness matrix ``((phi_i)_x, (phi_j)_x)`` on X1 (tridiagonal SPD)."""
    return assemble_elements(_stiffness_blocks(mesh), mesh.N, X1, X1, symmetric=True)


def assemble_B(mesh: Mesh) -> BandedMatrix:
    """Mass matrix ``(varphi_i, varphi_j)`` on X2 (tridiagonal SPD)."""
    return assemble_elements(_mass_blocks(mesh), mesh.N, X2, X2, symmetric=True)


def assemble_C(mesh: Mesh) -> BandedMatrix:
    """Mixed stiffness ``((phi_i)_x, (varphi_j)_x)``; rows X1, columns X2."""
    return assemble_elements(_stiffness_blocks(mesh), mesh.N, X1, X2)


def assemble_D(mesh: Mesh) -> BandedMatrix:
    """Mixed matrix ``(varphi_i, (phi_j)_x)``; rows X2, columns X1.

    Lower triangular with 1/2 on the diagonal and -1/2 two below it.
    """
    return assemble_elements(_mixed_blocks(mesh), mesh.N, X2, X1)


# -- auxiliary variables ----------------------------------------------------


class AuxiliaryMap:
    """Linear map from ``u`` in X1 to an auxiliary variable in X2.

    ``kind="q"``: ``q = -B^{-1} C^T u`` (second-derivative surrogate).
    ``kind="r"``: ``r = D^{-T} A u`` (first-derivative surrogate).
    Matrices are factored once on construction.
    """

    def __init__(self, mesh: Mesh, kind: str):
        if kind not in ("q", "r"):
            raise ParameterError(f"unknown auxiliary map {kind!r}")
        self.mesh = mesh
        self.kind = kind
        if kind == "q":
            self._solve_mat = assemble_B(mesh)
            self._rhs_mat = assemble_C(mesh).T
            self._sign = -1.0
        else:
            self._solve_mat = assemble_D(mesh).T
            self._rhs_mat = assemble_A(mesh)
            self._sign = 1.0
        self._solve_mat.factor()

    def __call__(self, u):
        values = u.values if isinstance(u, CoeffVector) else np.asarray(u, dtype=float)
        out = self._sign * self._solve_mat.solve(self._rhs_mat @ values)
        if isinstance(u, CoeffVector):
            return CoeffVector(X2, out, self.mesh)
        return out

    def dense(self) -> np.ndarray:
        """Explicit matrix of the map (for testing; O(N^2) memory)."""
        rhs = self._rhs_mat.to_dense()
        return self._sign * self._solve_mat.solve(rhs)


# -- nonlinear forms --------------------------------------------------------


def eval_g1(u: CoeffVector, q: CoeffVector) -> np.ndarray:
    """``(q u_x + (q u)_x, phi_i)`` for every X1 basis function."""
    _check_space(u, X1, "u")
    _check_space(q, X2, "q")
    _check_same_mesh(u, q)
    return kernels.g1_nodal(u.mesh.nodes, u.nodal(), q.nodal())[1:]


def eval_g2(u: CoeffVector, r: CoeffVector) -> np.ndarray:
    """``-1/2 (u r_x + (u r)_x, varphi_i)`` for every X2 basis function."""
    _check_space(u, X1, "u")
    _check_space(r, X2, "r")
    _check_same_mesh(u, r)
    return kernels.g2_nodal(u.mesh.nodes, u.nodal(), r.nodal())[:-1]


def g1_partials(u: CoeffVector, q: CoeffVector):
    """Banded partial Jacobians ``(dg1/du, dg1/dq)``."""
    _check_same_mesh(u, q)
    N = u.mesh.N
    KU, KQ = kernels.g1_element_jacobians(u.mesh.nodes, u.nodal(), q.nodal())
    return assemble_elements(KU, N, X1, X1), assemble_elements(KQ, N, X1, X2)


def g2_partials(u: CoeffVector, r: CoeffVector):
    """Banded partial Jacobians ``(dg2/du, dg2/dr)``."""
    _check_same_mesh(u, r)
    N = u.mesh.N
    KU, KR = kernels.g2_element_jacobians(u.mesh.nodes, u.nodal(), r.nodal())
    return assemble_elements(KU, N, X2, X1), assemble_elements(KR, N, X2, X2)


def _map_matrix(dmap):
    if isinstance(dmap, AuxiliaryMap):
        return dmap.dense()
    if isinstance(dmap, BandedMatrix):
        return dmap.to_dense()
    return np.asarray(dmap, dtype=float)


def jacobian_g1(u: CoeffVector, q: CoeffVector, dq_du) -> BandedMatrix:
    """Jacobian of ``u -> g1(u, q(u))`` where ``q`` depends linearly on ``u``.

    The composition with ``B^{-1}`` fills the band; the bandwidth of the
    result is whatever the product produces.
    """
    Gu, Gq = g1_partials(u, q)
    return BandedMatrix.from_dense(Gu.to_dense() + Gq.to_dense() @ _map_matrix(dq_du))


def jacobian_g2(u: CoeffVector, r: CoeffVector, dr_du) -> BandedMatrix:
    """Jacobian of ``u -> g2(u, r(u))``."""
    Gu, Gr = g2_partials(u, r)
    return BandedMatrix.from_dense(Gu.to_dense() + Gr.to_dense() @ _map_matrix(dr_du))


# -- energies and interpolation ---------------------------------------------


def h1_energy(u: CoeffVector) -> float:
    """``1/2 int u_x^2``; exact for P1."""
    s = u.slopes()
    return 0.5 * float(np.sum(u.mesh.h * s * s))


def h2_energy(u: CoeffVector) -> float:
    """``1/2 int u u_x^2`` by two-point Gauss per element (exact for P1)."""
    s = u.slopes()
    U = u.nodal()
    h = u.mesh.h
    t, w = gauss_legendre(2, 0.0, 1.0)
    total = 0.0
    for ti, wi in zip(t, w):
        total += np.sum(wi * h * (U[:-1] * (1.0 - ti) + U[1:] * ti) * s * s)
    return 0.5 * float(total)


def interpolate(f, mesh: Mesh, space: str = X1, atol: float = 1e-12) -> CoeffVector:
    """Nodal interpolant of ``f`` in ``space``."""
    if space not in _NODE_OFFSET:
        raise ParameterError(f"unknown space {space!r}")
    x = mesh.nodes
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.array([float(f(xi)) for xi in x])
    if space == X1:
        if abs(fx[0]) > atol:
            raise ParameterError(f"X1 functions vanish at x=-L, but f(-L)={fx[0]}")
        return CoeffVector(X1, fx[1:], mesh)
    if abs(fx[-1]) > atol:
        raise ParameterError(f"X2 functions vanish at x=L, but f(L)={fx[-1]}")
    return CoeffVector(X2, fx[:-1], mesh)


def nodal_average_slope(u: CoeffVector) -> np.ndarray:
    """Nodal derivative from averaging the two adjacent element slopes."""
    s = u.slopes()
    out = np.empty(s.size + 1)
    out[0], out[-1] = s[0], s[-1]
    out[1:-1] = 0.5 * (s[:-1] + s[1:])
    return out
