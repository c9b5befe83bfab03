"""One-dimensional meshes of the interval [-L, L]."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from hunter_saxton.errors import MeshFormatError, ParameterError


class Mesh:
    """Immutable ordered node array ``x_0 = -L < x_1 < ... < x_N = L``."""

    __slots__ = ("_nodes", "_h", "L")

    def __init__(self, nodes):
        nodes = np.array(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 4:
            raise ParameterError("a mesh needs at least 4 nodes (N >= 3 elements)")
        if not np.all(np.isfinite(nodes)):
            raise ParameterError("mesh nodes must be finite")
        h = np.diff(nodes)
        if np.any(h <= 0.0):
            raise ParameterError("mesh nodes must be strictly increasing")
        L = nodes[-1]
        if not L > 0.0 or nodes[0] != -L:
            raise ParameterError(f"mesh must span a symmetric interval [-L, L], got [{nodes[0]}, {nodes[-1]}]")
        nodes.flags.writeable = False
        h.flags.writeable = False
        self._nodes = nodes
        self._h = h
        self.L = float(L)

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    @property
    def h(self) -> np.ndarray:
        """Element lengths ``h_k = x_{k+1} - x_k``."""
        return self._h

    @property
    def N(self) -> int:
        """Number of elements."""
        return self._nodes.size - 1

    def is_uniform(self, rtol=1e-10) -> bool:
        return bool(np.all(np.abs(self._h - 2.0 * self.L / self.N) <= rtol * 2.0 * self.L / self.N))

    def __eq__(self, other):
        if not isinstance(other, Mesh):
            return NotImplemented
        return self is other or np.array_equal(self._nodes, other._nodes)

    def __hash__(self):
        return hash(self._nodes.tobytes())

    def __repr__(self):
        return f"Mesh(L={self.L}, N={self.N})"


def uniform_mesh(L: float, N: int) -> Mesh:
    """Uniform mesh with spacing ``2L/N``."""
    if not (np.isfinite(L) and L > 0):
        raise ParameterError(f"L must be positive, got {L}")
    if int(N) != N or N < 3:
        raise ParameterError(f"N must be an integer >= 3, got {N}")
    N = int(N)
    nodes = -L + np.arange(N + 1) * (2.0 * L / N)
    nodes[-1] = L
    return Mesh(nodes)


def graded_mesh(L: float, N: int, focus_interval, fraction: float) -> Mesh:
    """Two-density mesh refined on ``focus_interval``.

    ``ceil(fraction*N)`` elements are spread uniformly over the focus
    interval; the remaining ones are split between the two outer pieces in
    proportion to their lengths.
    """
    if not (np.isfinite(L) and L > 0):
        raise ParameterError(f"L must be positive, got {L}")
    if int(N) != N or N < 3:
        raise ParameterError(f"N must be an integer >= 3, got {N}")
    N = int(N)
    a, b = map(float, focus_interval)
    if not (-L < a < b < L):
        raise ParameterError(f"focus interval ({a}, {b}) must be a nonempty strict subset of (-{L}, {L})")
    if not 0.0 < fraction < 1.0:
        raise ParameterError(f"fraction must lie in (0, 1), got {fraction}")
    if fraction * N < 2 or (1.0 - fraction) * N < 2:
        raise ParameterError("fraction*N and (1-fraction)*N must both be >= 2")

    n_in = math.ceil(fraction * N - 1e-12)
    n_out = N - n_in
    left_len, right_len = a + L, L - b
    n_left = round(n_out * left_len / (left_len + right_len))
    n_left = min(max(n_left, 1), n_out - 1)
    n_right = n_out - n_left

    nodes = np.concatenate(
        [
            np.linspace(-L, a, n_left + 1)[:-1],
            np.linspace(a, b, n_in + 1)[:-1],
            np.linspace(b, L, n_right + 1),
        ]
    )
    nodes[0], nodes[-1] = -L, L
    return Mesh(nodes)


def format_mesh(mesh: Mesh) -> str:
    # repr() of a Python float round-trips exactly
    return "".join(f"{x!r}\n" for x in mesh.nodes.tolist())


def write_mesh(mesh: Mesh, path) -> None:
    Path(path).write_text(format_mesh(mesh), encoding="utf-8")


def load_mesh(path) -> Mesh:
    """Read a mesh file: one ascending coordinate per line."""
    text = Path(path).read_text(encoding="utf-8")
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip().replace("−", "-")
        if not line:
            continue
        try:
            x = float(line)
        except ValueError:
            raise MeshFormatError(f"cannot parse {raw!r} as a number", lineno) from None
        if not math.isfinite(x):
            raise MeshFormatError(f"non-finite coordinate {raw!r}", lineno)
        if values and x <= values[-1][1]:
            raise MeshFormatError(f"coordinate {x} is not greater than the previous one", lineno)
        values.append((lineno, x))
    if len(values) < 4:
        raise MeshFormatError(f"need at least 4 nodes, found {len(values)}")
    nodes = [x for _, x in values]
    if nodes[0] != -nodes[-1]:
        raise MeshFormatError(f"first node {nodes[0]} must equal minus the last node {nodes[-1]}", values[0][0])
    return Mesh(nodes)
