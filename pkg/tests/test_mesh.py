import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hunter_saxton.errors import MeshFormatError, ParameterError
from hunter_saxton.mesh import Mesh, format_mesh, graded_mesh, load_mesh, uniform_mesh, write_mesh


def test_uniform_reference_grid():
    m = uniform_mesh(6, 200)
    assert m.nodes.size == 201
    np.testing.assert_allclose(m.h, 0.06, rtol=1e-12)
    assert m.nodes[0] == -6 and m.nodes[-1] == 6


@pytest.mark.parametrize(
    "L, N, expected",
    [(1, 4, [-1, -0.5, 0, 0.5, 1]), (6, 3, [-6, -2, 2, 6])],
)
def test_uniform_nodes(L, N, expected):
    np.testing.assert_allclose(uniform_mesh(L, N).nodes, expected, atol=1e-15)


@pytest.mark.parametrize("L, N", [(0, 10), (-1, 10), (1, 2), (1, 2.5)])
def test_uniform_rejects(L, N):
    with pytest.raises(ParameterError):
        uniform_mesh(L, N)


def _count_inside(m, a, b):
    mids = 0.5 * (m.nodes[1:] + m.nodes[:-1])
    return int(np.sum((mids > a) & (mids < b)))


def test_graded_counts():
    m = graded_mesh(6, 200, (0, 3), 0.75)
    assert m.N == 200
    assert _count_inside(m, 0, 3) == 150
    assert 0.0 in m.nodes and 3.0 in m.nodes
    inside = m.h[(m.nodes[:-1] >= 0) & (m.nodes[1:] <= 3)]
    np.testing.assert_allclose(inside, 0.02, rtol=1e-10)
    assert np.all(m.h[(m.nodes[1:] <= 0) | (m.nodes[:-1] >= 3)] > 0.15)


def test_graded_small():
    m = graded_mesh(6, 4, (0, 3), 0.5)
    assert _count_inside(m, 0, 3) == 2
    assert m.N == 4


@pytest.mark.parametrize("focus", [(-6, 6), (-7, 1), (2, 1), (1, 1)])
def test_graded_rejects_focus(focus):
    with pytest.raises(ParameterError):
        graded_mesh(6, 200, focus, 0.75)


def test_graded_rejects_fraction():
    with pytest.raises(ParameterError):
        graded_mesh(6, 4, (0, 3), 0.9)


def test_mesh_invariants():
    with pytest.raises(ParameterError):
        Mesh([-1, 0, 1])
    with pytest.raises(ParameterError):
        Mesh([-1, 0, 0, 1])
    with pytest.raises(ParameterError):
        Mesh([-1, 0, 0.5, 2])


def test_load_simple(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("-1\n0\n0.5\n1\n")
    m = load_mesh(p)
    assert m.N == 3 and m.L == 1.0


def test_load_unicode_minus(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("−1\n0\n0.5\n1\n", encoding="utf-8")
    assert load_mesh(p).L == 1.0


def test_load_non_monotone(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("-1\n0.5\n0\n1\n")
    with pytest.raises(MeshFormatError) as exc:
        load_mesh(p)
    assert exc.value.line == 3


def test_load_parse_error(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("-1\n0\nabc\n1\n")
    with pytest.raises(MeshFormatError) as exc:
        load_mesh(p)
    assert exc.value.line == 3


def test_load_too_few(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("-1\n0\n1\n")
    with pytest.raises(MeshFormatError):
        load_mesh(p)


def test_load_roundtrip_uniform(tmp_path):
    m = uniform_mesh(6, 200)
    p = tmp_path / "u.txt"
    write_mesh(m, p)
    assert len(p.read_text().splitlines()) == 201
    assert load_mesh(p) == m


@settings(max_examples=60, deadline=None)
@given(
    L=st.floats(0.5, 50),
    N=st.integers(8, 400),
    a=st.floats(0.05, 0.45),
    b=st.floats(0.55, 0.95),
    frac=st.floats(0.3, 0.7),
)
def test_graded_properties(tmp_path_factory, L, N, a, b, frac):
    m = graded_mesh(L, N, (-L + 2 * L * a, -L + 2 * L * b), frac)
    assert m.N == N
    assert abs(np.sum(m.h) - 2 * L) <= 1e-12 * 2 * L
    p = tmp_path_factory.mktemp("m") / "g.txt"
    p.write_text(format_mesh(m))
    assert load_mesh(p) == m


@settings(max_examples=40, deadline=None)
@given(L=st.floats(0.1, 100), N=st.integers(3, 1000))
def test_uniform_length_sum(L, N):
    m = uniform_mesh(L, N)
    assert abs(np.sum(m.h) - 2 * L) <= 1e-12 * 2 * L
