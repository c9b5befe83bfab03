import numpy as np
import pytest

from hunter_saxton.errors import ParameterError, StepError
from hunter_saxton.fem import X1, CoeffVector, h1_energy, interpolate
from hunter_saxton.mesh import Mesh, graded_mesh, uniform_mesh
from hunter_saxton.reference import ExactSolution
from hunter_saxton.schemes import (
    KINDS,
    SchemeConfig,
    derivative_profiles,
    discrete_energy,
    euler_explicit_step,
    euler_implicit_step,
    galerkin1_step,
    galerkin2_step,
    make_stepper,
    run,
    total_variation,
)

from oracles import DenseScheme, random_mesh_nodes, solve_dense

EX = ExactSolution(6)


def rarefaction_initial(N=200):
    m = uniform_mesh(6, N)
    return interpolate(lambda x: EX.u(x, 0.0), m, X1)


@pytest.mark.parametrize("step", [galerkin1_step, galerkin2_step, euler_implicit_step, euler_explicit_step])
def test_zero_fixed_point(step):
    z = CoeffVector(X1, np.zeros(10), uniform_mesh(1, 10))
    assert np.all(step(z, 0.01).values == 0)


@pytest.mark.parametrize("step", [galerkin1_step, galerkin2_step])
def test_one_step_conserves(step):
    u = rarefaction_initial()
    new = step(u, 0.01)
    assert abs(h1_energy(new) - h1_energy(u)) <= 1e-10
    assert np.max(np.abs(new.values - u.values)) > 1e-4


@pytest.mark.parametrize("seed", range(4))
def test_galerkin1_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    nodes = random_mesh_nodes(rng, 6, L=2.0)
    m = Mesh(nodes)
    oracle = DenseScheme(nodes)
    u0 = 0.1 * rng.normal(size=6)
    dt = 0.05
    got = galerkin1_step(CoeffVector(X1, u0, m), dt).values
    want, res = solve_dense(lambda v: oracle.residual_g1(u0, v, dt), u0)
    assert res < 1e-11
    np.testing.assert_allclose(got, want, atol=1e-10)


@pytest.mark.parametrize("seed", range(4))
def test_galerkin2_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed + 100)
    nodes = random_mesh_nodes(rng, 6, L=2.0)
    m = Mesh(nodes)
    oracle = DenseScheme(nodes)
    u0 = 0.1 * rng.normal(size=6)
    dt = 0.05
    got = galerkin2_step(CoeffVector(X1, u0, m), dt).values
    want, res = solve_dense(lambda v: oracle.residual_g2(u0, v, dt), u0)
    assert res < 1e-11
    np.testing.assert_allclose(got, want, atol=1e-10)


def test_euler_steps_match_dense_oracle():
    rng = np.random.default_rng(7)
    nodes = random_mesh_nodes(rng, 6, L=2.0)
    m = Mesh(nodes)
    oracle = DenseScheme(nodes)
    u0 = 0.1 * rng.normal(size=6)
    dt = 0.05
    got = euler_implicit_step(CoeffVector(X1, u0, m), dt).values
    want, _ = solve_dense(lambda v: oracle.residual_g1(u0, v, dt, theta=1.0), u0)
    np.testing.assert_allclose(got, want, atol=1e-10)
    got = euler_explicit_step(CoeffVector(X1, u0, m), dt).values
    want = u0 + dt * np.linalg.solve(oracle.A, oracle.residual_g1(u0, u0, 1.0, theta=0.0) * -1)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_euler_energy_behaviour():
    m = uniform_mesh(6, 200)
    imp = run(SchemeConfig("euler_implicit", 0.01, 1.0), m).H1
    exp = run(SchemeConfig("euler_explicit", 0.01, 1.0), m).H1
    assert np.all(np.diff(imp) < 0)
    assert np.all(np.diff(exp) >= 0)
    assert np.any(exp[1:] > exp[0])


def test_run_record_count():
    tr = run(SchemeConfig("galerkin1", 0.01, 1.0), uniform_mesh(6, 50))
    assert len(tr) == 100
    assert [r.n for r in tr.records()] == list(range(101))
    np.testing.assert_allclose(np.diff([r.t for r in tr.records()]), 0.01)


@pytest.mark.parametrize("kind", ["fd", "galerkin1", "galerkin2"])
def test_conservation_bound(kind):
    cfg = SchemeConfig(kind, 0.01, 1.0)
    tr = run(cfg, uniform_mesh(6, 200))
    assert tr.h1_drift() <= 100 * cfg.newton_tol * max(1.0, tr.initial.H1)
    assert tr.h1_drift() <= 1e-8


@pytest.mark.parametrize("kind", ["fd", "galerkin1", "galerkin2"])
def test_time_symmetry(kind):
    m = uniform_mesh(6, 100)
    u0 = interpolate(lambda x: EX.u(x, 0.0), m, X1).values
    fwd = make_stepper(kind, m, 0.01)
    bwd = make_stepper(kind, m, -0.01)
    u1, _ = fwd.advance(u0)
    u2, _ = bwd.advance(u1)
    assert np.max(np.abs(u2 - u0)) <= 1e-9


@pytest.mark.parametrize("kind", KINDS)
def test_zero_trajectory(kind):
    tr = run(SchemeConfig(kind, 0.1, 0.5), uniform_mesh(2, 12), initial=lambda x: 0 * x, exact=False)
    assert np.all(tr.final_values == 0)
    assert all(r.H1 == 0 for r in tr.records())


def test_fd_needs_uniform_mesh():
    with pytest.raises(ParameterError):
        run(SchemeConfig("fd", 0.01, 0.1), graded_mesh(6, 40, (0, 3), 0.5))


def test_step_error_carries_index():
    cfg = SchemeConfig("galerkin1", 0.5, 2.0, newton_tol=1e-30, newton_max_iter=2)
    with pytest.raises(StepError) as exc:
        run(cfg, uniform_mesh(6, 40))
    assert exc.value.step == 1


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="rk4", dt=0.1, t_end=1),
        dict(kind="fd", dt=0, t_end=1),
        dict(kind="fd", dt=2, t_end=1),
        dict(kind="fd", dt=0.1, t_end=1, newton_tol=0),
        dict(kind="fd", dt=0.1, t_end=1, newton_max_iter=0),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        SchemeConfig(**kwargs)


def test_config_aliases():
    assert SchemeConfig("g1", 0.1, 1).kind == "galerkin1"
    assert SchemeConfig("euler-imp", 0.1, 1).kind == "euler_implicit"
    assert SchemeConfig("fd", 0.03, 1).n_steps == 34


def test_initial_data_forms():
    m = uniform_mesh(6, 30)
    cfg = SchemeConfig("galerkin1", 0.1, 0.2)
    u = interpolate(lambda x: EX.u(x, 0.0), m, X1)
    a = run(cfg, m).final_values
    b = run(cfg, m, initial=u).final_values
    c = run(cfg, m, initial=u.values).final_values
    assert np.array_equal(a, b) and np.array_equal(a, c)
    with pytest.raises(ParameterError):
        run(cfg, m, initial=np.zeros(5))


def test_error_tracking_stops_at_horizon():
    tr = run(SchemeConfig("galerkin1", 0.25, 3.25), uniform_mesh(6, 40))
    assert tr.horizon_exceeded
    assert tr.steps[10].linf_error is not None
    assert tr.steps[-1].linf_error is None


def test_derivative_profiles():
    m = uniform_mesh(6, 40)
    u = interpolate(lambda x: EX.u(x, 0.0), m, X1).values
    for kind in ("fd", "galerkin1", "galerkin2"):
        el, rec = derivative_profiles(kind, m, u)
        assert el.shape == rec.shape == (41,)
    el, rec = derivative_profiles("galerkin1", m, u)
    assert total_variation(rec) <= total_variation(el) + 1e-12


def test_discrete_energy_dispatch():
    m = uniform_mesh(6, 40)
    u = interpolate(lambda x: EX.u(x, 0.0), m, X1).values
    assert discrete_energy("galerkin2", m, u) == h1_energy(CoeffVector(X1, u, m))
    assert discrete_energy("fd", m, u) == pytest.approx(h1_energy(CoeffVector(X1, u, m)), rel=1e-12)


def test_graded_mesh_straddling_the_kink_beats_uniform():
    uni = run(SchemeConfig("galerkin1", 0.01, 1.0), uniform_mesh(6, 200)).steps[-1].linf_error
    gm = graded_mesh(6, 200, (-0.5, 3.5), 0.75)
    gra = run(SchemeConfig("galerkin1", 0.01, 1.0), gm).steps[-1].linf_error
    assert gra < uni
