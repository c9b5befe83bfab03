"""Compare the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py [--N 200] [--repeat 200]

Times each kernel on random data and a full 100-step run per scheme.
The full-run timings swap the active backend in place.
"""

import argparse
import timeit

import numpy as np

from hunter_saxton import kernels, schemes
from hunter_saxton.mesh import uniform_mesh


def kernel_cases(N, rng):
    x = np.linspace(-6, 6, N + 1)
    U = np.concatenate(([0.0], rng.normal(size=N)))
    Z = np.concatenate((rng.normal(size=N), [0.0]))
    u0 = np.concatenate(([0.0], rng.normal(size=N)))
    u1 = u0 + 1e-3 * rng.normal(size=N + 1)
    dx = 12.0 / N
    return {
        "g1_nodal": (x, U, Z),
        "g1_element_jacobians": (x, U, Z),
        "g2_nodal": (x, U, Z),
        "g2_element_jacobians": (x, U, Z),
        "fd_residual": (u0, u1, dx, 0.01),
        "fd_jacobian_banded": (u0, u1, dx, 0.01),
    }


def bench_kernels(N, repeat):
    if kernels.compiled_backend is None:
        print("compiled backend unavailable; build with `pip install -e . --no-build-isolation`")
        return
    cases = kernel_cases(N, np.random.default_rng(0))
    print(f"kernels, N={N}, {repeat} calls each")
    print(f"{'kernel':24s} {'python us':>10s} {'compiled us':>12s} {'speedup':>8s}")
    for name, args in cases.items():
        py = getattr(kernels.python_backend, name)
        cy = getattr(kernels.compiled_backend, name)
        tp = min(timeit.repeat(lambda: py(*args), number=repeat, repeat=3)) / repeat * 1e6
        tc = min(timeit.repeat(lambda: cy(*args), number=repeat, repeat=3)) / repeat * 1e6
        print(f"{name:24s} {tp:10.1f} {tc:12.1f} {tp / tc:8.1f}x")


def use_backend(mod):
    for name in ("g1_nodal", "g1_element_jacobians", "g2_nodal", "g2_element_jacobians",
                 "fd_residual", "fd_jacobian_banded"):
        setattr(kernels, name, getattr(mod, name))


def bench_runs(N):
    if kernels.compiled_backend is None:
        return
    mesh = uniform_mesh(6, N)
    u0 = np.clip(mesh.nodes[1:], 0.0, 1.0)
    print(f"\nfull runs, L=6, N={N}, dt=0.01, t_end=1")
    print(f"{'scheme':12s} {'python s':>9s} {'compiled s':>11s}")
    for kind in ("fd", "galerkin1", "galerkin2"):
        cfg = schemes.SchemeConfig(kind, 0.01, 1.0)
        out = []
        for mod in (kernels.python_backend, kernels.compiled_backend):
            use_backend(mod)
            out.append(min(timeit.repeat(lambda: schemes.run(cfg, mesh, initial=u0, exact=False), number=1, repeat=3)))
        print(f"{kind:12s} {out[0]:9.3f} {out[1]:11.3f}")
    use_backend(kernels.backend)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND_NAME}")
    bench_kernels(args.N, args.repeat)
    bench_runs(args.N)


if __name__ == "__main__":
    main()
