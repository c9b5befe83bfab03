"""Command line front end: runs, convergence tables, comparisons, meshes.

Exit codes: 0 success, 2 invalid specification, 3 solver failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from hunter_saxton.errors import MeshFormatError, ParameterError, StepError
from hunter_saxton.mesh import Mesh, format_mesh, graded_mesh, load_mesh, uniform_mesh
from hunter_saxton.reference import ExactSolution, horizon
from hunter_saxton.schemes import SchemeConfig, Trajectory, canonical_kind, derivative_profiles, run

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_SOLVER = 3
EXIT_IO = 4

SCHEME_FLAGS = {
    "fd": "fd",
    "g1": "galerkin1",
    "g2": "galerkin2",
    "euler-exp": "euler_explicit",
    "euler-imp": "euler_implicit",
}
_SHORT = {v: k for k, v in SCHEME_FLAGS.items()}


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class RunSpec:
    scheme: str
    L: float = 6.0
    N: int = 200
    dt: float = 0.01
    t_end: float = 1.0
    mesh: str = "uniform"
    out: str = "."
    profile: bool = True
    timeseries: bool = True
    emit_mesh: bool = False
    newton_tol: float = 1e-12
    newton_max_iter: int = 50

    def validate(self):
        try:
            scheme = canonical_kind(self.scheme)
        except ParameterError as exc:
            raise SpecError(str(exc)) from None
        for name in ("L", "dt", "t_end", "newton_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise SpecError(f"{name} must be positive, got {v}")
        if int(self.N) != self.N or self.N < 3:
            raise SpecError(f"N must be an integer >= 3, got {self.N}")
        if int(self.newton_max_iter) != self.newton_max_iter or self.newton_max_iter < 1:
            raise SpecError(f"newton-max-iter must be a positive integer, got {self.newton_max_iter}")
        if self.dt > self.t_end:
            raise SpecError(f"dt={self.dt} exceeds t-end={self.t_end}")
        kind, _ = parse_mesh_source(self.mesh)
        if scheme == "fd" and kind == "graded":
            raise SpecError("the fd scheme needs a uniform mesh")
        return replace(self, scheme=scheme)


def parse_mesh_source(text: str):
    """``uniform`` | ``graded:a,b,frac`` | ``file:path``."""
    if text == "uniform":
        return "uniform", None
    if text.startswith("graded:"):
        parts = text[len("graded:"):].split(",")
        if len(parts) != 3:
            raise SpecError(f"graded mesh needs 'graded:a,b,frac', got {text!r}")
        try:
            a, b, frac = (float(p) for p in parts)
        except ValueError:
            raise SpecError(f"cannot parse graded mesh parameters in {text!r}") from None
        return "graded", (a, b, frac)
    if text.startswith("file:") and len(text) > 5:
        return "file", text[5:]
    raise SpecError(f"unknown mesh source {text!r}")


def build_mesh(spec: RunSpec) -> Mesh:
    kind, params = parse_mesh_source(spec.mesh)
    try:
        if kind == "uniform":
            return uniform_mesh(spec.L, spec.N)
        if kind == "graded":
            a, b, frac = params
            return graded_mesh(spec.L, spec.N, (a, b), frac)
    except ParameterError as exc:
        raise SpecError(str(exc)) from None
    try:
        mesh = load_mesh(params)
    except MeshFormatError as exc:
        raise SpecError(f"{params}: {exc}") from None
    if spec.scheme == "fd" and not mesh.is_uniform():
        raise SpecError("the fd scheme needs a uniform mesh; the mesh file is not uniform")
    return mesh


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def execute(spec: RunSpec) -> Trajectory:
    """Validate ``spec`` and integrate it (no files written)."""
    spec = spec.validate()
    mesh = build_mesh(spec)
    config = SchemeConfig(spec.scheme, spec.dt, spec.t_end, spec.newton_tol, spec.newton_max_iter)
    exact = ExactSolution(mesh.L) if mesh.L > 1.0 else None
    return run(config, mesh, exact=exact if exact is not None else False)


def timeseries_csv(traj: Trajectory) -> str:
    rows = [(r.n, r.t, r.H1, r.H2, r.linf_error, r.newton_iters) for r in traj.records()]
    return _csv(["n", "t", "H1", "H2", "linf_error", "newton_iters"], rows)


def profile_csv(traj: Trajectory) -> str:
    mesh = traj.mesh
    t = traj.config.n_steps * traj.config.dt
    u = np.concatenate(([0.0], traj.final_values))
    ux_el, ux_rec = derivative_profiles(traj.kind, mesh, traj.final_values)
    exact = ExactSolution(mesh.L) if mesh.L > 1.0 else None
    if exact is not None and exact.contains(t):
        ue, uxe = exact.u(mesh.nodes, t), exact.ux(mesh.nodes, t)
    else:
        ue = uxe = [None] * mesh.nodes.size
    rows = zip(mesh.nodes, u, ux_el, ux_rec, ue, uxe)
    return _csv(["x", "u", "ux_element", "ux_recovered", "u_exact", "ux_exact"], rows)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _horizon_warning(spec: RunSpec):
    if spec.L > 1.0 and spec.t_end >= horizon(spec.L):
        print(
            f"warning: t_end={spec.t_end} reaches the exact solution's validity limit "
            f"{horizon(spec.L):.6g} for L={spec.L}; errors beyond it are left empty",
            file=sys.stderr,
        )


def cmd_run(spec: RunSpec) -> int:
    try:
        spec = spec.validate()
        mesh = build_mesh(spec)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    _horizon_warning(spec)
    try:
        traj = execute(spec)
    except StepError as exc:
        print(f"error: solver failure at step {exc.step}: {exc.cause}", file=sys.stderr)
        return EXIT_SOLVER
    out = Path(spec.out)
    name = _SHORT[spec.scheme]
    try:
        if spec.timeseries:
            _write(out / f"timeseries_{name}.csv", timeseries_csv(traj))
        if spec.profile:
            _write(out / f"profile_{name}.csv", profile_csv(traj))
        if spec.emit_mesh:
            _write(out / "mesh.txt", format_mesh(mesh))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _run_member(spec):
    return execute(spec)


def _map(specs, jobs):
    if jobs and jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_member, specs))
    return [_run_member(s) for s in specs]


def convergence_table(scheme, L, dt, t_end, N_list, mesh="uniform", jobs=1, **newton):
    """Rows ``(N, dx, linf_error_at_t_end, H1_drift)``, one per resolution."""
    if len(N_list) < 2:
        raise SpecError("a convergence study needs at least two resolutions")
    specs = [RunSpec(scheme, L, N, dt, t_end, mesh=mesh, **newton).validate() for N in N_list]
    rows = []
    trajs = _map(specs, jobs)
    for spec, traj in zip(specs, trajs):
        last = traj.steps[-1] if traj.steps else traj.initial
        rows.append((spec.N, float(np.max(traj.mesh.h)), last.linf_error, traj.h1_drift()))
    return rows


def cmd_convergence(scheme, L, dt, t_end, N_list, out, mesh="uniform", jobs=1, **newton) -> int:
    try:
        for N in N_list:
            RunSpec(scheme, L, N, dt, t_end, mesh=mesh, **newton).validate()
        if len(N_list) < 2:
            raise SpecError("a convergence study needs at least two resolutions")
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    try:
        rows = convergence_table(scheme, L, dt, t_end, N_list, mesh=mesh, jobs=jobs, **newton)
    except StepError as exc:
        print(f"error: solver failure at step {exc.step}: {exc.cause}", file=sys.stderr)
        return EXIT_SOLVER
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    name = _SHORT[canonical_kind(scheme)]
    try:
        _write(Path(out) / f"convergence_{name}.csv", _csv(["N", "dx", "linf_error_at_t_end", "H1_drift"], rows))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def compare_table(specs, jobs=1):
    """Aligned per-scheme time series; returns ``(header, rows)``."""
    if len(specs) < 2:
        raise SpecError("a comparison needs at least two runs")
    specs = [s.validate() for s in specs]
    if len({s.t_end for s in specs}) != 1 or len({s.dt for s in specs}) != 1:
        raise SpecError("compared runs must share dt and t_end")
    labels, seen = [], {}
    for s in specs:
        name = _SHORT[s.scheme]
        seen[name] = seen.get(name, 0) + 1
        labels.append(name if seen[name] == 1 else f"{name}#{seen[name]}")
    for s in specs:
        build_mesh(s)
    trajs = _map(specs, jobs)
    header = ["n", "t"]
    for lab in labels:
        header += [f"H1_{lab}", f"H2_{lab}", f"linf_error_{lab}"]
    rows = []
    for i, rec in enumerate(trajs[0].records()):
        row = [rec.n, rec.t]
        for tr in trajs:
            r = tr.records()[i]
            row += [r.H1, r.H2, r.linf_error]
        rows.append(row)
    return header, rows


def cmd_compare(specs, out, jobs=1) -> int:
    try:
        header, rows = compare_table(specs, jobs=jobs)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except StepError as exc:
        print(f"error: solver failure at step {exc.step}: {exc.cause}", file=sys.stderr)
        return EXIT_SOLVER
    try:
        _write(Path(out) / "compare.csv", _csv(header, rows))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_mesh(source, L, N, path) -> int:
    spec = RunSpec("g1", L, N, mesh=source)
    try:
        spec = spec.validate()
        if parse_mesh_source(source)[0] == "file":
            raise SpecError("the mesh command generates uniform or graded meshes only")
        mesh = build_mesh(spec)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    try:
        _write(Path(path), format_mesh(mesh))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# -- argument parsing -------------------------------------------------------


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None


def _common(p, n_list=False):
    p.add_argument("--L", type=float, default=6.0, help="half-width of the domain (default 6)")
    if n_list:
        p.add_argument("--N", type=_int_list, required=True, help="comma-separated element counts")
    else:
        p.add_argument("--N", type=int, default=200, help="number of elements (default 200)")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--mesh", default="uniform", help="uniform | graded:<a,b,frac> | file:<path>")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--newton-tol", type=float, default=1e-12)
    p.add_argument("--newton-max-iter", type=int, default=50)


def build_parser():
    parser = argparse.ArgumentParser(prog="hunter-saxton", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    schemes = sorted(SCHEME_FLAGS)

    p = sub.add_parser("run", help="integrate one scheme and write CSV output")
    p.add_argument("--scheme", choices=schemes, required=True)
    _common(p)
    p.add_argument("--no-profile", action="store_true", help="skip the final-time profile CSV")
    p.add_argument("--no-timeseries", action="store_true", help="skip the time-series CSV")
    p.add_argument("--emit-mesh", action="store_true", help="also write the mesh file")

    p = sub.add_parser("convergence", help="error and energy drift over several resolutions")
    p.add_argument("--scheme", choices=schemes, required=True)
    _common(p, n_list=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("compare", help="side-by-side time series of several schemes")
    p.add_argument("--scheme", choices=schemes, action="append", required=True,
                   help="repeat for each scheme to compare")
    _common(p)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("mesh", help="write a mesh file")
    p.add_argument("--mesh", default="uniform", help="uniform | graded:<a,b,frac>")
    p.add_argument("--L", type=float, default=6.0)
    p.add_argument("--N", type=int, default=200)
    p.add_argument("--out", required=True, help="mesh file to write")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    newton = {"newton_tol": getattr(args, "newton_tol", 1e-12), "newton_max_iter": getattr(args, "newton_max_iter", 50)}
    if args.command == "run":
        spec = RunSpec(
            SCHEME_FLAGS[args.scheme], args.L, args.N, args.dt, args.t_end, args.mesh, args.out,
            profile=not args.no_profile, timeseries=not args.no_timeseries, emit_mesh=args.emit_mesh, **newton,
        )
        return cmd_run(spec)
    if args.command == "convergence":
        return cmd_convergence(SCHEME_FLAGS[args.scheme], args.L, args.dt, args.t_end, args.N, args.out,
                               mesh=args.mesh, jobs=args.jobs, **newton)
    if args.command == "compare":
        specs = [RunSpec(SCHEME_FLAGS[s], args.L, args.N, args.dt, args.t_end, args.mesh, args.out, **newton)
                 for s in args.scheme]
        return cmd_compare(specs, args.out, jobs=args.jobs)
    return cmd_mesh(args.mesh, args.L, args.N, args.out)


if __name__ == "__main__":
    sys.exit(main())
