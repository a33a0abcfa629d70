"""Command-line entry point.

Verbs: verify-algebra, verify-solution, sample, flowline, boundary, die,
list-families.  Exit codes: 0 pass, 1 checks failed, 2 usage/IO/
validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .errors import DomainError, PlasticFlowError
from .flow import FeedSpec, flowline, plasticity_boundary
from .pde import residual
from . import die as die_mod
from . import symmetry
from .scenarios import load_scenario
from .solutions import family_doc, family_ids, verify_family


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def cmd_verify_algebra(args) -> int:
    table = symmetry.STRUCTURE_TABLE
    if args.inject_table_defect:
        table = table.copy()
        table[symmetry.D1, symmetry.B, symmetry.B] = -1.0  # flip one sign
    report = symmetry.verify_commutation_table(args.samples, args.seed, table)
    print(f"plasticflow {__version__} algebra verification (seed={args.seed})")
    for line in report.lines:
        print("  " + line)
    jac = symmetry.jacobi_defect()
    aut = symmetry.automorphism_defect()
    ann = symmetry.run_annihilation_suite(seed=args.seed)
    ok = report.passed and jac == 0.0 and aut == 0.0 and ann.passed
    print(f"commutation: pairs={report.pairs} samples={report.samples} "
          f"max_defect={report.max_defect:.3e} "
          f"{'PASS' if report.passed else 'FAIL'}")
    print(f"jacobi: triples=512 max_defect={jac:.3e} {'PASS' if jac == 0.0 else 'FAIL'}")
    print(f"automorphism: R1,R2 pairs=128 max_defect={aut:.3e} "
          f"{'PASS' if aut == 0.0 else 'FAIL'}")
    print(f"annihilation: rows={ann.rows} param_samples={ann.param_samples} "
          f"points={ann.points_per_row} max_defect={ann.max_defect:.3e} "
          f"{'PASS' if ann.passed else 'FAIL'}")
    for failure in ann.failures[:10]:
        print("  " + failure)
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_verify_solution(args) -> int:
    sc = load_scenario(args.scenario)
    blk = sc.verify
    region = tuple(blk.get("region", (-1.0, 1.0, -1.0, 1.0)))
    report = verify_family(
        sc.family, sc.params, sc.functions,
        region=region,
        n=args.samples if args.samples is not None else int(blk.get("samples", 100)),
        tol_analytic=args.tol_analytic if args.tol_analytic is not None
        else float(blk.get("tol_analytic", 1e-6)),
        tol_fd=args.tol_fd if args.tol_fd is not None else float(blk.get("tol_fd", 1e-4)),
        tol_compat=float(blk.get("tol_compat", 1e-4)),
        seed=args.seed if args.seed is not None else int(blk.get("seed", 0)),
    )
    d = report.to_dict()
    for key in ("family", "n_samples", "seed", "tol_analytic", "tol_fd",
                "tol_compat", "compat_defect", "verdict", "version"):
        print(f"{key}={d[key]}")
    if report.max_analytic is not None:
        print("max_analytic=" + ",".join(repr(v) for v in report.max_analytic))
    print("max_fd=" + ",".join(repr(v) for v in report.max_fd))
    if report.flags:
        print("flags=" + ",".join(report.flags))
    print(json.dumps(d, sort_keys=True))
    return 0 if report.passed else 1


def cmd_sample(args) -> int:
    sc = load_scenario(args.scenario)
    F = sc.build_field()
    x, y = args.x, args.y
    if not F.domain(x, y):
        return _fail(f"point ({x}, {y}) is outside the {sc.family} domain")
    print(f"theta={F.theta(x, y)!r}")
    print(f"sigma={F.sigma(x, y)!r}")
    print(f"u={F.u(x, y)!r}")
    print(f"v={F.v(x, y)!r}")
    r = residual(F, x, y, scheme="fd")
    for name, value in zip(("r_a", "r_b", "r_c", "r_d"), r.as_tuple()):
        print(f"{name}={value!r}")
    return 0


def _write_curves(curves, out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    die_mod.export_curves_csv(curves, path)
    return path


def cmd_flowline(args) -> int:
    sc = load_scenario(args.scenario)
    blk = sc.flowline
    if not blk:
        return _fail("scenario has no 'flowline' block")
    F = sc.build_field()
    dt = args.dt if args.dt is not None else float(blk.get("dt", 1e-3))
    steps = args.steps if args.steps is not None else int(blk.get("steps", 2000))
    direction = blk.get("direction", "forward")
    curves = []
    for i, seed in enumerate(blk.get("seeds", [])):
        curve = flowline(F, tuple(seed), dt, steps, direction)
        curve.label = f"F{i + 1}"
        curves.append(curve)
        print(f"F{i + 1}: nodes={len(curve)} stop={curve.stop_reason}")
    if args.out:
        print("wrote " + _write_curves(curves, args.out, "flowlines.csv"))
    return 0


def cmd_boundary(args) -> int:
    sc = load_scenario(args.scenario)
    blk = sc.boundary
    if not blk:
        return _fail("scenario has no 'boundary' block")
    F = sc.build_field()
    feed = FeedSpec(float(blk["feed"][0]), float(blk["feed"][1]))
    dt = args.dt if args.dt is not None else float(blk.get("dt", 1e-3))
    steps = args.steps if args.steps is not None else int(blk.get("steps", 2000))
    curves = []
    for i, seed in enumerate(blk.get("seeds", [])):
        curve = plasticity_boundary(F, feed, tuple(seed), dt, steps)
        curve.label = f"B{i + 1}"
        curves.append(curve)
        print(f"B{i + 1}: nodes={len(curve)} stop={curve.stop_reason}")
    if args.out:
        print("wrote " + _write_curves(curves, args.out, "boundaries.csv"))
    return 0


def cmd_die(args) -> int:
    sc = load_scenario(args.scenario)
    F = sc.build_field()
    spec = sc.die_scenario(F, dt=args.dt, steps=args.steps)
    geometry = die_mod.build_die(spec)
    os.makedirs(args.out, exist_ok=True)
    if not geometry.raster_mask.any():
        print("warning: empty raster (no in-domain cells)")
    checks = die_mod.check_geometry(geometry, F)
    svg_path = os.path.join(args.out, "die.svg")
    die_mod.export_svg(geometry, svg_path)
    paths = [svg_path] + die_mod.export_csv(geometry, args.out)
    png_path = os.path.join(args.out, "die.png")
    die_mod.export_png(geometry, png_path)
    paths.append(png_path)
    for path in paths:
        print("wrote " + path)
    print(f"walls={len(geometry.walls)} limits={len(geometry.limits)} "
          f"raster_cells={int(geometry.raster_mask.sum())}")
    print(f"wall_tangency={checks['wall_tangency']:.3e} "
          f"limit_tangency={checks['limit_tangency']:.3e} "
          f"raster_mask_consistent={checks['raster_mask_consistent']}")
    ok = checks["passed"] and geometry.raster_mask.any()
    print(f"geometry checks: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_list_families(args) -> int:
    for fam in family_ids():
        print(f"{fam:16s} {family_doc(fam)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plasticflow",
        description="Exact ideal-plastic plane-flow solutions: verification, "
                    "sampling, curve integration and die geometry export.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-algebra", help="check the symmetry-algebra suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--inject-table-defect", action="store_true",
                   help=argparse.SUPPRESS)  # test fixture: flips one sign
    p.set_defaults(func=cmd_verify_algebra)

    p = sub.add_parser("verify-solution", help="run the residual oracle on a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tol-analytic", type=float, default=None)
    p.add_argument("--tol-fd", type=float, default=None)
    p.set_defaults(func=cmd_verify_solution)

    p = sub.add_parser("sample", help="print fields and residuals at a point")
    p.add_argument("--scenario", required=True)
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("flowline", help="integrate flow lines from scenario seeds")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(func=cmd_flowline)

    p = sub.add_parser("boundary", help="integrate plasticity-limit curves")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("die", help="build die geometry and export SVG/CSV/PNG")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(func=cmd_die)

    p = sub.add_parser("list-families", help="list solution family identifiers")
    p.set_defaults(func=cmd_list_families)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        return _fail(str(exc))
    except PlasticFlowError as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
