"""Command-line entry point: solve, certify, census, triangle/pyramid
reports, searches and exact self-checks.

Exit codes: 0 success, 2 input/parse error, 3 solver budget exceeded,
4 certification shortfall against the expected count, 1 failed checks.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import certify as ct
from . import fixtures
from . import geometry as ge
from . import homotopy as ho
from . import polysys as ps
from . import reports as rp
from . import schubert as sb
from . import search as se
from .conditions import DegenerationFamily, leading_form, quadric_condition

__all__ = ["main"]


def _load_settings(args) -> ho.TrackerSettings:
    kw = {}
    if args.settings:
        kw = json.loads(Path(args.settings).read_text())
    if args.seed is not None:
        kw["rng_seed"] = args.seed
    return ho.TrackerSettings(**kw)


def _load_instance(path) -> ps.TangencyInstance:
    try:
        obj = json.loads(Path(path).read_text())
        return ps.TangencyInstance.from_json(obj)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read instance {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    settings = _load_settings(args)
    out = _out_dir(args)
    t0 = time.time()
    system = ps.assemble(instance, chart_seed=args.chart_seed)
    sols = ho.solve_total_degree(system, settings)
    wall = time.time() - t0
    print(f"Tracking {system.total_degree} paths...")
    print(rp.solver_block(sols, settings.real_tol))
    (out / "solutions.json").write_text(json.dumps([s.to_json() for s in sols], indent=1))
    report = rp.RunReport(
        command="solve",
        instance_digest=rp.instance_digest(instance),
        path_counts=_path_counts(sols),
        wall_time=wall,
        settings=settings.to_json(),
        seeds={"chart_seed": args.chart_seed, "rng_seed": settings.rng_seed},
    )
    report.save(out / "report.json")
    return 0


def _path_counts(sols) -> dict:
    out = {}
    for s in sols:
        out[s.status] = out.get(s.status, 0) + 1
    return out


def _cmd_certify(args) -> int:
    instance = _load_instance(args.instance)
    settings = _load_settings(args)
    out = _out_dir(args)
    t0 = time.time()
    system = ps.assemble(instance, chart_seed=args.chart_seed)
    sols, boxes, summary = sb.solve_and_certify(
        instance, settings, chart_seed=args.chart_seed
    )
    wall = time.time() - t0
    print(f"Tracking {system.total_degree} paths...")
    print(rp.solver_block(sols, settings.real_tol))
    print()
    print(rp.certification_block(summary))
    (out / "solutions.json").write_text(json.dumps([s.to_json() for s in sols], indent=1))
    (out / "certificates.json").write_text(
        json.dumps(
            {"summary": summary.to_json(), "certificates": [b.to_json() for b in boxes]},
            indent=1,
        )
    )
    report = rp.RunReport(
        command="certify",
        instance_digest=rp.instance_digest(instance),
        path_counts=_path_counts(sols),
        certified=summary.certified,
        distinct=summary.distinct,
        real=summary.real,
        nondegenerate=summary.distinct_nondegenerate,
        wall_time=wall,
        settings=settings.to_json(),
        seeds={"chart_seed": args.chart_seed, "rng_seed": settings.rng_seed},
    )
    report.save(out / "report.json")
    expected = args.expected
    if expected is None:
        table = _table(args)
        sig = instance.signature
        expected = table.get(sig)
    if expected is not None and summary.distinct_nondegenerate < expected:
        print(
            f"certification shortfall: {summary.distinct_nondegenerate} < expected {expected}",
            file=sys.stderr,
        )
        return 4
    return 0


def _table(args) -> sb.CountTable:
    if getattr(args, "table", None):
        return sb.CountTable.load(args.table)
    try:
        return sb.default_table()
    except FileNotFoundError:
        t = sb.CountTable()
        t.fill_bezout()
        return t


def _cmd_census(args) -> int:
    settings = _load_settings(args)
    sig = sb.Signature.of(args.signature)
    table = _table(args)
    try:
        count = sb.census(
            sig,
            trials=args.trials,
            settings=settings,
            table=table,
            base_seed=args.seed or 0,
            path_budget=args.path_budget,
        )
    except sb.InconsistentCensusError as exc:
        print(f"census failed: {exc}", file=sys.stderr)
        return 3
    print(f"census {sig}: {count}")
    if args.table:
        table.save(args.table)
    return 0


def _cmd_triangle(args) -> int:
    table = _table(args)
    if args.census_missing:
        settings = _load_settings(args)
        for sig in table.missing_triangle():
            count = sb.census(sig, settings=settings, table=table, base_seed=args.seed or 0)
            print(f"census {sig}: {count}")
        if args.table:
            table.save(args.table)
    out = _out_dir(args)
    csv_path, png_path = rp.write_triangle_report(table, out)
    print(rp.triangle_text_report(table))
    print(f"wrote {csv_path} and {png_path}")
    return 0


def _cmd_pyramid(args) -> int:
    table = _table(args)
    out = _out_dir(args)
    csv_path, png_path = rp.write_pyramid_report(table, out, levels=args.levels)
    marked = None
    try:
        marked = sb.pyramid_entry(table, (2, 3, 2, 2))
        print(f"level-2 entry at (2,3,2,2): {marked}")
    except sb.UnknownDependencyError as exc:
        print(f"level-2 entry at (2,3,2,2) unavailable: missing {exc}")
    if not table.missing_triangle():
        print(f"(p+l+h)^9 = {sb.flag_power_aggregate(table)}")
        print(f"q^9 = {sb.q9_aggregate(table)}")
    print(f"wrote {csv_path} and {png_path}")
    return 0


def _cmd_search(args) -> int:
    settings = _load_settings(args)
    sig = sb.Signature.of(args.signature)
    seed_inst = se.seed_instance(
        sig.tuple, args.strategy, seed=args.seed or 0, perturbation=args.perturbation
    )
    table = _table(args)
    target = table.get(sig) if args.target is None else args.target
    out = _out_dir(args)
    state = se.hill_climb(
        sig.tuple,
        seed_inst,
        iters=args.iters,
        neighborhood_scale=args.scale,
        settings=settings,
        target_real=target,
        checkpoint_dir=out,
    )
    print(
        f"search {sig}: best real count {state.real_count}"
        + (f" (certified {state.certified_real})" if state.certified_real is not None else "")
        + f" at iteration {state.iteration}, nearness {state.nearness:.3g}"
    )
    (out / "record_instance.json").write_text(json.dumps(state.instance.to_json(), indent=1))
    return 0


def _cmd_check(args) -> int:
    ok = True
    if args.kind == "degeneration":
        ok = _check_degeneration(trials=20, seed=args.seed or 0)
    elif args.kind == "identities":
        ok = _check_identities(seed=args.seed or 0)
    elif args.kind == "triangle":
        return _cmd_triangle(args)
    elif args.kind == "pyramid":
        return _cmd_pyramid(args)
    return 0 if ok else 1


def _check_degeneration(trials: int, seed: int) -> bool:
    rng = np.random.default_rng(seed)
    for k in range(trials):
        V = ge.random_rational_matrix(rng, (4, 4), den=16)
        try:
            fam = DegenerationFamily(tuple(tuple(r) for r in V))
        except ValueError:
            continue
        X = ge.random_rational_quadric(rng, den=16)
        order, lead = leading_form(fam, X)
        want = fam.predicted_leading_coefficient(X)
        if order != 8 or lead != want:
            print(f"FAIL degeneration trial {k}: order {order}, coefficient {lead} != {want}")
            print(f"  V = {V}")
            print(f"  X = {X.coords}")
            return False
    print(f"degeneration: order 8 and exact factorization in {trials}/{trials} random trials")
    return True


def _check_identities(seed: int) -> bool:
    rng = np.random.default_rng(seed)
    n = 200
    for k in range(n):
        X = ge.random_rational_quadric(rng)
        q = ge.complete_quadric(X)
        if any(v != 0 for v in ge.generator_check(q)):
            print(f"FAIL generator check at trial {k}: X = {X.coords}")
            return False
        M = ge.random_rational_matrix(rng, (2, 4))
        try:
            line = ge.plucker_from_span(M)
        except ge.DegenerateFigureError:
            continue
        if ge.plucker_residual(line.l) != 0:
            print(f"FAIL Pluecker relation at trial {k}: M = {M}")
            return False
        # adjugate identity
        m = X.matrix()
        adj = ge.wedge(X, 3)
        d = ge.det4(m)
        prod_ok = all(
            sum(m[i][l] * adj[l][j] for l in range(4)) == (d if i == j else 0)
            for i in range(4)
            for j in range(4)
        )
        if not prod_ok:
            print(f"FAIL adjugate identity at trial {k}")
            return False
    # discriminant symmetry on a few exact pairs
    for k in range(20):
        U = ge.random_rational_quadric(rng, den=8)
        X = ge.random_rational_quadric(rng, den=8)
        if quadric_condition(U).value(list(X.coords)) != quadric_condition(X).value(list(U.coords)):
            print(f"FAIL discriminant symmetry at trial {k}")
            return False
    print(f"identities: Pluecker/adjugate/generators ({n} trials) and discriminant symmetry pass")
    return True


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tangent-quadrics",
        description="Quadrics tangent to nine figures: solve, certify, count, search.",
    )
    parser.add_argument("--seed", type=int, default=None, help="base RNG seed")
    parser.add_argument("--threads", type=int, default=1, help="worker parallelism cap")
    parser.add_argument("--settings", type=str, default=None, help="tracker settings JSON file")
    parser.add_argument("--out", type=str, default=".", help="output directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="track all total-degree paths of an instance")
    p.add_argument("instance")
    p.add_argument("--chart-seed", type=int, default=0)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("certify", help="solve and certify an instance")
    p.add_argument("instance")
    p.add_argument("--chart-seed", type=int, default=0)
    p.add_argument("--expected", type=int, default=None)
    p.add_argument("--table", type=str, default=None)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("census", help="count solutions of random instances of a signature")
    p.add_argument("--signature", required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--table", type=str, default=None)
    p.add_argument("--path-budget", type=int, default=50_000)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("triangle", help="report the delta=0 count table")
    p.add_argument("--table", type=str, default=None)
    p.add_argument("--census-missing", action="store_true")
    p.set_defaults(func=_cmd_triangle)

    p = sub.add_parser("pyramid", help="report pyramid levels via the recurrence")
    p.add_argument("--table", type=str, default=None)
    p.add_argument("--levels", type=int, default=2)
    p.set_defaults(func=_cmd_pyramid)

    p = sub.add_parser("search", help="hill-climb for fully real instances")
    p.add_argument("--signature", required=True)
    p.add_argument("--strategy", default="random",
                   choices=["random", "coordinate_lines", "coordinate_planes", "twisted_cubic"])
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--scale", type=float, default=0.05)
    p.add_argument("--perturbation", type=float, default=1e-3)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--table", type=str, default=None)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("check", help="exact verification suites")
    p.add_argument("kind", choices=["degeneration", "identities", "triangle", "pyramid"])
    p.add_argument("--table", type=str, default=None)
    p.add_argument("--census-missing", action="store_true")
    p.add_argument("--levels", type=int, default=2)
    p.set_defaults(func=_cmd_check)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
