"""Command-line front end.

    lineintercept run SCENARIO.json [--seed N] [--out DIR] [--svg-every K]
    lineintercept verify {density,single_vehicle,pursuit_games,partition,lloyd_solver,all}

Exit codes: 0 success, 2 schema error, 3 numerical invariant violation,
4 non-convergence.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import density as dens
from . import export, verify
from .errors import (
    DegenerateGeometryError,
    DomainError,
    InfeasibleError,
    InvariantViolation,
    PreconditionError,
    SingularityError,
)
from .lloyd import Configuration, expected_time_multi, instability_check, is_critical, lloyd_descend
from .partition import dominance_partition
from .pursuit import (
    expected_intercept_time,
    intercept_time,
    intercept_time_pythagorean,
    on_axis_intercept_scan,
    simulate_pursuit,
    vertical_height,
)
from .scenario import SchemaError, Scenario, load_scenario
from .single_vehicle import GameParams, height_coeffs, optimize_single, time_coeffs

EXIT_OK, EXIT_SCHEMA, EXIT_INVARIANT, EXIT_NOT_CONVERGED = 0, 2, 3, 4
NUMERICAL_ERRORS = (InvariantViolation, DegenerateGeometryError, SingularityError,
                    InfeasibleError, PreconditionError)
CRITICAL_TOL = 1e-5


def _summary_line(summary: dict) -> str:
    crit = summary.get("critical")
    flag = "n/a" if crit is None else str(bool(crit)).lower()
    line = (f"mode={summary['mode']} cost={summary.get('cost', math.nan)!r} "
            f"iterations={summary.get('iterations', 0)} critical={flag}")
    if "optimum" in summary:
        line += " optimum=({!r}, {!r})".format(*summary["optimum"])
    return line


def _single(sc: Scenario):
    k = time_coeffs(sc.target_speed) if sc.mode == "single-time" else height_coeffs(sc.target_speed)
    tol = sc.solver["tol"] or 1e-8
    res = optimize_single(sc.positions[0], k, sc.density, tol=tol, max_iter=sc.solver["max_iter"])
    export.write_descent_csv(res.trace, sc.output_dir / "descent.csv")
    summary = {"mode": sc.mode, "start": list(sc.positions[0]),
               "optimum": [res.optimum.X, res.optimum.Y], "cost": res.cost,
               "grad_norm": res.grad_norm, "iterations": res.iterations,
               "converged": res.converged, "critical": res.converged}
    return summary, res.converged


def _intercept(sc: Scenario):
    d, v = sc.density, sc.target_speed
    med = dens.median(d)
    xs, vals = on_axis_intercept_scan(d, v, 1e-3 * sc.width)
    best = float(xs[int(vals.argmin())])
    cost = expected_intercept_time((med, 0.0), d, v)
    summary = {"mode": sc.mode, "median": med, "expected_intercept_time": cost,
               "scan_minimizer": best, "scan_minimum": float(vals.min()),
               "scan_step": 1e-3 * sc.width, "iterations": 0, "critical": None,
               "cost": cost, "optimum": [med, 0.0]}
    if sc.positions:
        summary["positions"] = [{"position": list(p),
                                 "expected_intercept_time": expected_intercept_time(p, d, v)}
                                for p in sc.positions]
    return summary, True


def _lloyd(sc: Scenario):
    g = GameParams(sc.width, sc.target_speed)
    tol = sc.solver["tol"] or 1e-7
    trace = lloyd_descend(Configuration(sc.positions, g), sc.density, rounds=sc.solver["rounds"],
                          tol=tol, substeps=sc.solver["substeps"])
    out = sc.output_dir
    export.write_lloyd_csv(trace, out / "lloyd_trace.csv")
    export.write_json(out / "partitions.json", export.partitions_json(trace))
    last = trace.records[-1].round
    for rec in trace.records:
        if rec.round % sc.svg_every == 0 or rec.round == last:
            svg = export.partition_svg(rec.partition, rec.positions, f"round {rec.round}",
                                       sc.density)
            export.write_svg(out / "svg" / f"round_{rec.round:04d}.svg", svg)
    final = trace.final
    report = is_critical(final, sc.density, CRITICAL_TOL)
    stability = instability_check(final, sc.density, CRITICAL_TOL) if report.critical else []
    summary = {
        "mode": sc.mode,
        "rounds": last,
        "converged": trace.converged,
        "expected_time": trace.records[-1].expected_time,
        "final_positions": [[p.X, p.Y] for p in final.positions],
        "final_partition": trace.records[-1].partition.to_json(),
        "recoveries": [{"vehicle": i, "round": n} for i, n in trace.recoveries],
        "oscillations": trace.oscillations,
        "critical": report.critical,
        "critical_tol": CRITICAL_TOL,
        "grad_norms": report.grad_norms,
        "displacements": report.displacements,
        "instability": stability,
        "iterations": last,
        "cost": trace.records[-1].expected_time,
    }
    return summary, trace.converged


def _pursuit(sc: Scenario):
    v, p = sc.target_speed, sc.positions[0]
    x, strategy = sc.target["x"], sc.target["strategy"]
    tr = simulate_pursuit(p, x, v, strategy, dt=sc.solver["dt"],
                          capture_radius=sc.solver["capture_radius"])
    export.write_pursuit_csv(tr, sc.output_dir / "pursuit.csv", every=sc.solver["csv_every"])
    summary = {"mode": sc.mode, "strategy": strategy, "dt": tr.dt, "captured": tr.captured,
               "capture_time": tr.capture_time, "capture_point": list(tr.capture_point),
               "evader_goal": list(tr.evader_goal), "iterations": len(tr.t) - 1,
               "critical": None}
    if strategy == "height":
        ref = vertical_height(p, x, v)
        summary.update(formula_height=ref, abs_error=abs(tr.capture_point[1] - ref))
        summary["cost"] = tr.capture_point[1]
    else:
        ref = intercept_time(p, x, v)
        summary.update(formula_time=ref, abs_error=abs(tr.capture_time - ref))
        try:
            summary["alternative_formula_time"] = intercept_time_pythagorean(p, x, v)
        except InfeasibleError as exc:
            summary["alternative_formula_time"] = None
            summary["alternative_formula_note"] = str(exc)
        summary["cost"] = tr.capture_time
    summary["within_5dt"] = bool(summary["abs_error"] <= 5 * tr.dt)
    return summary, tr.captured


def _partition(sc: Scenario):
    g = GameParams(sc.width, sc.target_speed)
    part = dominance_partition(sc.positions, g)
    export.write_json(sc.output_dir / "partition.json", part.to_json())
    export.write_svg(sc.output_dir / "partition.svg",
                     export.partition_svg(part, sc.positions, "dominance partition", sc.density))
    cost = expected_time_multi(Configuration(sc.positions, g), sc.density, part)
    summary = {"mode": sc.mode, "partition": part.to_json(), "expected_time": cost,
               "empty": part.empty_flags(), "iterations": 0, "critical": None, "cost": cost}
    return summary, True


RUNNERS = {
    "single-time": _single,
    "single-height": _single,
    "single-intercept-time": _intercept,
    "multi-lloyd": _lloyd,
    "simulate-pursuit": _pursuit,
    "partition-only": _partition,
}


def run_scenario(sc: Scenario) -> tuple[dict, bool]:
    """Execute ``sc``, write its artifacts, and return ``(summary, converged)``."""
    summary, ok = RUNNERS[sc.mode](sc)
    summary["seed"] = sc.seed
    export.write_json(sc.output_dir / "summary.json", summary)
    return summary, ok


def cmd_run(args) -> int:
    try:
        sc = load_scenario(args.file, seed=args.seed, out_dir=args.out, svg_every=args.svg_every)
    except SchemaError as exc:
        print(f"schema error in field '{exc.field}': {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"schema error in field '<file>': cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        summary, ok = run_scenario(sc)
    except NUMERICAL_ERRORS as exc:
        print(f"numerical invariant violated ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except DomainError as exc:
        print(f"schema error in field '<scenario>': {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(_summary_line(summary))
    if not ok:
        print(f"not converged: {sc.mode} stopped at its iteration cap", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify.run(args.selector)
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        export.write_json(Path(args.out) / f"verify_{args.selector}.json", report)
    return EXIT_OK if report["passed"] else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lineintercept", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute a scenario file")
    r.add_argument("file")
    r.add_argument("--seed", type=int, default=None, help="overrides the scenario seed")
    r.add_argument("--out", default=None, help="output directory (overrides output.dir)")
    r.add_argument("--svg-every", type=int, default=None, help="SVG snapshot every K rounds")
    r.set_defaults(func=cmd_run)
    v = sub.add_parser("verify", help="run seeded property suites")
    v.add_argument("selector", choices=[*verify.SELECTORS, "all"])
    v.add_argument("--out", default=None, help="also write the JSON report here")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2 ** 64:
        print("schema error in field 'seed': must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_SCHEMA
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
