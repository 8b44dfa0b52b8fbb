"""Command-line front end: find Hamiltonian structures for linear second-order systems.

Examples::

    symplectify check "x'' + g*x' + x = 0" --param g=1
    symplectify canonical system.eom --param g=1 --param l=1/2 --json out.json
    symplectify simulate matrix.json --h 1e-3 --t-end 50 --csv traj.csv
    symplectify simulate dual.eom --param g=1 --sweep l=0:2:9
    symplectify demo henon-heiles --simulate
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .errors import EomSyntaxError
from .exact import Rational
from .parsing import eval_scalar, normalize_name
from .pipeline import (DEMOS, EXIT_PARSE, ProblemSpec, Report, SimulationConfig, demo_spec,
                       format_report, report_to_dict, run, write_report_json)

SUBCOMMANDS = ("check", "factor", "standardize", "canonical", "lagrangian", "potential", "simulate")


def _parse_param(text: str) -> tuple[str, Rational]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    name, value = text.split("=", 1)
    try:
        return normalize_name(name.strip()), eval_scalar(value.strip())
    except (EomSyntaxError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad value in {text!r}: {exc}") from exc


def _parse_sweep(text: str) -> tuple[str, list[Rational]]:
    """``name=a:b:steps`` -> ``steps`` equally spaced exact values from a to b."""
    try:
        name, rng = text.split("=", 1)
        a, b, steps = rng.split(":")
        a, b, steps = eval_scalar(a), eval_scalar(b), int(steps)
    except (ValueError, EomSyntaxError) as exc:
        raise argparse.ArgumentTypeError(f"expected name=a:b:steps, got {text!r}") from exc
    if steps < 1:
        raise argparse.ArgumentTypeError("sweep needs at least one point")
    if steps == 1:
        return normalize_name(name.strip()), [a]
    return normalize_name(name.strip()), [a + (b - a) * Rational(k, steps - 1) for k in range(steps)]


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad state vector {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--param", action="append", type=_parse_param, default=[], metavar="NAME=VALUE",
                        help="bind a parameter (repeatable); values are rationals such as 1/2")
    common.add_argument("--json", metavar="FILE", help="write the machine-readable report here")
    common.add_argument("--csv", metavar="FILE", help="write the trajectory (t, xi, H) here")
    common.add_argument("--seed", type=int, default=0, help="seed for the invertible-member search")
    common.add_argument("--h", type=float, default=None, help="RK4 step size")
    common.add_argument("--t-end", type=float, default=None, help="simulation end time")
    common.add_argument("--xi0", type=_parse_floats, default=None,
                        help="initial state (p then x), comma or space separated")
    common.add_argument("--names", default=None, help="comma-separated position names")
    common.add_argument("--sweep", type=_parse_sweep, default=None, metavar="NAME=A:B:STEPS",
                        help="repeat the analysis over STEPS values of one parameter")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for --sweep")
    common.add_argument("--quiet", action="store_true", help="suppress the human-readable report")

    parser = argparse.ArgumentParser(prog="symplectify", description=__doc__.split("\n")[0].split(": ", 1)[1],
                                     epilog="exit codes: 0 ok, 2 not Hamiltonian, 3 not admissible, "
                                            "4 parse error, 5 numeric failure")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common], help=f"run the pipeline up to '{name}'")
        p.add_argument("input", help="EOM text file, matrix JSON file, or an inline equation string")
    p = sub.add_parser("demo", parents=[common], help="run a built-in example system")
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("--simulate", action="store_true", help="also integrate and report drift")
    return parser


def _spec_from_input(text: str, upto: str, params: dict, names, seed: int) -> ProblemSpec:
    path = Path(text)
    if path.is_file():
        content = path.read_text()
        if path.suffix == ".json":
            data = json.loads(content)
            return ProblemSpec.from_matrix_json(data, params=params, names=names, upto=upto, seed=seed)
        return ProblemSpec(eom_text=(content,), params=params, names=names, upto=upto, seed=seed)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        return ProblemSpec.from_matrix_json(data, params=params, names=names, upto=upto, seed=seed)
    return ProblemSpec(eom_text=(text,), params=params, names=names, upto=upto, seed=seed)


def _with_simulation(spec: ProblemSpec, args) -> ProblemSpec:
    base = spec.simulation or SimulationConfig()
    cfg = SimulationConfig(xi0=args.xi0 if args.xi0 is not None else base.xi0,
                           h=args.h if args.h is not None else base.h,
                           t_end=args.t_end if args.t_end is not None else base.t_end)
    return replace(spec, simulation=cfg, upto="simulate")


def make_spec(args) -> ProblemSpec:
    params = dict(args.param)
    names = tuple(n.strip() for n in args.names.split(",")) if args.names else None
    if args.command == "demo":
        spec = demo_spec(args.name, simulate_=args.simulate)
        if params:
            spec = spec.with_params(**params)
        if names:
            spec = replace(spec, names=names)
        spec = replace(spec, seed=args.seed)
        if args.simulate:
            spec = _with_simulation(spec, args)
        return spec
    spec = _spec_from_input(args.input, args.command, params, names, args.seed)
    if args.command == "simulate":
        spec = _with_simulation(spec, args)
    return spec


def _sweep_line(name: str, value, report: Report) -> str:
    parts = [f"{name}={value}", f"exit={report.exit_code}",
             f"hamiltonian={'yes' if report.verdict else 'no' if report.verdict is False else '?'}"]
    if report.stability is not None:
        parts.append("modes=" + ",".join(report.stability.modes))
    if report.drift is not None:
        parts.append(f"drift={report.drift:.3e}")
    return "  ".join(parts)


def _run_sweep(spec: ProblemSpec, args) -> int:
    name, values = args.sweep
    specs = [spec.with_params(**{name: v}) for v in values]
    jobs = args.jobs or min(len(specs), os.cpu_count() or 1)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run, specs))  # map keeps input order
    else:
        reports = [run(s) for s in specs]
    for v, rep in zip(values, reports):
        print(_sweep_line(name, v, rep))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"sweep": name, "values": [str(v) for v in values],
                       "reports": [report_to_dict(r) for r in reports]}, fh, indent=2)
    return max(r.exit_code for r in reports)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = make_spec(args)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.sweep is not None:
        return _run_sweep(spec, args)
    report = run(spec)
    if not args.quiet:
        print(format_report(report))
    if args.json:
        write_report_json(report, args.json)
    if args.csv:
        if report.trajectory is None:
            print("warning: no trajectory to write (use 'simulate' or 'demo --simulate')", file=sys.stderr)
        else:
            report.trajectory.write_csv(args.csv, report.observable)
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
