"""Command-line front end.

Subcommands: table1, exact, bounds, simulate, curve, verify. Tables go to
stdout as csv, json or markdown; errors and the verify report go to stderr.
Every option can also be set from the environment as QPF_<OPTION>, e.g.
QPF_TRIALS=0 or QPF_R=3,15 (lists are comma separated). Command-line flags
win over the environment.

Exit status: 0 ok, 1 verification failure, 2 usage or domain error.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional

import numpy as np

from . import __version__
from .bounds import bound_report, ekera_bound, qpf_lower_bound, qpf_upper_bound
from .errors import DomainError, OverlapError
from .kernel import h_perturbed
from .probability import CircuitParams, check_tolerance, success_prob_exact
from .simulator import SimulationConfig, run_simulation
from .verify import SCOPES, run_checks

ENV_PREFIX = "QPF_"
METHODS = ("exact", "simulation", "upper", "lower", "ekera")
EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2


@dataclass
class OutputRow:
    method: str
    r: int
    M: int
    value: Optional[float]
    stderr: Optional[float] = None
    error: Optional[str] = None


@dataclass
class CurvePoint:
    epsilon: float
    x: float
    h: float


class UsageError(Exception):
    pass


def round_half_even(value: float, decimals: int) -> str:
    if value is None or not math.isfinite(value):
        return str(value)
    quantum = Decimal(1).scaleb(-decimals)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_EVEN))


# -- serialization --------------------------------------------------------


def format_rows(rows, fmt: str, decimals: int) -> str:
    with_stderr = any(r.stderr is not None for r in rows)
    if fmt == "json":
        keys = ["method", "r", "M", "value"] + (["stderr"] if with_stderr else [])
        out = []
        for row in rows:
            item = {k: getattr(row, k) for k in keys}
            if row.error is not None:
                item["error"] = row.error
            out.append(item)
        return json.dumps(out, indent=2) + "\n"
    if fmt == "markdown":
        return _markdown(rows, decimals)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "r", "M", "value"] + (["stderr"] if with_stderr else []))
    for row in rows:
        value = "ERROR" if row.error is not None else round_half_even(row.value, decimals)
        line = [row.method, row.r, row.M, value]
        if with_stderr:
            line.append("" if row.stderr is None else round_half_even(row.stderr, decimals))
        writer.writerow(line)
    return buf.getvalue()


def _markdown(rows, decimals):
    cells = list(dict.fromkeys((row.M, row.r) for row in rows))
    methods = [m for m in METHODS if any(row.method == m for row in rows)]
    lookup = {(row.method, row.M, row.r): row for row in rows}
    lines = ["| method | " + " | ".join(f"M={M}, r={r}" for M, r in cells) + " |"]
    lines.append("|---" * (len(cells) + 1) + "|")
    for method in methods:
        out = []
        for M, r in cells:
            row = lookup.get((method, M, r))
            if row is None:
                out.append("")
            elif row.error is not None:
                out.append("ERROR")
            else:
                text = round_half_even(row.value, decimals)
                if row.stderr is not None:
                    text += " ± " + round_half_even(row.stderr, decimals)
                out.append(text)
        lines.append(f"| {method} | " + " | ".join(out) + " |")
    return "\n".join(lines) + "\n"


def format_curve(points, fmt: str, decimals: int) -> str:
    if fmt == "json":
        return json.dumps([{"epsilon": p.epsilon, "x": p.x, "h": p.h} for p in points], indent=2) + "\n"
    if fmt == "markdown":
        lines = ["| epsilon | x | h |", "|---|---|---|"]
        lines += [f"| {p.epsilon!r} | {round_half_even(p.x, decimals)} | {round_half_even(p.h, decimals)} |" for p in points]
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["epsilon", "x", "h"])
    for p in points:
        writer.writerow([repr(p.epsilon), round_half_even(p.x, decimals), round_half_even(p.h, decimals)])
    return buf.getvalue()


# -- commands -------------------------------------------------------------


def tolerances(args) -> list[int]:
    Ms = list(args.M or [])
    shifts = args.M_shift
    if not Ms and not shifts:
        shifts = [0, 3]
    Ms += [1 << (args.q + s) for s in shifts or []]
    return list(dict.fromkeys(Ms))


def _cell_rows(args, r, M, methods):
    rows = []
    try:
        params = CircuitParams.build(args.m, args.q, r)
    except DomainError as exc:
        return [OutputRow(method, r, M, None, error=str(exc)) for method in methods]
    compute = {
        "exact": lambda: success_prob_exact(params, M),
        "upper": lambda: qpf_upper_bound(params, M),
        "lower": lambda: qpf_lower_bound(params, M),
        "ekera": lambda: ekera_bound(params, M),
    }
    for method in methods:
        try:
            if method == "simulation":
                res = _simulate(args, params, M)
                rows.append(OutputRow(method, r, M, res.estimate, stderr=res.stderr))
            else:
                rows.append(OutputRow(method, r, M, compute[method]()))
        except (DomainError, OverlapError) as exc:
            rows.append(OutputRow(method, r, M, None, error=str(exc)))
    return rows


def _simulate(args, params, M):
    check_tolerance(params, M)
    config = SimulationConfig(params, trials=args.trials, seed=args.seed, workers=args.workers, tolerance=M)
    return run_simulation(config)


def _emit_rows(rows, args):
    sys.stdout.write(format_rows(rows, args.format, args.decimals))
    failed = [row for row in rows if row.error is not None]
    for row in failed:
        print(f"error: {row.method} r={row.r} M={row.M}: {row.error}", file=sys.stderr)
    return EXIT_USAGE if failed else EXIT_OK


def cmd_table1(args) -> int:
    methods = [m for m in METHODS if m != "simulation" or args.trials > 0]
    rows = []
    for M in tolerances(args):
        for r in args.r:
            rows += _cell_rows(args, r, M, methods)
    return _emit_rows(rows, args)


def cmd_exact(args) -> int:
    rows = [row for M in tolerances(args) for r in args.r for row in _cell_rows(args, r, M, ["exact"])]
    return _emit_rows(rows, args)


def cmd_bounds(args) -> int:
    rows, status = [], EXIT_OK
    for M in tolerances(args):
        for r in args.r:
            try:
                rep = bound_report(CircuitParams.build(args.m, args.q, r), M)
            except DomainError as exc:
                rows += [OutputRow(m, r, M, None, error=str(exc)) for m in ("lower", "exact", "upper", "ekera")]
                continue
            rows += [OutputRow(m, r, M, getattr(rep, m)) for m in ("lower", "exact", "upper", "ekera")]
            ok = rep.sandwich_ok()
            print(f"sandwich r={r} M={M}: {'OK' if ok else 'VIOLATED'}", file=sys.stderr)
            if not ok:
                status = EXIT_VERIFY
    return max(status, _emit_rows(rows, args))


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise UsageError("simulate needs --trials >= 1")
    rows = [row for M in tolerances(args) for r in args.r for row in _cell_rows(args, r, M, ["simulation"])]
    return _emit_rows(rows, args)


def cmd_curve(args) -> int:
    if args.points < 2:
        raise UsageError(f"--points must be >= 2, got {args.points}")
    x = np.linspace(0.0, 1.0, args.points)
    points = []
    for eps in args.epsilon or [0.0]:
        h = h_perturbed(x, args.curve_M, args.L, eps)
        points += [CurvePoint(float(eps), float(a), float(b)) for a, b in zip(x, h)]
    sys.stdout.write(format_curve(points, args.format, args.decimals))
    return EXIT_OK


def cmd_verify(args) -> int:
    overrides = {}
    for item in args.tol or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        overrides[name] = float(value)

    def report(res):
        mark = "PASS" if res.passed else "FAIL"
        print(f"{mark} {res.scope}/{res.name}: grid={res.grid_size} worst={res.worst:.3e} tol={res.tolerance:.1e}",
              file=sys.stderr)

    results = run_checks(scope=args.scope, overrides=overrides, tolerance=args.tolerance, on_result=report)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


# -- argument parsing -----------------------------------------------------


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _env_defaults(parser: argparse.ArgumentParser, env) -> None:
    """Take defaults from QPF_<DEST> variables."""
    converters = {
        "r": _int_list, "M": _int_list, "M_shift": _int_list, "epsilon": _float_list,
        "tol": lambda s: [v for v in s.split(",") if v],
    }
    updates, lists = {}, {}
    for action in parser._actions:
        dest = action.dest
        if dest in ("help", "command", "version"):
            continue
        key = ENV_PREFIX + dest.upper()
        if key not in env:
            continue
        raw = env[key]
        conv = converters.get(dest) or action.type or str
        try:
            value = conv(raw)
        except ValueError:
            parser.error(f"bad value for {key}: {raw!r}")
        if action.choices is not None and value not in action.choices:
            parser.error(f"bad value for {key}: {raw!r} (choose from {', '.join(map(str, action.choices))})")
        # argparse appends to a list default, so repeatable options are filled in after parsing
        if isinstance(action, argparse._AppendAction):
            lists[dest] = value
        else:
            updates[dest] = value
    parser.set_defaults(env_lists=lists, **updates)


def _add_output(p):
    p.add_argument("--format", choices=["csv", "json", "markdown"], default="csv")
    p.add_argument("--decimals", type=int, default=3, help="digits after the point in csv/markdown")


def _add_cell(p, trials_default):
    p.add_argument("--m", type=int, default=8, help="bits of the period bound, r < 2^m")
    p.add_argument("--q", type=int, default=5, help="extra precision qubits")
    p.add_argument("--r", type=int, action="append", help="period (repeatable)")
    p.add_argument("--M", type=int, action="append", help="tolerance (repeatable)")
    p.add_argument("--M-shift", dest="M_shift", type=int, action="append",
                   help="add M = 2^(q+shift) (repeatable); default shifts 0 and 3")
    p.add_argument("--trials", type=int, default=trials_default)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_output(p)


def build_parser(env=None) -> argparse.ArgumentParser:
    env = os.environ if env is None else env
    parser = argparse.ArgumentParser(prog="qpfbounds", description="Success probability of quantum period finding.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    specs = [
        ("table1", cmd_table1, "all methods for each (r, M) cell", 50000),
        ("exact", cmd_exact, "exact success probability", 0),
        ("bounds", cmd_bounds, "lower/exact/upper/ekera and the sandwich status", 0),
        ("simulate", cmd_simulate, "Monte Carlo estimate", 50000),
    ]
    for name, fn, text, trials in specs:
        p = sub.add_parser(name, help=text)
        _add_cell(p, trials)
        p.set_defaults(func=fn)

    p = sub.add_parser("curve", help="samples of H_L(x; M, eps) on [0, 1]")
    p.add_argument("--L", type=int, default=32)
    p.add_argument("--M", dest="curve_M", type=int, default=2)
    p.add_argument("--epsilon", type=float, action="append", help="perturbation (repeatable), default 0")
    p.add_argument("--points", type=int, default=101)
    _add_output(p)
    p.set_defaults(func=cmd_curve, decimals=6)

    p = sub.add_parser("verify", help="run the numerical property checks")
    p.add_argument("--scope", choices=SCOPES)
    p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override one check's tolerance")
    p.add_argument("--tolerance", type=float, help="override every tolerance")
    p.set_defaults(func=cmd_verify)

    for action in sub.choices.values():
        _env_defaults(action, env)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for dest, value in getattr(args, "env_lists", {}).items():
        if getattr(args, dest) is None:
            setattr(args, dest, value)
    if getattr(args, "r", None) is None and args.command in ("table1", "exact", "bounds", "simulate"):
        args.r = [3, 15, 63, 255]
    try:
        return args.func(args)
    except (UsageError, ValueError, OverlapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
