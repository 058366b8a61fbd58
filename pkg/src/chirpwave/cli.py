"""Command-line entry point: ``chirpwave <command> [options]``.

Exit status is 0 on success, 2 for bad arguments and 1 when a numerical
guard (aliasing, quadrature convergence) trips.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import checks
from .experiments import (
    FIGURE_IDS,
    PROPAGATION_METHODS,
    ExperimentError,
    ExperimentSpec,
    compare_cell,
    default_jobs,
    figure_spec,
    propagate,
    run_experiment,
)
from .gridfield import DEFAULT_N, DEFAULT_X_MAX, DEFAULT_X_MIN, Grid
from .propagators import AliasingError
from .specfun import DEFAULT_QUADRATURE, QuadratureError, QuadratureSpec
from .states import Bessel, parse_state

COMMANDS = ("propagate", "compare", "sweep", "figure", "selftest")
CONFIG_KEYS = {
    "state", "alpha", "t", "n", "xmin", "xmax", "out", "jobs", "quad_panels", "id", "method",
}
DEFAULTS = {
    "n": DEFAULT_N,
    "xmin": DEFAULT_X_MIN,
    "xmax": DEFAULT_X_MAX,
    "jobs": None,
    "quad_panels": DEFAULT_QUADRATURE.panel_count,
    "method": "psi0",
}


class UsageError(ValueError):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chirpwave",
        description="Free evolution of chirped wave packets: exact, zeroth- and first-order paths.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state", help="initial profile: airy:<eps>, airygauss:<eps>,<beta>, "
                                        "sinc:<b>, bessel:<n> or gaussian:<sigma>")
    common.add_argument("--alpha", help="chirp strength (comma-separated list for sweeps)")
    common.add_argument("--t", help="evolution time (comma-separated list for sweeps)")
    common.add_argument("--n", type=int, help=f"grid points, power of two (default {DEFAULT_N})")
    common.add_argument("--xmin", type=float, help=f"left grid edge (default {DEFAULT_X_MIN:g})")
    common.add_argument("--xmax", type=float, help=f"right grid edge, exclusive (default {DEFAULT_X_MAX:g})")
    common.add_argument("--out", help="output directory (default $CHIRP_OUT_DIR or ./out)")
    common.add_argument("--jobs", type=int, help="worker threads for experiment cells (default: CPU count)")
    common.add_argument("--quad-panels", dest="quad_panels", type=int,
                        help=f"starting panel count of the theta quadrature (default {DEFAULT_QUADRATURE.panel_count})")
    common.add_argument("--config", help="key=value file; command-line flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("propagate", parents=[common], help="evolve one state, write CSV + report.json")
    p.add_argument("--method", choices=PROPAGATION_METHODS, help="evolution path (default psi0)")
    sub.add_parser("compare", parents=[common], help="print psi0/psi1/exact errors for one (alpha, t)")
    sub.add_parser("sweep", parents=[common], help="error table over lists of alpha and t")
    f = sub.add_parser("figure", parents=[common], help="reproduce figure data (fig1..fig4) or the invariance audit")
    f.add_argument("--id", choices=FIGURE_IDS + ("invariance",), help="figure to reproduce")
    sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    return parser


def read_config(path: str) -> dict:
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for number, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{number}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{number}: unknown key {key!r}")
        values[key] = value
    return values


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge config file values and defaults into the parsed flags."""
    config = read_config(args.config) if args.config else {}
    casts = {"n": int, "xmin": float, "xmax": float, "jobs": int, "quad_panels": int}
    for key in CONFIG_KEYS:
        if getattr(args, key, None) is None and key in config:
            raw = config[key]
            try:
                value = casts[key](raw) if key in casts else raw
            except ValueError:
                raise UsageError(f"config value for {key!r} is not valid: {raw!r}") from None
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.out is None:
        args.out = os.environ.get("CHIRP_OUT_DIR", "out")
    if args.jobs is None:
        args.jobs = default_jobs()
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    try:
        args.grid = Grid(args.n, args.xmin, args.xmax)
        args.quad = QuadratureSpec(panel_count=args.quad_panels)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return args


def _state(args, default=None):
    text = args.state or default
    if text is None:
        raise UsageError(f"{args.command} needs --state")
    try:
        state = parse_state(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if isinstance(state, Bessel):
        state = Bessel(state.n, args.quad)
    return state


def _single(args, name, default=None) -> float:
    raw = getattr(args, name)
    if raw is None:
        if default is None:
            raise UsageError(f"{args.command} needs --{name}")
        return default
    values = _float_list(raw)
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value for {args.command}")
    if values[0] < 0:
        raise UsageError(f"--{name} must be non-negative")
    return values[0]


def _list(args, name) -> list[float]:
    raw = getattr(args, name)
    if raw is None:
        raise UsageError(f"{args.command} needs --{name}")
    values = _float_list(raw)
    if not values or any(v < 0 for v in values):
        raise UsageError(f"--{name} needs non-negative values")
    return values


def cmd_propagate(args, out) -> int:
    state = _state(args)
    entry = propagate(state, _single(args, "alpha"), _single(args, "t"), args.method,
                      args.grid, args.out, args.quad)
    out.write(json.dumps(entry, indent=2) + "\n")
    return 0


def cmd_compare(args, out) -> int:
    state = _state(args)
    alpha, t = _single(args, "alpha"), _single(args, "t")
    try:
        errors, _ = compare_cell(state, alpha, t, args.grid, args.quad)
    except (AliasingError, QuadratureError) as exc:
        raise ExperimentError(f"compare: cell alpha={alpha:g}, t={t:g} failed: {exc}") from exc
    out.write(f"state {state.describe()} alpha {alpha:g} t {t:g}\n")
    for key in ("psi0_vs_exact", "psi1_vs_exact", "exact_vs_oracle"):
        value = errors[key]
        label = {"psi0_vs_exact": "err_psi0", "psi1_vs_exact": "err_psi1",
                 "exact_vs_oracle": "err_exact_vs_oracle"}[key]
        out.write(f"{label} {'n/a' if value is None else format(value, '.6e')}\n")
    return 0


def cmd_sweep(args, out) -> int:
    spec = ExperimentSpec("sweep", _state(args), _list(args, "alpha"), _list(args, "t"),
                          args.grid, Path(args.out), args.quad, args.jobs)
    report = run_experiment(spec)
    out.write("alpha t err_psi0 err_psi1 err_exact_vs_oracle f4\n")
    for c in report.cells:
        e = c["errors"]
        eo = "n/a" if e["exact_vs_oracle"] is None else f"{e['exact_vs_oracle']:.6e}"
        out.write(f"{c['alpha']:g} {c['t']:g} {e['psi0_vs_exact']:.6e} {e['psi1_vs_exact']:.6e} {eo} {c['f4']:.6e}\n")
    return 0


def cmd_figure(args, out) -> int:
    if args.id is None:
        raise UsageError("figure needs --id")
    if args.id == "invariance":
        spec = ExperimentSpec("invariance", _state(args, "sinc:1"), [_single(args, "alpha", 1.0)],
                              _list(args, "t") if args.t else [0.0, 1.0, 5.0],
                              args.grid, Path(args.out), args.quad, args.jobs)
    else:
        spec = figure_spec(args.id, args.out, args.grid, args.quad, args.jobs)
    report = run_experiment(spec)
    out.write(f"{spec.id}: wrote {', '.join(report.files)} and report.json to {spec.directory}\n")
    return 0


def cmd_selftest(args, out) -> int:
    results = checks.run_checks()
    for r in results:
        out.write(checks.format_result(r) + "\n")
    directory = Path(args.out) / "selftest"
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "report.json").write_text(
        json.dumps({"checks": [r.to_dict() for r in results]}, indent=2) + "\n"
    )
    failed = [r for r in results if not r.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return 0 if not failed else 1


HANDLERS = {
    "propagate": cmd_propagate,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args = resolve(args)
        return HANDLERS[args.command](args, sys.stdout)
    except UsageError as exc:
        print(f"chirpwave: error: {exc}", file=sys.stderr)
        return 2
    except (ExperimentError, AliasingError, QuadratureError) as exc:
        print(f"chirpwave: numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"chirpwave: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
