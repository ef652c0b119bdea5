"""Command-line interface.

Exit codes: 0 success, 1 validation error, 2 numerical failure. Errors go to
stderr as a single line starting with ``error:``.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import numpy as np

from . import closedform, serialize
from .dynamics import InputSpec, SimConfig, simulate
from .errors import ConfigError, NumericalError
from .hierarchy import HierarchyConfig, build_weight_matrix
from .spectral import numeric_spectrum, rate_autonomous, rate_with_input
from .sweep import (
    GridSpec,
    classify_lambda_region,
    fig3_grid,
    linear_grid,
    log_grid,
    sweep_autonomous_rate,
    sweep_input_rate,
    tradeoff_report,
)
from .verify import run_checks


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _grid_arg(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}")
    if n < 1 or lo <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"grid needs 0 < lo <= hi and n >= 1, got {text!r}")
    return lo, hi, n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--layers", type=int, default=2, help="depth L (default 2)")
    common.add_argument("--breadth", type=int, default=3, help="breadth M (default 3)")
    common.add_argument("--alpha", type=float, default=1.0, help="weight of the layer above")
    common.add_argument("--beta", type=float, default=1.0, help="weight of the layer below")
    common.add_argument("--out", help="output path (default stdout)")

    parser = _Parser(prog="hierconsensus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", parents=[common], help="weight matrix W")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("simulate", parents=[common], help="integrate the consensus dynamics")
    p.add_argument("--gamma-node", type=int, help="1-based node receiving the input (default M+2 when --gamma > 0)")
    p.add_argument("--gamma", type=float, default=0.0, help="input intensity")
    p.add_argument("--input-value", type=float, default=1.0, help="constant input value u")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--t-end", type=float, default=200.0)
    p.add_argument("--record-every", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="seed for the uniform [0,1] initial condition")
    p.add_argument("--x0-file", help="initial condition, one value per line")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues of W")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--analytic", action="store_true", help="closed form (L=2 only)")
    mode.add_argument("--numeric", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("rate", parents=[common], help="convergence rate")
    p.add_argument("--gamma-node", type=int)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--force-numeric", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("sweep", parents=[common], help="parameter grid over (alpha, beta)")
    p.add_argument("--mode", choices=("autonomous", "input", "region", "tradeoff"), default="autonomous")
    p.add_argument("--alpha-grid", type=_grid_arg, help="lo:hi:n")
    p.add_argument("--beta-grid", type=_grid_arg, help="lo:hi:n")
    p.add_argument("--log-spacing", action="store_true", help="geometric spacing for explicit grids")
    p.add_argument("--gamma", type=float, default=1.0, help="input intensity for input/tradeoff modes")
    p.add_argument("--gamma-node", type=int, help="input node (default M+2)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--tolerance-scale", type=float, default=1.0)
    return parser


def _config(args) -> HierarchyConfig:
    return HierarchyConfig(args.layers, args.breadth, args.alpha, args.beta)


def _input(args, n: int, M: int) -> InputSpec:
    if args.gamma < 0:
        raise ConfigError("--gamma must be nonnegative")
    if args.gamma == 0:
        if args.gamma_node is not None:
            raise ConfigError("--gamma-node given without a positive --gamma")
        return InputSpec.none(n)
    node = args.gamma_node if args.gamma_node is not None else M + 2
    return InputSpec.single(n, node, args.gamma, getattr(args, "input_value", 1.0))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    W = build_weight_matrix(_config(args))
    text = serialize.weight_matrix_to_csv(W) if args.format == "csv" else serialize.dumps(serialize.weight_matrix_to_json(W))
    _emit(text, args.out)
    return 0


def cmd_simulate(args) -> int:
    cfg = _config(args)
    W = build_weight_matrix(cfg)
    inp = _input(args, W.n, cfg.M)
    if args.x0_file:
        x0 = serialize.read_x0_file(args.x0_file, W.n)
    else:
        x0 = np.random.default_rng(args.seed).uniform(0.0, 1.0, W.n)
    traj = simulate(W, inp, x0, SimConfig(args.dt, args.t_end, args.record_every))
    if args.format == "csv":
        text = serialize.trajectory_to_csv(traj)
    else:
        text = serialize.dumps(serialize.trajectory_to_json(traj))
    _emit(text, args.out)
    return 0


def cmd_spectrum(args) -> int:
    cfg = _config(args)
    analytic = args.analytic or (not args.numeric and cfg.L == 2)
    if analytic:
        spec = closedform.analytic_spectrum_l2(cfg)
        text = serialize.spectrum_l2_to_csv(spec) if args.format == "csv" else serialize.dumps(serialize.spectrum_l2_to_json(spec))
    else:
        spec = numeric_spectrum(build_weight_matrix(cfg).entries)
        text = serialize.numeric_spectrum_to_csv(spec) if args.format == "csv" else serialize.dumps(serialize.numeric_spectrum_to_json(spec))
    _emit(text, args.out)
    return 0


def cmd_rate(args) -> int:
    cfg = _config(args)
    W = build_weight_matrix(cfg)
    inp = _input(args, W.n, cfg.M)
    if np.any(inp.gamma > 0):
        rate, method, kind = rate_with_input(W, inp), "numeric", "input"
    elif cfg.L == 2 and not args.force_numeric:
        rate, method, kind = closedform.rate_autonomous_l2(cfg), "analytic", "autonomous"
    else:
        rate, method, kind = rate_autonomous(W), "numeric", "autonomous"
    if args.format == "json":
        text = serialize.dumps({"rate": rate, "method": method, "kind": kind, "L": cfg.L, "M": cfg.M,
                                "alpha": cfg.alpha, "beta": cfg.beta})
    else:
        text = f"{rate:.7g}\n"
    _emit(text, args.out)
    return 0


def _axis(spec, default, log: bool) -> list[float]:
    if spec is None:
        return default
    return (log_grid if log else linear_grid)(*spec)


def cmd_sweep(args) -> int:
    M, L = args.breadth, args.layers
    default = log_grid(0.1, 10.0, 40)
    if args.mode == "tradeoff":
        if L != 2:
            raise ConfigError("tradeoff mode is defined for L=2 only")
        alphas = _axis(args.alpha_grid, default, args.log_spacing)
        report = tradeoff_report(M, args.beta, args.gamma, alphas)
        text = serialize.tradeoff_to_csv(report) if args.format == "csv" else serialize.dumps(serialize.tradeoff_to_json(report))
        _emit(text, args.out)
        return 0

    if args.mode == "region" and args.alpha_grid is None and args.beta_grid is None:
        grid = fig3_grid(M)
    else:
        alphas = _axis(args.alpha_grid, default, args.log_spacing)
        betas = _axis(args.beta_grid, default, args.log_spacing)
        gamma = args.gamma if args.mode == "input" else 0.0
        grid = GridSpec(tuple(alphas), tuple(betas), M=M, L=L, gamma=gamma, input_node=args.gamma_node)
    if args.mode == "region":
        result = classify_lambda_region(grid, workers=args.workers)
    elif args.mode == "input":
        result = sweep_input_rate(grid, workers=args.workers)
    else:
        result = sweep_autonomous_rate(grid, workers=args.workers)
    text = serialize.sweep_to_csv(result) if args.format == "csv" else serialize.dumps(serialize.sweep_to_json(result))
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    if not args.tolerance_scale > 0:
        raise ConfigError("--tolerance-scale must be positive")
    checks = run_checks(_config(args), args.tolerance_scale)
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{'PASS' if not failed else 'FAIL'} summary {len(checks) - failed}/{len(checks)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if not failed else 2


COMMANDS = {
    "build": cmd_build,
    "simulate": cmd_simulate,
    "spectrum": cmd_spectrum,
    "rate": cmd_rate,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
