"""Command line entry point.

Subcommands
-----------
run     budget sweep from a config file, one CSV row per budget
build   single adaptive build saved as a JSON surrogate
leja    export Leja nodes for one distribution
eval    evaluate a saved surrogate at points read from a CSV
mean    print the quadrature mean of a saved surrogate
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .experiment import (
    ConfigError,
    ExperimentConfig,
    export_leja,
    resolve_model,
    rows_to_csv,
    run_experiment,
    write_rows,
)
from .sparse import SparseSurrogate, adaptive_build


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config)
    return cfg.with_overrides(
        seed=args.seed,
        output=args.output,
        reference_size=getattr(args, "reference_size", None),
        timing=False if getattr(args, "no_timing", False) else None,
    )


def _cmd_run(args) -> int:
    cfg = _config(args)
    log = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    rows = run_experiment(cfg, log=log)
    if cfg.output:
        write_rows(rows, cfg.output)
    else:
        sys.stdout.write(rows_to_csv(rows))
    return 0 if all(not r.status.startswith("failed") for r in rows) else 3


def _cmd_build(args) -> int:
    cfg = _config(args)
    if not cfg.output:
        raise ConfigError("build needs --output for the surrogate file")
    model, dists = resolve_model(cfg.model)
    budget = args.budget if args.budget is not None else cfg.budgets[-1]
    sur, report = adaptive_build(
        model, dists, budget=budget, tolerance=cfg.tolerance, strict_budget=cfg.strict_budget
    )
    sur.save(cfg.output)
    print(
        f"{sur.eval_count} evaluations, {report.iterations} iterations, "
        f"stopped on {report.termination_reason}, mean {sur.mean()!r}"
    )
    return 0


def _cmd_leja(args) -> int:
    try:
        record = json.loads(args.dist)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--dist is not valid JSON: {exc}") from None
    out = args.output or "/dev/stdout"
    export_leja(record, args.count, out, kind=args.kind, y0=args.y0, weights=args.weights)
    return 0


def _read_points(path, dim: int) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if rows:
        try:
            float(rows[0][0])
        except ValueError:
            rows = rows[1:]  # header
    pts = np.array([[float(v) for v in r] for r in rows], dtype=float).reshape(-1, dim) if rows else None
    if pts is None or pts.shape[1] != dim:
        raise ValueError(f"{path}: expected rows of {dim} numbers")
    return pts


def _cmd_eval(args) -> int:
    sur = SparseSurrogate.load(args.surrogate)
    pts = _read_points(args.points, sur.dim)
    vals = np.atleast_1d(sur(pts))
    outside = sur.outside_support(pts)
    if outside.any():
        print(f"warning: {int(outside.sum())} points lie outside the effective support", file=sys.stderr)
    lines = "".join(repr(float(v)) + "\n" for v in vals)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write("value\n" + lines)
    else:
        sys.stdout.write("value\n" + lines)
    return 0


def _cmd_mean(args) -> int:
    print(repr(SparseSurrogate.load(args.surrogate).mean()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lejasparse", description="Adaptive sparse Leja interpolation experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def experiment_flags(sp):
        sp.add_argument("--config", required=True, help="JSON experiment config")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--output", help="override the config output path")

    run = sub.add_parser("run", help="budget sweep")
    experiment_flags(run)
    run.add_argument("--reference-size", type=int, help="override the reference sample size")
    run.add_argument("--no-timing", action="store_true", help="leave wall_time_seconds empty")
    run.add_argument("--quiet", action="store_true")
    run.set_defaults(func=_cmd_run)

    build = sub.add_parser("build", help="single build saved as JSON")
    experiment_flags(build)
    build.add_argument("--budget", type=int, help="defaults to the largest config budget")
    build.set_defaults(func=_cmd_build)

    leja = sub.add_parser("leja", help="export Leja nodes")
    leja.add_argument("--dist", required=True, help='distribution record, e.g. \'{"type": "Normal", "mu": 0, "sigma": 1}\'')
    leja.add_argument("--count", type=int, required=True)
    leja.add_argument("--kind", choices=("weighted", "unweighted", "symmetric"), default="weighted")
    leja.add_argument("--y0", type=float, help="initial node")
    leja.add_argument("--weights", action="store_true", help="add E[l_i] column")
    leja.add_argument("--output")
    leja.set_defaults(func=_cmd_leja)

    ev = sub.add_parser("eval", help="evaluate a saved surrogate")
    ev.add_argument("surrogate")
    ev.add_argument("--points", required=True, help="CSV with one point per row")
    ev.add_argument("--output")
    ev.set_defaults(func=_cmd_eval)

    mean = sub.add_parser("mean", help="quadrature mean of a saved surrogate")
    mean.add_argument("surrogate")
    mean.set_defaults(func=_cmd_mean)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, RuntimeError) as exc:
        print(f"lejasparse {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
