"""Command-line front end.

Subcommands:
  simulate   replicate the rooted statistic at a single intensity
  sweep      geometric intensity grid; mean or variance growth summary
  clt        normal-distance trend along an intensity grid
  dickman    d=2 statistic against its cascade limit law
  theory     quadrature table of the limit constants

Flags shared across subcommands: --dim --alpha --s-min --s-max --s-ratio
--reps --seed --workers --out --config --quad-evals. A JSON file passed via
--config overrides any flag it names. MDSTLAB_WORKERS sets the default worker
count. Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .experiments import (
    CLT_CONVERGENCE,
    DICKMAN_COMPARE,
    MEAN_SWEEP,
    SIMULATE,
    VARIANCE_SWEEP,
    ExperimentConfig,
    RecordError,
    run_experiment,
    summary_path_for,
)
from .quadrature import QuadratureConfig, QuadratureError
from .theory import (
    compute_constants,
    export_constants,
    variance_constant_lower_bound,
    zeta_square_integral,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

_CONFIG_KEYS = (
    "dim",
    "alpha",
    "s_min",
    "s_max",
    "s_ratio",
    "reps",
    "seed",
    "workers",
    "out",
    "quad_evals",
    "mode",
)


def _default_workers() -> int:
    env = os.environ.get("MDSTLAB_WORKERS", "").strip()
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"MDSTLAB_WORKERS must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"MDSTLAB_WORKERS must be >= 1, got {value}")
        return value
    return 1


def _add_common(p: argparse.ArgumentParser, dim_default: int = 3) -> None:
    p.add_argument("--dim", type=int, default=dim_default, help="ambient dimension")
    p.add_argument("--alpha", type=float, default=1.0, help="power applied to edge lengths")
    p.add_argument("--s-min", type=float, default=100.0, help="smallest intensity")
    p.add_argument("--s-max", type=float, default=None, help="largest intensity (sweeps)")
    p.add_argument("--s-ratio", type=float, default=10.0, help="geometric step between intensities")
    p.add_argument("--reps", type=int, default=100, help="replications per intensity")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: MDSTLAB_WORKERS or 1)")
    p.add_argument("--out", type=Path, default=None, help="records CSV path (summary JSON lands next to it)")
    p.add_argument("--config", type=Path, default=None, help="JSON file overriding flags")
    p.add_argument("--quad-evals", type=int, default=10**6, help="quadrature evaluations per integral")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdstlab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="replicated statistic at one intensity")
    _add_common(p)

    p = sub.add_parser("sweep", help="mean/variance growth along an intensity grid")
    _add_common(p)
    p.add_argument("--mode", choices=["mean", "variance"], default="mean")

    p = sub.add_parser("clt", help="normal-distance trend along an intensity grid")
    _add_common(p)

    p = sub.add_parser("dickman", help="d=2 statistic vs its cascade limit")
    _add_common(p, dim_default=2)

    p = sub.add_parser("theory", help="limit-constant table via quadrature")
    _add_common(p)
    return parser


def _apply_config_file(args: argparse.Namespace) -> None:
    if args.config is None:
        return
    text = Path(args.config).read_text()
    try:
        overrides = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{args.config}: invalid JSON ({exc})") from None
    if not isinstance(overrides, dict):
        raise ValueError(f"{args.config}: top-level JSON value must be an object")
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if dest not in _CONFIG_KEYS:
            raise ValueError(f"{args.config}: unknown config key {key!r}")
        if not hasattr(args, dest):
            raise ValueError(f"{args.config}: key {key!r} does not apply to this subcommand")
        if dest == "out":
            value = Path(value)
        setattr(args, dest, value)


def _grid(args: argparse.Namespace, sweep: bool) -> tuple[float, ...]:
    s_min = float(args.s_min)
    if not sweep or args.s_max is None:
        return (s_min,)
    s_max = float(args.s_max)
    ratio = float(args.s_ratio)
    if ratio <= 1.0:
        raise ValueError(f"--s-ratio must exceed 1, got {ratio}")
    if s_max < s_min:
        raise ValueError(f"--s-max {s_max} is below --s-min {s_min}")
    grid = []
    s = s_min
    while s <= s_max * (1.0 + 1e-12):
        grid.append(s)
        s *= ratio
    return tuple(grid)


def _experiment_kind(args: argparse.Namespace) -> str:
    if args.command == "simulate":
        return SIMULATE
    if args.command == "sweep":
        return MEAN_SWEEP if args.mode == "mean" else VARIANCE_SWEEP
    if args.command == "clt":
        return CLT_CONVERGENCE
    return DICKMAN_COMPARE


def _run_experiment_command(args: argparse.Namespace) -> int:
    sweep = args.command in ("sweep", "clt")
    config = ExperimentConfig(
        kind=_experiment_kind(args),
        dimension=int(args.dim),
        alpha=float(args.alpha),
        s_grid=_grid(args, sweep),
        replications=int(args.reps),
        master_seed=int(args.seed),
        worker_count=int(args.workers) if args.workers is not None else _default_workers(),
        output_path=args.out,
    )
    records, summary = run_experiment(config)
    print(f"run {summary['run_id']}: {len(records)} records over {len(config.s_grid)} intensities")
    for row in summary["per_s"]:
        var = "-" if row["variance"] is None else f"{row['variance']:.6g}"
        print(
            f"  s={row['s']:<12g} mean={row['mean']:.6g} variance={var} "
            f"minimal={row['mean_minimal']:.4g}"
        )
    if "mean_fit" in summary and summary["mean_fit"]["slope"] is not None:
        fit = summary["mean_fit"]
        print(f"mean growth slope {fit['slope']:.6g} (expected {fit['expected_slope']:.6g})")
    if "variance_fit" in summary and summary["variance_fit"]["slope"] is not None:
        print(f"variance growth slope {summary['variance_fit']['slope']:.6g}")
    if "clt" in summary:
        clt = summary["clt"]
        print(f"final Kolmogorov distance {clt['final_kolmogorov']:.4g} (floor {clt['noise_floor']:.4g})")
        if clt["rate_regression"] is not None:
            print(f"rate slope {clt['rate_regression']['slope']:.4g}")
    if "dickman" in summary:
        dk = summary["dickman"]
        print(f"two-sample KS vs cascade limit: {dk['ks_distance']:.4g}")
    if config.output_path is not None:
        print(f"records: {config.output_path}")
        print(f"summary: {summary_path_for(config.output_path)}")
    return EXIT_OK


def _run_theory_command(args: argparse.Namespace) -> int:
    qc = QuadratureConfig(evaluations=int(args.quad_evals), seed=int(args.seed))
    constants = compute_constants(int(args.dim), float(args.alpha), qc)
    document = {
        "schema_version": 1,
        "table": export_constants([constants]),
        "zeta_square_integral": zeta_square_integral(int(args.dim)),
        "variance_constant_lower_bound": variance_constant_lower_bound(int(args.dim), float(args.alpha)),
    }
    w = constants.variance_constant
    print(f"d={args.dim} alpha={args.alpha:g}: mean coefficient {constants.mean_coefficient:.6g}")
    print(f"variance constant {w.value:.6f} +- {w.std_error:.2e} ({w.evaluations} evaluations)")
    if constants.variance_constant_alt is not None:
        alt = constants.variance_constant_alt
        print(f"decomposed form    {alt.value:.6f} +- {alt.std_error:.2e}")
    if args.out is not None:
        with open(args.out, "w") as fh:
            json.dump(document, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"table: {args.out}")
    else:
        json.dump(document, sys.stdout, indent=2, sort_keys=True)
        print()
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        _apply_config_file(args)
        if args.command == "theory":
            return _run_theory_command(args)
        return _run_experiment_command(args)
    except (RecordError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OverflowError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
