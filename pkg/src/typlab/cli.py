"""Command-line interface.

Subcommands::

    typlab run     --config cfg.json [--out DIR] [--seed U64]
    typlab verify  --config cfg.json
    typlab moments --config cfg.json
    typlab plot    --stats stats.csv [--trajectories trajectories.csv] --out fig.svg

``--seed`` overrides the config's base seed, ``--out`` its output
directory.  The environment variable ``TYPLAB_THREADS`` caps trajectory
worker parallelism (unset or 0 means the serial default).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config
from .csvio import read_stats_csv, read_trajectories_csv
from .errors import TyplabError
from .experiment import execute_run, moment_flags
from .models import build_observable_pm1, OBSERVABLE_STREAM
from .operators import spectral_moments
from .rng import child_seed
from .svgplot import render_figure
from .verify import format_report, run_verification


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typlab",
        description="Numerical laboratory for dynamical typicality of quantum "
        "expectation values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and write its outputs")
    run.add_argument("--config", required=True, help="JSON config path")
    run.add_argument("--out", default=None, help="output directory (overrides config)")
    run.add_argument("--seed", type=int, default=None, help="base seed (overrides config)")

    verify = sub.add_parser("verify", help="run the verification suite")
    verify.add_argument("--config", required=True, help="JSON config path")

    moments = sub.add_parser("moments", help="print the observable's spectral moments")
    moments.add_argument("--config", required=True, help="JSON config path")

    plot = sub.add_parser("plot", help="render a run's CSV outputs as SVG")
    plot.add_argument("--stats", required=True, help="stats.csv path")
    plot.add_argument("--trajectories", default=None, help="trajectories.csv path")
    plot.add_argument("--out", required=True, help="output SVG path")

    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config).with_overrides(out_dir=args.out, base_seed=args.seed)
    result = execute_run(config)
    print(f"wrote {result.stats_path}")
    if result.trajectories_path is not None:
        print(f"wrote {result.trajectories_path}")
    print(f"wrote {result.meta_path}")
    if result.plot_path is not None:
        print(f"wrote {result.plot_path}")
    return 0


def _cmd_verify(args) -> int:
    config = load_config(args.config)
    results = run_verification(config)
    print(format_report(results))
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"verification failed: {failed[0].name}", file=sys.stderr)
        return 1
    return 0


def _cmd_moments(args) -> int:
    config = load_config(args.config)
    observable = build_observable_pm1(
        config.model.n, child_seed(config.model.seed, OBSERVABLE_STREAM)
    )
    moments = spectral_moments(observable)
    print(f"{'i':>2}  {'c_i':>22}")
    for i in range(1, 9):
        print(f"{i:>2}  {moments[i]:>22.15g}")
    flags = moment_flags(moments)
    for flag in flags:
        print(f"FLAG: {flag}")
    if not flags:
        print("all moment gates satisfied")
    return 0


def _cmd_plot(args) -> int:
    stats = read_stats_csv(args.stats)
    trajectories = None
    if args.trajectories is not None:
        trajectories = read_trajectories_csv(args.trajectories)
    Path(args.out).write_text(render_figure(stats, trajectories))
    print(f"wrote {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "run": _cmd_run,
        "verify": _cmd_verify,
        "moments": _cmd_moments,
        "plot": _cmd_plot,
    }[args.command]
    try:
        return handler(args)
    except TyplabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
