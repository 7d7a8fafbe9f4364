"""Experiment orchestration: build the model, propagate the ensemble,
aggregate statistics, and emit the output files.

Outputs per run directory:

* ``stats.csv`` -- ``t,mean,variance,bound`` (the bound column repeats the
  time-independent analytic value);
* ``trajectories.csv`` (optional) -- ``t,traj_0,...,traj_{M-1}``;
* ``meta`` -- JSON record of the config echo, RNG algorithm identifier,
  seed derivation rule, all derived seeds, the observable's spectral
  moments, and the analytic ensemble values;
* ``plot.svg`` (optional) -- trajectories, mean, and the variance inset.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, config_as_dict
from .csvio import write_stats_csv, write_trajectories_csv
from .ensembles import OmegaParams
from .evolution import TimeGrid, TrajectoryRecord, run_ensemble
from .models import ModelSystem, build_model
from .operators import SpectralMoments, eigendecompose, spectral_moments
from .rng import RNG_ALGORITHM, child_seed
from .stats import (
    EnsembleStats,
    mean_expectation_analytic,
    norm_variance_analytic,
    sample_stats,
    variance_bound,
)
from .svgplot import render_figure

SEED_DERIVATION = "child_seed(i) = mix64(base_seed XOR (i+1)*0x9e3779b97f4a7c15)"


@dataclass(frozen=True)
class RunResult:
    """Everything a run produced, with the paths that were written."""

    config: ExperimentConfig
    model: ModelSystem
    records: list[TrajectoryRecord]
    stats: EnsembleStats
    moments: SpectralMoments
    bound: float
    out_dir: Path
    stats_path: Path
    trajectories_path: Path | None
    meta_path: Path
    plot_path: Path | None


def execute_run(
    config: ExperimentConfig,
    out_dir: str | Path | None = None,
    workers: int | None = None,
) -> RunResult:
    """Run one experiment and write its outputs.

    ``out_dir`` overrides the config's output directory.  All file writes
    happen after aggregation, single-writer.
    """
    out = Path(out_dir if out_dir is not None else config.output.directory)
    out.mkdir(parents=True, exist_ok=True)

    model = build_model(config.model)
    dec = eigendecompose(model.hamiltonian)
    params = OmegaParams(d=config.d, observable=model.observable)
    grid = TimeGrid.uniform(config.time.t_max, config.time.points)
    records = run_ensemble(
        dec,
        model.observable,
        params,
        config.num_trajectories,
        config.base_seed,
        grid,
        workers=workers,
    )
    stats = sample_stats(records)

    moments = spectral_moments(model.observable)
    bound = variance_bound(config.d, moments[4], moments[8], config.model.n)

    stats_path = out / "stats.csv"
    write_stats_csv(stats_path, stats.times, stats.mean, stats.variance, bound)

    trajectories_path = None
    if config.output.emit_trajectories:
        trajectories_path = out / "trajectories.csv"
        values = np.stack([record.values for record in records])
        write_trajectories_csv(trajectories_path, stats.times, values)

    meta_path = out / "meta"
    meta = {
        "config": config_as_dict(config),
        "rng_algorithm": RNG_ALGORITHM,
        "seed_derivation": SEED_DERIVATION,
        "seeds": {
            "observable": model.observable_seed,
            "perturbation": model.perturbation_seed,
            "trajectories": [
                child_seed(config.base_seed, i) for i in range(config.num_trajectories)
            ],
        },
        "spectral_moments": {f"c{i}": moments[i] for i in range(1, 9)},
        "analytic": {
            "norm_variance": norm_variance_analytic(
                config.d, moments[3], moments[4], config.model.n
            ),
            "mean_expectation": mean_expectation_analytic(config.d, moments[3]),
            "variance_bound": bound,
        },
    }
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")

    plot_path = None
    if config.output.emit_plot:
        plot_path = out / "plot.svg"
        stats_columns = {
            "t": stats.times,
            "mean": stats.mean,
            "variance": stats.variance,
            "bound": np.full_like(stats.times, bound),
        }
        trajectories = None
        if config.output.emit_trajectories:
            trajectories = (stats.times, np.stack([r.values for r in records]))
        plot_path.write_text(render_figure(stats_columns, trajectories))

    return RunResult(
        config=config,
        model=model,
        records=records,
        stats=stats,
        moments=moments,
        bound=bound,
        out_dir=out,
        stats_path=stats_path,
        trajectories_path=trajectories_path,
        meta_path=meta_path,
        plot_path=plot_path,
    )


def moment_flags(moments: SpectralMoments) -> list[str]:
    """Human-readable flags for moments violating the observable gates.

    The trace must vanish (|c1| <= 1e-12).  Even moments must be of order
    one (inside [0.1, 10]); odd moments may vanish by spectral symmetry, so
    they are flagged only when their magnitude leaves order one upward.
    """
    flags = []
    if abs(moments[1]) > 1e-12:
        flags.append(f"c1 = {moments[1]:.3e} violates the trace-free requirement")
    for i in range(2, 9):
        value = moments[i]
        if i % 2 == 0 and not 0.1 <= value <= 10.0:
            flags.append(f"c{i} = {value:.6g} outside the order-one window [0.1, 10]")
        if i % 2 == 1 and abs(value) > 10.0:
            flags.append(f"c{i} = {value:.6g} above the order-one window (|c{i}| > 10)")
    return flags
