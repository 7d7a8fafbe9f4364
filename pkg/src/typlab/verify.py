"""End-to-end verification checks: Monte Carlo estimates against every
closed-form ensemble formula, bound domination (exact and sampled),
commuting-unitary invariance, Schroedinger/Heisenberg picture equivalence,
and the 1/n scaling of the typicality variance.

Each check is deterministic given the config's base seed; Monte Carlo
streams use dedicated child indices far above the trajectory range.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ExperimentConfig
from .ensembles import (
    OmegaParams,
    commuting_unitary,
    make_omega,
    make_omegas,
    sample_uniform_state,
    sample_uniform_states,
)
from .errors import TyplabError
from .evolution import TimeGrid, evolve_state, expectation, expectations, run_ensemble
from .models import ModelSpec, build_model
from .operators import (
    HermitianOperator,
    eigendecompose,
    heisenberg_observable,
    spectral_moments,
)
from .experiment import moment_flags
from .rng import child_seed
from .stats import (
    exact_hv_series,
    ha_uniform,
    hv_uniform,
    mean_expectation_analytic,
    norm_variance_analytic,
    sample_stats,
    variance_bound,
)

N_UNIFORM_SAMPLES = 20_000
N_OMEGA_SAMPLES = 10_000
N_COMMUTING_STATES = 100
N_COMMUTING_UNITARIES = 10
N_PICTURE_STATES = 5
SCALING_DIMS = (100, 200, 400, 800)
SCALING_GRID_POINTS = 25

UNIFORM_MC_STREAM = 0x7E000001
OMEGA_MC_STREAM = 0x7E000002
COMMUTING_STATE_STREAM = 0x7E000003
COMMUTING_UNITARY_STREAM = 0x7E000004
PICTURE_STATE_STREAM = 0x7E000005

BOUND_EXCEED_FRACTION = 0.01
BOUND_EXCEED_FACTOR = 1.5


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: str
    criterion: str
    margin: float  # fraction of the allowance left; negative means failed


def _result(name: str, error: float, tolerance: float, measured: str, criterion: str) -> CheckResult:
    margin = 1.0 - error / tolerance if tolerance > 0 else (1.0 if error == 0 else -np.inf)
    return CheckResult(name, error <= tolerance, measured, criterion, float(margin))


def run_verification(
    config: ExperimentConfig,
    observable_override: HermitianOperator | None = None,
    workers: int | None = None,
) -> list[CheckResult]:
    """Run every verification check; returns results in a fixed order.

    ``observable_override`` substitutes the model's observable (a test
    hook for corrupted-observable negative tests).
    """
    if config.d < 0:
        raise TyplabError("verification requires d >= 0 (the variance bound does)")
    model = build_model(config.model)
    a = observable_override if observable_override is not None else model.observable
    n = a.dim
    d = config.d
    base = config.base_seed
    results: list[CheckResult] = []

    moments = spectral_moments(a)
    flags = moment_flags(moments)
    results.append(
        CheckResult(
            "moment-gate",
            not flags,
            "; ".join(flags) if flags else f"c1..c8 = {['%.3g' % v for v in moments.as_list()]}",
            "|c1| <= 1e-12; even c_i in [0.1, 10]; odd |c_i| <= 10",
            1.0 if not flags else -1.0,
        )
    )

    # Uniform-ensemble mean and variance against the Monte Carlo estimator.
    psis = sample_uniform_states(n, N_UNIFORM_SAMPLES, child_seed(base, UNIFORM_MC_STREAM))
    vals = expectations(a, psis)
    ha = ha_uniform(a)
    hv = hv_uniform(a)
    se = float(vals.std(ddof=1)) / np.sqrt(N_UNIFORM_SAMPLES)
    err = abs(float(vals.mean()) - ha)
    results.append(
        _result(
            "uniform-mean",
            err,
            3 * se,
            f"sample {vals.mean():.6f} vs analytic {ha:.6f}",
            f"|diff| <= 3 SE = {3 * se:.2e} ({N_UNIFORM_SAMPLES} states)",
        )
    )
    var_err = abs(float(vals.var(ddof=1)) - hv)
    results.append(
        _result(
            "uniform-variance",
            var_err,
            max(0.10 * hv, 1e-20),
            f"sample {vals.var(ddof=1):.4e} vs analytic {hv:.4e}",
            "relative error <= 10%",
        )
    )

    # Substitute-ensemble norm and expectation statistics.
    params = OmegaParams(d=d, observable=a)
    c3, c4 = params.c3_c4
    c8 = moments[8]
    eq_norm_var = norm_variance_analytic(d, c3, c4, n)
    eq_mean = mean_expectation_analytic(d, c3)
    eq_bound = variance_bound(d, c4, c8, n)
    omegas = make_omegas(
        sample_uniform_states(n, N_OMEGA_SAMPLES, child_seed(base, OMEGA_MC_STREAM)), params
    )
    norms = np.sum(omegas.conj() * omegas, axis=1).real
    tol = max(3 * np.sqrt(eq_norm_var / N_OMEGA_SAMPLES), 1e-12)
    results.append(
        _result(
            "omega-norm-mean",
            abs(float(norms.mean()) - 1.0),
            tol,
            f"sample {norms.mean():.6f} vs analytic 1",
            f"|diff| <= 3 sigma = {tol:.2e} ({N_OMEGA_SAMPLES} states)",
        )
    )
    results.append(
        _result(
            "omega-norm-variance",
            abs(float(norms.var(ddof=1)) - eq_norm_var),
            max(0.15 * eq_norm_var, 1e-20),
            f"sample {norms.var(ddof=1):.4e} vs analytic {eq_norm_var:.4e}",
            "relative error <= 15%",
        )
    )
    qev = expectations(a, omegas)
    tol = max(3 * np.sqrt(eq_bound / N_OMEGA_SAMPLES), 1e-12)
    results.append(
        _result(
            "omega-mean-qev",
            abs(float(qev.mean()) - eq_mean),
            tol,
            f"sample {qev.mean():.6f} vs analytic {eq_mean:.6f}",
            f"|diff| <= 3 sigma of bound = {tol:.2e}",
        )
    )

    # Bound domination, exact and sampled, on the config's grid.
    dec = eigendecompose(model.hamiltonian)
    grid = TimeGrid.uniform(config.time.t_max, config.time.points)
    series = exact_hv_series(a, dec, d, grid.times)
    worst = float((series - eq_bound).max())
    results.append(
        _result(
            "bound-exact",
            max(worst, 0.0),
            1e-10,
            f"max(exact HV - bound) = {worst:.2e}",
            "exact HV <= bound + 1e-10 at every grid point",
        )
    )
    records = run_ensemble(
        dec, a, params, config.num_trajectories, base, grid, workers=workers
    )
    stats = sample_stats(records)
    exceed_fraction = float((stats.variance > eq_bound).mean())
    worst_ratio = float((stats.variance / eq_bound).max())
    sampled_ok = exceed_fraction <= BOUND_EXCEED_FRACTION and worst_ratio <= BOUND_EXCEED_FACTOR
    results.append(
        CheckResult(
            "bound-sampled",
            sampled_ok,
            f"{exceed_fraction * 100:.1f}% of points exceed; worst var/bound = {worst_ratio:.3f}",
            f"<= {BOUND_EXCEED_FRACTION * 100:.0f}% of points exceed, none beyond "
            f"{BOUND_EXCEED_FACTOR:.1f}x (M = {config.num_trajectories})",
            float(
                min(
                    1.0 - exceed_fraction / BOUND_EXCEED_FRACTION,
                    1.0 - (worst_ratio - 1.0) / (BOUND_EXCEED_FACTOR - 1.0),
                )
            ),
        )
    )

    # Per-state invariance under unitaries commuting with the observable.
    state_base = child_seed(base, COMMUTING_STATE_STREAM)
    unitary_base = child_seed(base, COMMUTING_UNITARY_STREAM)
    worst_shift = 0.0
    for i in range(N_COMMUTING_STATES):
        omega = make_omega(sample_uniform_state(n, child_seed(state_base, i)), params)
        reference = expectation(a, omega)
        for j in range(N_COMMUTING_UNITARIES):
            u = commuting_unitary(a, child_seed(unitary_base, j))
            rotated = type(omega)(u @ omega.amplitudes)
            worst_shift = max(worst_shift, abs(expectation(a, rotated) - reference))
    results.append(
        _result(
            "commuting-invariance",
            worst_shift,
            1e-10,
            f"max |<Uw|A|Uw> - <w|A|w>| = {worst_shift:.2e}",
            f"<= 1e-10 over {N_COMMUTING_STATES} states x {N_COMMUTING_UNITARIES} unitaries",
        )
    )

    # Schroedinger vs Heisenberg evaluation on a small sibling model.
    n_pe = min(n, 100)
    pe_spec = ModelSpec(
        n=n_pe,
        delta_e=config.model.delta_e,
        v_kind=config.model.v_kind,
        v_scale=config.model.v_scale,
        seed=config.model.seed,
        v_diagonal=config.model.v_diagonal,
    )
    pe_model = build_model(pe_spec)
    pe_dec = eigendecompose(pe_model.hamiltonian)
    pe_params = OmegaParams(d=d, observable=pe_model.observable)
    pe_base = child_seed(base, PICTURE_STATE_STREAM)
    pe_times = np.linspace(0.0, config.time.t_max, 8)
    worst_pe = 0.0
    for i in range(N_PICTURE_STATES):
        omega = make_omega(sample_uniform_state(n_pe, child_seed(pe_base, i)), pe_params)
        for t in pe_times:
            schroedinger = expectation(pe_model.observable, evolve_state(pe_dec, omega, t))
            heisenberg = expectation(
                heisenberg_observable(pe_model.observable, pe_dec, t), omega
            )
            worst_pe = max(worst_pe, abs(schroedinger - heisenberg))
    results.append(
        _result(
            "picture-equivalence",
            worst_pe,
            1e-9,
            f"max |Schroedinger - Heisenberg| = {worst_pe:.2e}",
            f"<= 1e-9 at n = {n_pe}, {N_PICTURE_STATES} states x {len(pe_times)} times",
        )
    )

    # 1/n scaling of the maximal exact HV over matched models.
    max_hv = []
    for size in SCALING_DIMS:
        scale = config.model.n / size
        spec_k = ModelSpec(
            n=size,
            delta_e=config.model.delta_e * scale,
            v_kind=config.model.v_kind,
            v_scale=config.model.v_scale * scale**2,
            seed=config.model.seed,
            v_diagonal=config.model.v_diagonal,
        )
        model_k = build_model(spec_k)
        dec_k = eigendecompose(model_k.hamiltonian)
        times_k = np.linspace(0.0, config.time.t_max, SCALING_GRID_POINTS)
        max_hv.append(float(exact_hv_series(model_k.observable, dec_k, d, times_k).max()))
    slope = float(np.polyfit(np.log(SCALING_DIMS), np.log(max_hv), 1)[0])
    results.append(
        CheckResult(
            "inverse-n-scaling",
            -1.3 <= slope <= -0.7,
            f"log-log slope = {slope:.3f} over n = {SCALING_DIMS}",
            "slope in [-1.3, -0.7]",
            float(1.0 - abs(slope + 1.0) / 0.3),
        )
    )

    return results


def format_report(results: list[CheckResult]) -> str:
    """Fixed-width pass/fail table with measured values and margins."""
    name_width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"[{status}] {r.name:<{name_width}}  margin {r.margin:+7.2f}  "
            f"{r.measured}  |  {r.criterion}"
        )
    failed = [r.name for r in results if not r.passed]
    lines.append(
        f"{len(results) - len(failed)}/{len(results)} checks passed"
        + (f"; first failing: {failed[0]}" if failed else "")
    )
    return "\n".join(lines)
