"""typlab: a numerical laboratory for dynamical typicality of quantum
expectation values.

Builds constrained pure-state ensembles over model Hamiltonians,
propagates exact Schroedinger dynamics through dense eigendecomposition,
and checks ensemble statistics against closed-form Hilbert-space-average
formulas and the time-independent variance bound.
"""

from .config import ExperimentConfig, OutputSettings, TimeSettings, load_config
from .ensembles import (
    OmegaParams,
    StateVector,
    average_density,
    commuting_unitary,
    make_omega,
    make_omegas,
    sample_uniform_state,
    sample_uniform_states,
)
from .errors import TyplabError
from .evolution import (
    TimeGrid,
    TrajectoryRecord,
    evolve_state,
    expectation,
    expectations,
    run_ensemble,
    run_trajectory,
)
from .experiment import RunResult, execute_run
from .models import (
    ModelSpec,
    ModelSystem,
    assemble_hamiltonian,
    build_h0,
    build_model,
    build_observable_pm1,
    build_v_constant,
    build_v_gaussian,
)
from .operators import (
    HermitianOperator,
    SpectralDecomposition,
    SpectralMoments,
    eigendecompose,
    heisenberg_observable,
    hilbert_schmidt_inner,
    spectral_moment,
    spectral_moments,
    validate_hermitian,
)
from .rng import RNG_ALGORITHM, SeedStream, child_seed, mix64
from .stats import (
    EnsembleStats,
    exact_hv_series,
    ha_uniform,
    hv_at_time_exact,
    hv_uniform,
    mean_expectation_analytic,
    moment_map,
    norm_variance_analytic,
    sample_stats,
    variance_bound,
)
from .verify import CheckResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "EnsembleStats",
    "ExperimentConfig",
    "HermitianOperator",
    "ModelSpec",
    "ModelSystem",
    "OmegaParams",
    "OutputSettings",
    "RNG_ALGORITHM",
    "RunResult",
    "SeedStream",
    "SpectralDecomposition",
    "SpectralMoments",
    "StateVector",
    "TimeGrid",
    "TimeSettings",
    "TrajectoryRecord",
    "TyplabError",
    "assemble_hamiltonian",
    "average_density",
    "build_h0",
    "build_model",
    "build_observable_pm1",
    "build_v_constant",
    "build_v_gaussian",
    "child_seed",
    "commuting_unitary",
    "eigendecompose",
    "evolve_state",
    "exact_hv_series",
    "execute_run",
    "expectation",
    "expectations",
    "ha_uniform",
    "heisenberg_observable",
    "hilbert_schmidt_inner",
    "hv_at_time_exact",
    "hv_uniform",
    "load_config",
    "make_omega",
    "make_omegas",
    "mean_expectation_analytic",
    "mix64",
    "moment_map",
    "norm_variance_analytic",
    "run_ensemble",
    "run_trajectory",
    "run_verification",
    "sample_stats",
    "sample_uniform_state",
    "sample_uniform_states",
    "spectral_moment",
    "spectral_moments",
    "validate_hermitian",
    "variance_bound",
]
