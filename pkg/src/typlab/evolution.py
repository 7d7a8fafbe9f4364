"""Exact time evolution through the spectral decomposition, and
per-trajectory expectation-value time series.

One eigendecomposition of H is reused for every trajectory and time: a
state is rotated into the energy eigenbasis once, diagonal phases are
applied per time point, and the expectation value is evaluated there.  The
imaginary residue of each expectation value is checked, never silently
discarded.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ensembles import OmegaParams, StateVector, make_omega, sample_uniform_state
from .errors import DimensionMismatchError, NonHermitianResidueError
from .operators import HermitianOperator, SpectralDecomposition
from .rng import child_seed

logger = logging.getLogger(__name__)

IMAG_RESIDUE_RTOL = 1e-10

THREADS_ENV_VAR = "TYPLAB_THREADS"


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing times starting at 0 (units of inverse energy)."""

    times: np.ndarray

    def __post_init__(self):
        t = np.array(self.times, dtype=np.float64, copy=True)
        if t.ndim != 1 or t.size < 2:
            raise ValueError(f"time grid needs at least 2 points, got shape {t.shape}")
        if not np.all(np.isfinite(t)):
            raise ValueError("time grid contains non-finite values")
        if t[0] != 0.0:
            raise ValueError(f"time grid must start at 0, got {t[0]}")
        if np.any(np.diff(t) <= 0):
            raise ValueError("time grid must be strictly increasing")
        t.flags.writeable = False
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, t_max: float, points: int) -> "TimeGrid":
        if points < 2:
            raise ValueError(f"grid needs at least 2 points, got {points}")
        if not t_max > 0:
            raise ValueError(f"t_max must be > 0, got {t_max}")
        return cls(np.linspace(0.0, t_max, points))

    def __len__(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class TrajectoryRecord:
    """Expectation-value series of one initial state on a time grid."""

    grid: TimeGrid
    values: np.ndarray
    norm0: float
    seed: int

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True)
        if vals.shape != self.grid.times.shape:
            raise DimensionMismatchError(
                f"values shape {vals.shape} does not match grid shape {self.grid.times.shape}"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


def evolve_state(dec: SpectralDecomposition, psi: StateVector, t: float) -> StateVector:
    """``U exp(-i w t) U^dagger psi``; norm-preserving by construction."""
    if psi.dim != dec.dim:
        raise DimensionMismatchError(
            f"state dim {psi.dim} does not match decomposition dim {dec.dim}"
        )
    u = dec.eigenvectors
    coeff = u.conj().T @ psi.amplitudes
    return StateVector(u @ (np.exp(-1j * dec.eigenvalues * t) * coeff))


def expectation(a_op: HermitianOperator, phi: StateVector) -> float:
    """Re <phi|A|phi>, after asserting the imaginary residue is negligible.

    The residue tolerance is relative to the squared norm of the state; a
    violation signals a Hermiticity bug upstream and raises
    :class:`NonHermitianResidueError`.
    """
    if phi.dim != a_op.dim:
        raise DimensionMismatchError(
            f"state dim {phi.dim} does not match observable dim {a_op.dim}"
        )
    value = complex(np.vdot(phi.amplitudes, a_op.matrix @ phi.amplitudes))
    if abs(value.imag) > IMAG_RESIDUE_RTOL * phi.norm_sq:
        raise NonHermitianResidueError(
            f"imaginary residue {value.imag:.3e} exceeds "
            f"{IMAG_RESIDUE_RTOL:.0e} * ||phi||^2"
        )
    return value.real


def expectations(a_op: HermitianOperator, states: np.ndarray) -> np.ndarray:
    """Vectorized <phi|A|phi> for a (count, n) block of states."""
    if states.ndim != 2 or states.shape[1] != a_op.dim:
        raise DimensionMismatchError(
            f"state block shape {states.shape} does not match observable dim {a_op.dim}"
        )
    applied = states @ a_op.matrix.T
    values = np.sum(states.conj() * applied, axis=1)
    norms = np.sum(states.conj() * states, axis=1).real
    worst = float(np.abs(values.imag).max(initial=0.0))
    if worst > IMAG_RESIDUE_RTOL * float(norms.max(initial=1.0)):
        raise NonHermitianResidueError(
            f"imaginary residue {worst:.3e} exceeds {IMAG_RESIDUE_RTOL:.0e} * ||phi||^2"
        )
    return values.real


def _series_in_eigenbasis(
    eigenvalues: np.ndarray,
    a_eig: np.ndarray,
    state_eig: np.ndarray,
    times: np.ndarray,
    norm_sq: float,
) -> np.ndarray:
    """Expectation series for one eigenbasis state, all times at once."""
    phases = np.exp(np.outer(-1j * eigenvalues, times))
    evolved = phases * state_eig[:, None]
    values = np.sum(evolved.conj() * (a_eig @ evolved), axis=0)
    worst = float(np.abs(values.imag).max(initial=0.0))
    if worst > IMAG_RESIDUE_RTOL * norm_sq:
        raise NonHermitianResidueError(
            f"imaginary residue {worst:.3e} exceeds {IMAG_RESIDUE_RTOL:.0e} * ||omega||^2"
        )
    return values.real


def run_trajectory(
    dec: SpectralDecomposition,
    a_op: HermitianOperator,
    omega0: StateVector,
    grid: TimeGrid,
) -> TrajectoryRecord:
    """The series a(t_k) = <omega(t_k)|A|omega(t_k)> for one initial state.

    The state is rotated into the energy eigenbasis once; every time point
    is a diagonal phase application.  The ``seed`` field is set to -1; use
    :func:`run_ensemble` for seed-tracked trajectories.
    """
    if not (dec.dim == a_op.dim == omega0.dim):
        raise DimensionMismatchError(
            f"dims differ: decomposition {dec.dim}, observable {a_op.dim}, "
            f"state {omega0.dim}"
        )
    u = dec.eigenvectors
    a_eig = u.conj().T @ a_op.matrix @ u
    state_eig = u.conj().T @ omega0.amplitudes
    values = _series_in_eigenbasis(
        dec.eigenvalues, a_eig, state_eig, grid.times, omega0.norm_sq
    )
    return TrajectoryRecord(grid=grid, values=values, norm0=omega0.norm_sq, seed=-1)


def worker_count(workers: int | None = None) -> int:
    """Resolve the trajectory worker count (argument, else TYPLAB_THREADS)."""
    if workers is None:
        raw = os.environ.get(THREADS_ENV_VAR, "")
        try:
            workers = int(raw) if raw else 0
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", THREADS_ENV_VAR, raw)
            workers = 0
    return max(1, workers)


def run_ensemble(
    dec: SpectralDecomposition,
    a_op: HermitianOperator,
    params: OmegaParams,
    m: int,
    base_seed: int,
    grid: TimeGrid,
    workers: int | None = None,
) -> list[TrajectoryRecord]:
    """M trajectories from deterministically derived per-trajectory seeds.

    Trajectory i samples its uniform state from ``child_seed(base_seed, i)``
    and applies the deviation map.  Results are ordered by index and do not
    depend on the worker count or execution order.  Initial values far from
    the analytic ensemble mean (3 sigma of the variance bound) are logged.
    """
    if m < 1:
        raise ValueError(f"trajectory count must be >= 1, got {m}")
    if not (dec.dim == a_op.dim == params.observable.dim):
        raise DimensionMismatchError(
            f"dims differ: decomposition {dec.dim}, observable {a_op.dim}, "
            f"deviation observable {params.observable.dim}"
        )
    n = dec.dim
    u = dec.eigenvectors
    a_eig = u.conj().T @ a_op.matrix @ u
    seeds = [child_seed(base_seed, i) for i in range(m)]

    def one(seed: int) -> TrajectoryRecord:
        psi = sample_uniform_state(n, seed)
        omega = make_omega(psi, params)
        state_eig = u.conj().T @ omega.amplitudes
        values = _series_in_eigenbasis(
            dec.eigenvalues, a_eig, state_eig, grid.times, omega.norm_sq
        )
        return TrajectoryRecord(grid=grid, values=values, norm0=omega.norm_sq, seed=seed)

    count = worker_count(workers)
    if count > 1:
        with ThreadPoolExecutor(max_workers=count) as pool:
            records = list(pool.map(one, seeds))
    else:
        records = [one(seed) for seed in seeds]

    band = params.start_value_band
    if band is not None:
        center, spread = band
        for record in records:
            if abs(record.values[0] - center) > spread:
                logger.warning(
                    "trajectory seed %d starts at %.4f, outside %.4f +/- %.4f",
                    record.seed,
                    record.values[0],
                    center,
                    spread,
                )
    return records
