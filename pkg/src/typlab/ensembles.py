"""Pure-state ensembles: uniform (Haar) samples, the near-constrained
substitute ensemble, its analytic average projector, and commuting
unitaries for invariance tests.

Uniform states are sampled by drawing all real and imaginary amplitude
components as independent standard normals and normalizing; the resulting
distribution on the unit sphere is invariant under every unitary.  The
substitute ensemble applies ``(1 + d A)/sqrt(1 + d^2)`` to a uniform state
and is deliberately not renormalized: its norm spread is part of what the
closed-form statistics describe.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatchError, NotDiagonalError
from .operators import HermitianOperator
from .rng import SeedStream
from .stats import mean_expectation_analytic, norm_variance_analytic, variance_bound

logger = logging.getLogger(__name__)

NORM_BAND_SIGMAS = 10.0


@dataclass(frozen=True)
class StateVector:
    """A complex amplitude vector; immutable after construction."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amp.ndim != 1 or amp.size == 0:
            raise DimensionMismatchError(f"expected a 1-d state, got shape {amp.shape}")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class OmegaParams:
    """Deviation parameter and observable defining the substitute ensemble.

    ``d`` must satisfy |d| < 1: the reachable mean expectation value
    saturates well below the extreme eigenvalues, and the closed-form
    statistics target the small-deviation regime.
    """

    d: float
    observable: HermitianOperator

    def __post_init__(self):
        if not np.isfinite(self.d) or abs(self.d) >= 1:
            raise ValueError(f"deviation parameter must satisfy |d| < 1, got {self.d}")

    @cached_property
    def c3_c4(self) -> tuple[float, float]:
        """Third and fourth spectral moments of the observable."""
        a = self.observable
        n = a.dim
        if a.is_diagonal():
            diag = a.real_diagonal()
            return float(np.mean(diag**3)), float(np.mean(diag**4))
        a2 = a.matrix @ a.matrix
        c3 = float(np.vdot(a.matrix, a2).real) / n
        c4 = float(np.vdot(a2, a2).real) / n
        return c3, c4

    @cached_property
    def norm_sq_band(self) -> tuple[float, float]:
        """Soft plausibility band for omega norms: 1 +/- 10 sqrt(norm HV)."""
        c3, c4 = self.c3_c4
        spread = NORM_BAND_SIGMAS * np.sqrt(
            norm_variance_analytic(self.d, c3, c4, self.observable.dim)
        )
        return 1.0 - spread, 1.0 + spread

    @cached_property
    def start_value_band(self) -> tuple[float, float] | None:
        """Analytic mean of initial expectation values and a 3-sigma spread
        from the variance bound; None when the bound does not apply (d < 0)
        or the eighth moment is not cheap (non-diagonal observable)."""
        if self.d < 0 or not self.observable.is_diagonal():
            return None
        diag = self.observable.real_diagonal()
        c3, c4 = self.c3_c4
        c8 = float(np.mean(diag**8))
        center = mean_expectation_analytic(self.d, c3)
        spread = 3.0 * np.sqrt(variance_bound(self.d, c4, c8, self.observable.dim))
        return center, spread


def sample_uniform_state(n: int, seed: int) -> StateVector:
    """One state from the uniform distribution of normalized states.

    Draws 2n standard normals from the seed's stream (first n are the real
    parts, next n the imaginary parts) and normalizes to unit norm.
    """
    if n < 1:
        raise DimensionMismatchError(f"dimension must be >= 1, got {n}")
    z = SeedStream(seed).normal(2 * n)
    amp = z[:n] + 1j * z[n:]
    return StateVector(amp / np.linalg.norm(amp))


def sample_uniform_states(n: int, count: int, seed: int) -> np.ndarray:
    """``count`` uniform states as rows of a (count, n) array.

    All states come from one stream, drawn as a single (count, 2n) normal
    block; this batch layout differs from repeated single-state calls and
    exists for Monte Carlo estimates where only the joint distribution
    matters.
    """
    z = SeedStream(seed).normal(2 * n * count).reshape(count, 2 * n)
    amp = z[:, :n] + 1j * z[:, n:]
    return amp / np.linalg.norm(amp, axis=1)[:, None]


def make_omega(psi: StateVector, params: OmegaParams) -> StateVector:
    """Apply the deviation map ``(1 + d A)/sqrt(1 + d^2)`` to a state.

    No renormalization: the image ensemble is only near-normalized.  A norm
    outside the 10-sigma analytic band is logged, not fatal.
    """
    a = params.observable
    if psi.dim != a.dim:
        raise DimensionMismatchError(
            f"state dim {psi.dim} does not match observable dim {a.dim}"
        )
    amp = (psi.amplitudes + params.d * (a.matrix @ psi.amplitudes)) / np.sqrt(
        1.0 + params.d**2
    )
    omega = StateVector(amp)
    low, high = params.norm_sq_band
    if not low <= omega.norm_sq <= high:
        logger.warning(
            "omega norm^2 = %.6f outside soft band [%.6f, %.6f]",
            omega.norm_sq,
            low,
            high,
        )
    return omega


def make_omegas(psis: np.ndarray, params: OmegaParams) -> np.ndarray:
    """Vectorized deviation map for a (count, n) block of states."""
    a = params.observable
    if psis.ndim != 2 or psis.shape[1] != a.dim:
        raise DimensionMismatchError(
            f"state block shape {psis.shape} does not match observable dim {a.dim}"
        )
    return (psis + params.d * (psis @ a.matrix.T)) / np.sqrt(1.0 + params.d**2)


def average_density(params: OmegaParams, n: int) -> HermitianOperator:
    """Analytic ensemble average of the projector onto an omega state:
    ``(1 + 2 d A + d^2 A^2) / (n (1 + d^2))``.

    Its trace is ``(1 + d^2 c_2)/(1 + d^2)``, exactly 1 for c_2 = 1.
    """
    a = params.observable
    if n != a.dim:
        raise DimensionMismatchError(f"n = {n} does not match observable dim {a.dim}")
    d = params.d
    mat = np.eye(n, dtype=np.complex128) + 2.0 * d * a.matrix + d**2 * (a.matrix @ a.matrix)
    return HermitianOperator(mat / (n * (1.0 + d**2)))


def commuting_unitary(a: HermitianOperator, seed: int) -> np.ndarray:
    """A random unitary ``e^{iB}`` with diagonal real B, commuting with A.

    Only exactly diagonal observables are supported; the phases are uniform
    in [0, 2*pi) from the seed's stream, and the commutator with A vanishes
    identically.
    """
    if not a.is_diagonal():
        raise NotDiagonalError("commuting unitaries are built only for diagonal observables")
    phases = np.exp(1j * SeedStream(seed).angles(a.dim))
    return np.diag(phases)
