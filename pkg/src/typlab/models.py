"""Model systems: equidistant-spectrum H0, the +/-1 observable, and the
perturbation variants.

Everything is built in the eigenbasis of H0, where the observable is
diagonal.  All construction is deterministic under a :class:`ModelSpec`
seed; the observable placement and the perturbation entries draw from
separate child streams of that seed (indices ``OBSERVABLE_STREAM`` and
``PERTURBATION_STREAM``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError, OddDimensionError
from .operators import HermitianOperator
from .rng import MASK64, SeedStream, child_seed

V_KINDS = ("gaussian", "constant")
V_DIAGONAL_MODES = ("default", "zero")

OBSERVABLE_STREAM = 0
PERTURBATION_STREAM = 1


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of one model system.

    ``v_scale`` is the mean squared magnitude of the perturbation's
    off-diagonal elements for the gaussian kind, and the squared common
    value for the constant kind.  ``v_diagonal`` switches the perturbation
    diagonal between the default convention and zero, for sensitivity
    checks (the default keeps a real gaussian diagonal of the same scale
    for the gaussian kind, and includes the common constant for the
    constant kind).
    """

    n: int
    delta_e: float
    v_kind: str
    v_scale: float
    seed: int
    v_diagonal: str = "default"

    def __post_init__(self):
        if self.n < 2:
            raise InvalidDimensionError(f"dimension must be >= 2, got {self.n}")
        if self.n % 2:
            raise OddDimensionError(f"dimension must be even, got {self.n}")
        if not self.delta_e > 0:
            raise InvalidDimensionError(f"level spacing must be > 0, got {self.delta_e}")
        if self.v_kind not in V_KINDS:
            raise ValueError(f"v_kind must be one of {V_KINDS}, got {self.v_kind!r}")
        if self.v_scale < 0:
            raise ValueError(f"v_scale must be >= 0, got {self.v_scale}")
        if not 0 <= int(self.seed) <= MASK64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        if self.v_diagonal not in V_DIAGONAL_MODES:
            raise ValueError(
                f"v_diagonal must be one of {V_DIAGONAL_MODES}, got {self.v_diagonal!r}"
            )


def build_h0(n: int, delta_e: float) -> HermitianOperator:
    """Diagonal H0 with equidistant levels k * delta_e, k = 0..n-1.

    The spectrum starts at zero; expectation-value dynamics are invariant
    under a global energy shift.
    """
    if n < 2:
        raise InvalidDimensionError(f"dimension must be >= 2, got {n}")
    if not delta_e > 0:
        raise InvalidDimensionError(f"level spacing must be > 0, got {delta_e}")
    return HermitianOperator(np.diag(np.arange(n) * float(delta_e)).astype(np.complex128))


def build_observable_pm1(n: int, seed: int) -> HermitianOperator:
    """Diagonal observable with equally many randomly placed +1 and -1.

    The +1 entries go to the first n/2 positions of a seeded shuffle of
    ``arange(n)``.  By construction c_1 = 0 and c_2 = 1 exactly.
    """
    if n % 2:
        raise OddDimensionError(f"dimension must be even, got {n}")
    perm = SeedStream(seed).shuffled_indices(n)
    diag = np.full(n, -1.0)
    diag[perm[: n // 2]] = 1.0
    return HermitianOperator(np.diag(diag).astype(np.complex128))


def build_v_gaussian(
    n: int, mean_sq: float, seed: int, diagonal: str = "default"
) -> HermitianOperator:
    """Hermitian perturbation with complex gaussian off-diagonal elements.

    For j < k the entry is x + iy with x, y independent zero-mean normals
    of variance mean_sq/2 each, so E|V_jk|^2 = mean_sq; the lower triangle
    is the conjugate.  The diagonal is real gaussian with variance mean_sq
    (``diagonal="default"``) or zero (``diagonal="zero"``).

    Stream consumption order: upper-triangle real parts (row-major j < k),
    upper-triangle imaginary parts, then the diagonal when it is drawn.
    """
    if mean_sq < 0:
        raise ValueError(f"mean squared magnitude must be >= 0, got {mean_sq}")
    if diagonal not in V_DIAGONAL_MODES:
        raise ValueError(f"diagonal must be one of {V_DIAGONAL_MODES}, got {diagonal!r}")
    v = np.zeros((n, n), dtype=np.complex128)
    if mean_sq == 0:
        return HermitianOperator(v)
    stream = SeedStream(seed)
    m = n * (n - 1) // 2
    rows, cols = np.triu_indices(n, k=1)
    x = stream.normal(m)
    y = stream.normal(m)
    sigma = np.sqrt(mean_sq / 2.0)
    v[rows, cols] = sigma * (x + 1j * y)
    v += v.conj().T
    if diagonal == "default":
        np.fill_diagonal(v, np.sqrt(mean_sq) * stream.normal(n))
    return HermitianOperator(v)


def build_v_constant(n: int, value_sq: float, diagonal: str = "default") -> HermitianOperator:
    """Perturbation with every entry equal to sqrt(value_sq).

    With the diagonal included this is a rank-1 matrix whose only nonzero
    eigenvalue is n * sqrt(value_sq).
    """
    if value_sq < 0:
        raise ValueError(f"squared value must be >= 0, got {value_sq}")
    if diagonal not in V_DIAGONAL_MODES:
        raise ValueError(f"diagonal must be one of {V_DIAGONAL_MODES}, got {diagonal!r}")
    v = np.full((n, n), np.sqrt(value_sq), dtype=np.complex128)
    if diagonal == "zero":
        np.fill_diagonal(v, 0.0)
    return HermitianOperator(v)


def build_perturbation(spec: ModelSpec) -> HermitianOperator:
    """The perturbation selected by a spec, seeded from its child stream."""
    v_seed = child_seed(spec.seed, PERTURBATION_STREAM)
    if spec.v_kind == "gaussian":
        return build_v_gaussian(spec.n, spec.v_scale, v_seed, spec.v_diagonal)
    return build_v_constant(spec.n, spec.v_scale, spec.v_diagonal)


def assemble_hamiltonian(spec: ModelSpec) -> HermitianOperator:
    """H = H0 + V for the given spec."""
    h0 = build_h0(spec.n, spec.delta_e)
    v = build_perturbation(spec)
    return HermitianOperator(h0.matrix + v.matrix)


@dataclass(frozen=True)
class ModelSystem:
    """A built model: observable, Hamiltonian, and the seeds that made them."""

    spec: ModelSpec
    observable: HermitianOperator
    hamiltonian: HermitianOperator
    observable_seed: int
    perturbation_seed: int


def build_model(spec: ModelSpec) -> ModelSystem:
    """Build the observable and Hamiltonian for a spec."""
    return ModelSystem(
        spec=spec,
        observable=build_observable_pm1(spec.n, child_seed(spec.seed, OBSERVABLE_STREAM)),
        hamiltonian=assemble_hamiltonian(spec),
        observable_seed=child_seed(spec.seed, OBSERVABLE_STREAM),
        perturbation_seed=child_seed(spec.seed, PERTURBATION_STREAM),
    )
