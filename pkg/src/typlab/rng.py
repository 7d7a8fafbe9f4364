"""Seeded random streams with a pinned bit-level algorithm.

All randomness in typlab flows through :class:`SeedStream`.  It draws raw
64-bit words from a Philox-4x64-10 counter generator (via numpy's bit
generator) and applies fixed, documented transforms on top of the raw
stream:

* uniforms: the high 53 bits of each word, scaled by 2^-53;
* normals: Box-Muller on uniform pairs, cosine block first (a request for
  ``count`` normals consumes ``ceil(count/2)`` words for each of the two
  uniform blocks);
* shuffles: descending Fisher-Yates with ``j = floor(u * (i + 1))``;
* angles: ``2*pi*u``.

numpy's ``Generator`` convenience methods are deliberately not used: their
mapping from bits to variates may change between numpy releases, whereas
the raw Philox output and the transforms above are fixed here.  The stream
identity is recorded in run metadata as :data:`RNG_ALGORITHM`.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

RNG_ALGORITHM = "philox4x64-10/u53/box-muller"

_MIX_MULT_1 = 0xBF58476D1CE4E5B9
_MIX_MULT_2 = 0x94D049BB133111EB
_CHILD_KEY = 0x9E3779B97F4A7C15  # odd, so (i + 1) * key is injective mod 2^64


def mix64(x: int) -> int:
    """SplitMix64 finalizer; a bijection on 64-bit words."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _MIX_MULT_1) & MASK64
    x ^= x >> 27
    x = (x * _MIX_MULT_2) & MASK64
    x ^= x >> 31
    return x


def child_seed(base_seed: int, index: int) -> int:
    """Derive the index-th child of a base seed.

    ``mix64(base ^ (index + 1) * KEY)`` with an odd 64-bit constant; the
    multiply is injective modulo 2^64 and mix64 is a bijection, so distinct
    indices below 2^64 - 1 give distinct children for a fixed base.
    """
    if index < 0:
        raise ValueError("child index must be non-negative")
    return mix64((base_seed ^ ((index + 1) * _CHILD_KEY)) & MASK64)


class SeedStream:
    """Deterministic stream of random variates from one 64-bit seed."""

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must fit in 64 bits, got {seed}")
        self.seed = seed
        self._bits = np.random.Philox(key=seed)

    def raw(self, count: int) -> np.ndarray:
        """``count`` raw 64-bit words from the Philox counter stream."""
        return np.atleast_1d(self._bits.random_raw(count))

    def uniform(self, count: int) -> np.ndarray:
        """Doubles in [0, 1), one word each, from the high 53 bits."""
        return (self.raw(count) >> np.uint64(11)) * np.float64(2.0**-53)

    def normal(self, count: int) -> np.ndarray:
        """Standard normals via Box-Muller.

        Draws ``half = ceil(count/2)`` uniforms u1 (mapped to (0, 1] so the
        log stays finite) and ``half`` uniforms u2, then returns the cosine
        block followed by the sine block, truncated to ``count``.
        """
        if count == 0:
            return np.empty(0)
        half = (count + 1) // 2
        u1 = 1.0 - self.uniform(half)
        u2 = self.uniform(half)
        radius = np.sqrt(-2.0 * np.log(u1))
        theta = (2.0 * np.pi) * u2
        return np.concatenate([radius * np.cos(theta), radius * np.sin(theta)])[:count]

    def angles(self, count: int) -> np.ndarray:
        """Uniform angles in [0, 2*pi)."""
        return (2.0 * np.pi) * self.uniform(count)

    def shuffled_indices(self, n: int) -> np.ndarray:
        """A uniformly shuffled ``arange(n)`` (descending Fisher-Yates).

        Index choice ``j = floor(u * (i + 1))`` from 53-bit uniforms; the
        modulo bias is below 2^-40 for the dimensions used here.
        """
        idx = np.arange(n)
        if n < 2:
            return idx
        u = self.uniform(n - 1)
        for k, i in enumerate(range(n - 1, 0, -1)):
            j = int(u[k] * (i + 1))
            idx[i], idx[j] = idx[j], idx[i]
        return idx
