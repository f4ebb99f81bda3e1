"""Platform-stable random streams.

All randomness goes through raw 64-bit PCG64 output.  Its bit stream is
fixed for a given seed on every platform.  The distribution helpers in
``numpy.random.Generator`` are not used because their streams may change
between numpy releases.  Stream ``k`` of seed ``s`` is seeded from the
entropy ``(s mod 2^64, k)``, so parallel workers reproduce the sequential
draws exactly.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_MASK64 = (1 << 64) - 1
TWO64 = 1 << 64


def stream(seed: int, *path: int) -> np.random.PCG64:
    return np.random.PCG64(np.random.SeedSequence([seed & _MASK64, *(k & _MASK64 for k in path)]))


def raw_draws(bitgen: np.random.PCG64, count: int) -> np.ndarray:
    return bitgen.random_raw(count)


def bernoulli_threshold(q: Fraction) -> int:
    """Draw ``u`` is a success iff ``u < floor(q * 2^64)``."""
    if not 0 <= q <= 1:
        raise ValueError(f"probability {q} outside [0, 1]")
    return (q.numerator * TWO64) // q.denominator


def bernoulli_mask(bitgen: np.random.PCG64, count: int, q: Fraction) -> np.ndarray:
    threshold = bernoulli_threshold(q)
    draws = raw_draws(bitgen, count)
    if threshold >= TWO64:
        return np.ones(count, dtype=bool)
    return draws < np.uint64(threshold)


def uniform_int(bitgen: np.random.PCG64, lo: int, hi: int) -> int:
    """Uniform integer in ``[lo, hi]`` by rejection sampling on raw draws."""
    span = hi - lo + 1
    if span <= 0:
        raise ValueError("empty range")
    limit = TWO64 - TWO64 % span
    while True:
        u = int(bitgen.random_raw())
        if u < limit:
            return lo + u % span


def permutation(bitgen: np.random.PCG64, n: int) -> list[int]:
    """Fisher-Yates shuffle of ``range(n)``."""
    out = list(range(n))
    for i in range(n - 1, 0, -1):
        j = uniform_int(bitgen, 0, i)
        out[i], out[j] = out[j], out[i]
    return out
