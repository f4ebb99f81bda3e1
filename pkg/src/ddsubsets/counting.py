"""Counts of bad configurations: isosceles triples and repeated-distance quadruples.

Both counts use ordered tuples of distinct points.

* ``t(P)``: triples ``(p, q1, q2)`` with ``|p - q1| = |p - q2|``.  Bucket the
  keys seen from each apex and sum ``m (m - 1)`` over the buckets.
* ``f(P)``: quadruples ``(p1, p2, q1, q2)`` with ``|p1 - p2| = |q1 - q2|``.  An
  unordered configuration is counted 8 times.  Counting every ordered pair
  of ordered pairs at equal distance gives ``sum_d (2 m_d)^2``.  Removing
  the pairs that share one point (``4 t``) and the pairs on the same two
  points (``2 n (n - 1)``) leaves ``f``.

Everything runs in O(n^2 log n) on a :class:`~ddsubsets.geometry.KeyMatrix`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .geometry import DistanceKey, KeyMatrix, PointSet, key_matrix


@dataclass(frozen=True)
class ConfigCounts:
    n: int
    t: int
    f: int
    distinct: int
    pair_multiset: dict = field(default_factory=dict)

    def identity_holds(self) -> bool:
        lhs = sum((2 * m) ** 2 for m in self.pair_multiset.values())
        return lhs == self.f + 4 * self.t + 2 * self.n * (self.n - 1)


def _is_object(km: KeyMatrix) -> bool:
    return km.matrix.dtype == object


def raw_multiset(km: KeyMatrix) -> dict:
    """Unordered pair multiplicities keyed by raw integer key, in key order."""
    n = km.n
    if n < 2:
        return {}
    if _is_object(km):
        iu = np.triu_indices(n, k=1)
        return dict(sorted(Counter(km.matrix[iu].tolist()).items()))
    # Count the whole symmetric matrix: every pair appears twice, and the
    # diagonal contributes n zeros (distinct points have positive keys).
    vals = km.matrix.ravel()
    top = int(vals.max())
    if top <= 4 * vals.size:
        # small keys (circles, integer grids): counting beats sorting
        counts = np.bincount(vals, minlength=top + 1)
        keys = np.flatnonzero(counts)
        counts = counts[keys]
    else:
        keys, counts = np.unique(vals, return_counts=True)
    keys, counts = keys[1:], counts[1:] // 2
    return {int(k): int(c) for k, c in zip(keys, counts)}


def raw_isosceles(km: KeyMatrix) -> int:
    n = km.n
    if n < 3:
        return 0
    total = 0
    m = km.matrix
    if _is_object(km):
        for i in range(n):
            row = m[i].tolist()
            del row[i]
            total += sum(c * (c - 1) for c in Counter(row).values())
        return total
    # the zero diagonal sorts first in every row; every other key is positive
    rows = np.sort(m, axis=1)[:, 1:]
    for row in rows:
        _, c = np.unique(row, return_counts=True)
        total += int((c * (c - 1)).sum())
    return total


def quadruples_from(n: int, t: int, multiset: dict) -> int:
    ordered = sum((2 * m) ** 2 for m in multiset.values())
    return ordered - 4 * t - 2 * n * (n - 1)


def counts_from_matrix(km: KeyMatrix) -> tuple[int, int, int]:
    """``(t, f, distinct)`` for the set behind a key matrix."""
    ms = raw_multiset(km)
    t = raw_isosceles(km)
    return t, quadruples_from(km.n, t, ms), len(ms)


def pair_distance_multiset(P: PointSet) -> dict[DistanceKey, int]:
    km = key_matrix(P)
    return {km.decode(k): m for k, m in raw_multiset(km).items()}


def count_isosceles(P: PointSet) -> int:
    return raw_isosceles(key_matrix(P))


def count_repeated_quadruples(P: PointSet) -> int:
    km = key_matrix(P)
    return quadruples_from(km.n, raw_isosceles(km), raw_multiset(km))


def count_distinct_distances(P: PointSet) -> int:
    return len(raw_multiset(key_matrix(P)))


def config_counts(P: PointSet, km: KeyMatrix | None = None) -> ConfigCounts:
    if km is None:
        km = key_matrix(P)
    ms = raw_multiset(km)
    t = raw_isosceles(km)
    return ConfigCounts(
        n=km.n,
        t=t,
        f=quadruples_from(km.n, t, ms),
        distinct=len(ms),
        pair_multiset={km.decode(k): m for k, m in ms.items()},
    )
