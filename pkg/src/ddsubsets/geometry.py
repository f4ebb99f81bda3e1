"""Exact point types and distance keys.

Three point domains are supported: rational points in the plane, rational
points on the unit sphere, and symbolic equispaced points on a circle
(index mod N).  Distances are never computed as floats.  Two pairs of points
are at the same distance iff their :func:`distance_key` values are equal.

Sphere distances are chordal.  Geodesic distance is a strictly increasing
function of chord length, so both give the same equality verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

Rational = Fraction

PLANE = "plane"
SPHERE = "sphere"
CIRCLE = "circle"
DOMAINS = (PLANE, SPHERE, CIRCLE)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are rejected: they would smuggle rounding error into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True, order=True)
class PlanePoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_rational(self.x))
        object.__setattr__(self, "y", as_rational(self.y))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return (self.x, self.y)


@dataclass(frozen=True, order=True)
class SpherePoint:
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        norm = self.x * self.x + self.y * self.y + self.z * self.z
        if norm != 1:
            raise ValueError(f"point ({self.x}, {self.y}, {self.z}) is off the unit sphere: |p|^2 = {norm}")

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True, order=True)
class CirclePoint:
    index: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if not 0 <= self.index < self.modulus:
            raise ValueError(f"index {self.index} outside [0, {self.modulus})")


Point = Union[PlanePoint, SpherePoint, CirclePoint]

_DOMAIN_OF = {PlanePoint: PLANE, SpherePoint: SPHERE, CirclePoint: CIRCLE}


@dataclass(frozen=True, order=True)
class SquaredDistance:
    """Distance key for the plane and sphere: the exact squared distance."""

    value: Fraction

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, order=True)
class ChordClass:
    """Distance key for equispaced circle points: the index gap in [1, N/2]."""

    value: int

    def __str__(self):
        return str(self.value)


DistanceKey = Union[SquaredDistance, ChordClass]


def squared_distance(p: PlanePoint, q: PlanePoint) -> Fraction:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def chordal_squared(p: SpherePoint, q: SpherePoint) -> Fraction:
    """Squared chord length ``2 - 2 p.q`` between two unit vectors."""
    return 2 - 2 * (p.x * q.x + p.y * q.y + p.z * q.z)


def chord_class(i: int, j: int, modulus: int) -> int:
    d = abs(i - j) % modulus
    return min(d, modulus - d)


def inverse_stereographic(p: PlanePoint) -> SpherePoint:
    """Lift a plane point onto the unit sphere, projecting from (0, 0, 1).

    Rational inputs give rational outputs, so this is how exact sphere points
    are manufactured.  The map is injective and never hits the north pole.
    """
    r2 = p.x * p.x + p.y * p.y
    d = r2 + 1
    return SpherePoint(2 * p.x / d, 2 * p.y / d, (r2 - 1) / d)


@dataclass(frozen=True)
class PointSet:
    """An ordered, duplicate-free collection of points from a single domain."""

    domain: str
    points: tuple

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}")
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        for p in pts:
            if _DOMAIN_OF.get(type(p)) != self.domain:
                raise ValueError(f"{p!r} does not belong to domain {self.domain!r}")
        if self.domain == CIRCLE and len({p.modulus for p in pts}) > 1:
            raise ValueError("circle points must share one modulus")
        if len(set(pts)) != len(pts):
            raise ValueError("point set contains duplicate points")

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    @classmethod
    def plane(cls, coords: Iterable[Sequence]) -> "PointSet":
        return cls(PLANE, tuple(PlanePoint(x, y) for x, y in coords))

    @classmethod
    def sphere(cls, coords: Iterable[Sequence]) -> "PointSet":
        return cls(SPHERE, tuple(SpherePoint(x, y, z) for x, y, z in coords))

    @classmethod
    def circle(cls, modulus: int, indices: Iterable[int] | None = None) -> "PointSet":
        if indices is None:
            indices = range(modulus)
        return cls(CIRCLE, tuple(CirclePoint(i, modulus) for i in indices))

    @property
    def modulus(self) -> int | None:
        if self.domain != CIRCLE:
            return None
        return self.points[0].modulus if self.points else None

    def subset(self, indices: Iterable[int]) -> "PointSet":
        return PointSet(self.domain, tuple(self.points[i] for i in indices))


def distance_key(P: PointSet, i: int, j: int) -> DistanceKey:
    if i == j:
        raise ValueError("a distance needs two distinct points")
    p, q = P.points[i], P.points[j]
    if P.domain == PLANE:
        return SquaredDistance(squared_distance(p, q))
    if P.domain == SPHERE:
        return SquaredDistance(chordal_squared(p, q))
    return ChordClass(chord_class(p.index, q.index, p.modulus))


# Fast path: all keys of a point set as integers.
#
# Multiplying every coordinate by the common denominator L turns squared
# distances into integers scaled by L^2.  Equality is preserved, so counting
# can run on plain ints (or int64 when they fit).

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class KeyMatrix:
    """Symmetric n x n matrix of integer distance keys (diagonal is 0).

    ``scale`` is the divisor turning a plane/sphere entry back into the exact
    squared distance; it is 1 for circle sets.
    """

    domain: str
    matrix: np.ndarray
    scale: int

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def decode(self, raw) -> DistanceKey:
        if self.domain == CIRCLE:
            return ChordClass(int(raw))
        return SquaredDistance(Fraction(int(raw), self.scale))

    def restrict(self, indices: Sequence[int]) -> "KeyMatrix":
        idx = np.asarray(indices, dtype=np.intp)
        return KeyMatrix(self.domain, self.matrix[np.ix_(idx, idx)], self.scale)


def key_matrix(P: PointSet, force_object: bool = False) -> KeyMatrix:
    """Integer keys for every pair of ``P``.

    Uses int64 when every key provably fits, Python ints otherwise
    (``force_object`` forces the latter, for testing both paths).
    """
    n = len(P)
    if P.domain == CIRCLE:
        if n == 0:
            return KeyMatrix(CIRCLE, np.zeros((0, 0), dtype=np.int64), 1)
        idx = np.array([p.index for p in P], dtype=np.int64)
        # indices lie in [0, N), so the gap needs no reduction mod N
        d = np.abs(idx[:, None] - idx[None, :])
        m = np.minimum(d, P.modulus - d)
        if force_object:
            m = m.astype(object)
        return KeyMatrix(CIRCLE, m, 1)

    coords = [p.coords for p in P]
    L = 1
    for c in coords:
        for v in c:
            L = math.lcm(L, v.denominator)
    ints = [[v.numerator * (L // v.denominator) for v in c] for c in coords]
    dim = 2 if P.domain == PLANE else 3
    bound = max((abs(v) for c in ints for v in c), default=0)
    if not force_object and dim * (2 * bound) ** 2 < _INT64_SAFE:
        arr = np.array(ints, dtype=np.int64).reshape(n, dim)
        diff = arr[:, None, :] - arr[None, :, :]
        m = (diff * diff).sum(axis=2)
    else:
        m = np.empty((n, n), dtype=object)
        for i in range(n):
            a = ints[i]
            m[i, i] = 0
            for j in range(i + 1, n):
                b = ints[j]
                k = sum((u - v) * (u - v) for u, v in zip(a, b))
                m[i, j] = k
                m[j, i] = k
    return KeyMatrix(P.domain, m, L * L)
