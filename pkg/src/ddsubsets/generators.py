"""Point-set families: integer grids, equispaced circles, random rational sets."""

from __future__ import annotations

from fractions import Fraction

from . import rng
from .geometry import CIRCLE, PLANE, SPHERE, PlanePoint, PointSet, inverse_stereographic

SHAPES = ("grid", "circle", "random-plane", "random-sphere")


def grid(m: int) -> PointSet:
    """The m x m integer grid ``{(i, j) : 0 <= i, j < m}`` in row-major order."""
    if m < 1:
        raise ValueError("grid side must be >= 1")
    return PointSet(PLANE, tuple(PlanePoint(i, j) for i in range(m) for j in range(m)))


def circle_equispaced(n: int) -> PointSet:
    if n < 1:
        raise ValueError("circle needs at least one point")
    return PointSet.circle(n)


def _random_rational(bitgen, bound: int) -> Fraction:
    num = rng.uniform_int(bitgen, -bound * bound, bound * bound)
    den = rng.uniform_int(bitgen, 1, bound)
    return Fraction(num, den)


def _random_plane_points(n: int, seed: int, denominator_bound: int) -> list[PlanePoint]:
    if n < 1:
        raise ValueError("need at least one point")
    if denominator_bound < 1:
        raise ValueError("denominator_bound must be >= 1")
    if n > (2 * denominator_bound**2 + 1) ** 2:
        b2 = denominator_bound**2
        values = {Fraction(a, b) for b in range(1, denominator_bound + 1) for a in range(-b2, b2 + 1)}
        if n > len(values) ** 2:
            raise ValueError(f"only {len(values) ** 2} distinct points exist for denominator_bound={denominator_bound}")
    bitgen = rng.stream(seed)
    seen: set[PlanePoint] = set()
    out: list[PlanePoint] = []
    while len(out) < n:
        p = PlanePoint(_random_rational(bitgen, denominator_bound), _random_rational(bitgen, denominator_bound))
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def random_plane(n: int, seed: int = 0, denominator_bound: int = 20) -> PointSet:
    """n distinct points with coordinates ``a/b``, ``|a| <= B^2``, ``1 <= b <= B``.

    Duplicates are redrawn.  The result depends only on the arguments.
    """
    return PointSet(PLANE, tuple(_random_plane_points(n, seed, denominator_bound)))


def random_sphere(n: int, seed: int = 0, denominator_bound: int = 20) -> PointSet:
    """Exact rational sphere points: :func:`random_plane` lifted stereographically."""
    pts = _random_plane_points(n, seed, denominator_bound)
    return PointSet(SPHERE, tuple(inverse_stereographic(p) for p in pts))


def generate(shape: str, size: int, seed: int = 0, denominator_bound: int = 20) -> PointSet:
    if shape == "grid":
        return grid(size)
    if shape == "circle":
        return circle_equispaced(size)
    if shape == "random-plane":
        return random_plane(size, seed, denominator_bound)
    if shape == "random-sphere":
        return random_sphere(size, seed, denominator_bound)
    raise ValueError(f"unknown shape {shape!r}; expected one of {', '.join(SHAPES)}")


def domain_of(shape: str) -> str:
    return {"grid": PLANE, "circle": CIRCLE, "random-plane": PLANE, "random-sphere": SPHERE}[shape]
