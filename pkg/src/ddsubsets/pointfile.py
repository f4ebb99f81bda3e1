"""Reading and writing ``ddpts`` point files.

Format (UTF-8, one record per line, ``#`` starts a comment, blank lines
ignored)::

    ddpts 1
    plane            # or: sphere | circle
    3                # N; for circle, the modulus, and no body follows
    0 0
    1/2 -3
    7 0

Coordinates are integers or ``num/den``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .geometry import CIRCLE, DOMAINS, PLANE, PlanePoint, PointSet, SpherePoint

MAGIC = "ddpts"
VERSION = "1"

_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class PointFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def _rational(token: str, lineno: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise PointFileError(f"malformed rational {token!r}", lineno)
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise PointFileError(f"zero denominator in {token!r}", lineno) from None


def parse_point_file(text: str) -> PointSet:
    recs = _records(text)

    def header(what: str):
        try:
            return next(recs)
        except StopIteration:
            raise PointFileError(f"unexpected end of file, expected {what}") from None

    lineno, toks = header("magic line")
    if toks != [MAGIC, VERSION]:
        raise PointFileError(f"expected '{MAGIC} {VERSION}', got {' '.join(toks)!r}", lineno)
    lineno, toks = header("domain")
    if len(toks) != 1 or toks[0] not in DOMAINS:
        raise PointFileError(f"unknown domain {' '.join(toks)!r}", lineno)
    domain = toks[0]
    lineno, toks = header("point count")
    if len(toks) != 1 or not toks[0].isdigit():
        raise PointFileError(f"bad point count {' '.join(toks)!r}", lineno)
    count = int(toks[0])

    if domain == CIRCLE:
        if count < 1:
            raise PointFileError("circle modulus must be >= 1", lineno)
        extra = next(recs, None)
        if extra is not None:
            raise PointFileError("circle files have no body", extra[0])
        return PointSet.circle(count)

    dim = 2 if domain == PLANE else 3
    points = []
    seen: dict = {}
    for lineno, toks in recs:
        if len(points) == count:
            raise PointFileError(f"more than the declared {count} points", lineno)
        if len(toks) != dim:
            raise PointFileError(f"expected {dim} coordinates, got {len(toks)}", lineno)
        coords = [_rational(t, lineno) for t in toks]
        try:
            p = PlanePoint(*coords) if domain == PLANE else SpherePoint(*coords)
        except ValueError as e:
            raise PointFileError(f"fails unit-norm check: {e}", lineno) from None
        if p in seen:
            raise PointFileError(f"duplicate of the point on line {seen[p]}", lineno)
        seen[p] = lineno
        points.append(p)
    if len(points) != count:
        raise PointFileError(f"declared {count} points, found {len(points)}")
    return PointSet(domain, tuple(points))


def format_point_file(P: PointSet) -> str:
    lines = [f"{MAGIC} {VERSION}", P.domain]
    if P.domain == CIRCLE:
        if len(P) != P.modulus or any(p.index != i for i, p in enumerate(P)):
            raise ValueError("only full equispaced circle sets can be written")
        lines.append(str(P.modulus))
    else:
        lines.append(str(len(P)))
        lines.extend(" ".join(str(c) for c in p.coords) for p in P)
    return "\n".join(lines) + "\n"


def read_point_file(path) -> PointSet:
    with open(path, encoding="utf-8") as fh:
        return parse_point_file(fh.read())


def write_point_file(P: PointSet, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_point_file(P))

