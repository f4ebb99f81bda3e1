"""Experiment harness: one CSV row per generated instance."""

from __future__ import annotations

import csv
import decimal
import io
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from fractions import Fraction

from .counting import config_counts
from .extraction import ExtractionParams, expected_size_bound, random_deletion_extract
from .generators import SHAPES, domain_of, generate
from .geometry import key_matrix

_DEC12 = decimal.Context(prec=12, rounding=decimal.ROUND_HALF_EVEN)


def format_decimal(x: Fraction) -> str:
    """12 significant digits, round-half-even."""
    x = Fraction(x)
    return str(_DEC12.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator)))


def format_rational(x: Fraction, exact: bool = False) -> str:
    return str(Fraction(x)) if exact else format_decimal(x)


@dataclass(frozen=True)
class ExperimentRow:
    domain: str
    N: int
    t: int
    f: int
    distinct: int
    q: str
    trials: int
    mean_final_size: str
    best_size: int
    bound: str
    seed: int
    elapsed_ms: str


FIELDS = [f.name for f in fields(ExperimentRow)]


def parse_range(text: str) -> list[int]:
    """``A:B[:STEP]`` (inclusive) or a comma-separated list such as ``4,8,16``."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            a, b = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            if step < 1 or b < a:
                raise ValueError
            values = list(range(a, b + 1, step))
        else:
            values = [int(p) for p in text.split(",")]
    except ValueError:
        raise ValueError(f"bad range {text!r}; use A:B[:STEP] or a comma list") from None
    if not values or min(values) < 1:
        raise ValueError(f"bad range {text!r}; sizes must be >= 1")
    return values


def run_instance(shape, size, params, den_bound=20, exact=False, timing=False):
    """Generate one instance, count it, extract from it; returns ``(row, result)``."""
    start = time.perf_counter()
    P = generate(shape, size, params.seed, den_bound)
    km = key_matrix(P)
    counts = config_counts(P, km)
    result = random_deletion_extract(P, params, km=km)
    if not result.verified:
        raise RuntimeError(f"extracted subset failed verification on {shape} size {size}")
    bound = expected_size_bound(counts.n, counts.t, counts.f, result.q)
    elapsed = (time.perf_counter() - start) * 1000
    row = ExperimentRow(
        domain=domain_of(shape),
        N=counts.n,
        t=counts.t,
        f=counts.f,
        distinct=counts.distinct,
        q=format_rational(result.q, exact),
        trials=params.trials,
        mean_final_size=format_rational(result.mean_final_size, exact),
        best_size=len(result.best_subset),
        bound=format_rational(bound, exact),
        seed=params.seed,
        elapsed_ms=f"{elapsed:.1f}" if timing else "",
    )
    return row, result


def _row_only(args):
    return run_instance(*args)[0]


def run_experiment(shape, sizes, params=ExtractionParams(), den_bound=20, exact=False, timing=False, workers=1):
    """Rows in the order of ``sizes``, whatever the worker count."""
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}")
    jobs = [(shape, s, params, den_bound, exact, timing) for s in sizes]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as ex:
            return list(ex.map(_row_only, jobs))
    return [_row_only(j) for j in jobs]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(FIELDS)
    for r in rows:
        w.writerow(astuple(r))
    return buf.getvalue()


def write_atomic(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ddsubsets-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
