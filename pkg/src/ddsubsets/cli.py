"""Command-line interface.

Exit status: 0 on success, 1 on domain errors (bad input file, invalid
subset, refused instance), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .counting import config_counts
from .experiment import format_rational, parse_range, rows_to_csv, run_experiment, write_atomic
from .extraction import (
    POLICIES,
    ExtractionParams,
    exact_max_subset,
    expected_size_bound,
    random_deletion_extract,
    verify_distinct,
)
from .generators import SHAPES, generate
from .geometry import ChordClass, key_matrix
from .pointfile import PointFileError, format_point_file, read_point_file

EXACT_LIMIT = 24


class DomainError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _subset_arg(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}") from None


def _fmt_key(key, exact: bool) -> str:
    if isinstance(key, ChordClass):
        return str(key.value)
    return format_rational(key.value, exact)


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _params(args) -> ExtractionParams:
    return ExtractionParams(
        q_scale=args.q_scale, trials=args.trials, seed=args.seed, policy=args.policy, q_override=args.q
    )


def cmd_gen(args) -> int:
    size = args.m if args.shape == "grid" else args.n
    if size is None:
        flag = "--m" if args.shape == "grid" else "--n"
        raise DomainError(f"--shape {args.shape} needs {flag}")
    P = generate(args.shape, size, args.seed, args.den_bound)
    _emit(format_point_file(P), args.out)
    return 0


def cmd_count(args) -> int:
    P = read_point_file(args.file)
    c = config_counts(P)
    lines = [f"N: {c.n}", f"t: {c.t}", f"f: {c.f}", f"distinct: {c.distinct}"]
    items = sorted(c.pair_multiset.items(), key=lambda kv: (-kv[1], kv[0]))
    if args.top:
        items = items[: args.top]
    lines.append(f"multiset: {c.distinct} keys, showing {len(items)} (key multiplicity)")
    lines.extend(f"  {_fmt_key(k, args.exact)} {m}" for k, m in items)
    print("\n".join(lines))
    return 0


def cmd_extract(args) -> int:
    P = read_point_file(args.file)
    params = _params(args)
    km = key_matrix(P)
    result = random_deletion_extract(P, params, workers=args.jobs, km=km)
    c = config_counts(P, km)
    bound = expected_size_bound(c.n, c.t, c.f, result.q)
    cert = sum(r.certificate_ok for r in result.trials)
    lines = [
        f"N: {len(P)}",
        f"t: {c.t}",
        f"f: {c.f}",
        f"q: {format_rational(result.q, args.exact)}",
        f"policy: {params.policy}",
        f"trials: {params.trials}",
        f"seed: {params.seed}",
        f"mean_final_size: {format_rational(result.mean_final_size, args.exact)}",
        f"bound: {format_rational(bound, args.exact)}",
        f"certificates: {cert}/{len(result.trials)}",
        f"best_size: {len(result.best_subset)}",
        f"verified: {str(result.verified).lower()}",
        f"subset: {','.join(map(str, result.best_subset))}",
    ]
    print("\n".join(lines))
    if args.out:
        write_atomic(args.out, json.dumps(result.to_dict(), indent=1) + "\n")
    return 0 if result.verified else 1


def cmd_exact(args) -> int:
    P = read_point_file(args.file)
    if len(P) > EXACT_LIMIT and not args.force:
        raise DomainError(f"{len(P)} points exceeds {EXACT_LIMIT}; the exact solver is exponential (use --force)")
    stats: dict = {}
    subset, optimal = exact_max_subset(P, args.budget, stats=stats)
    print(f"size: {len(subset)}")
    print(f"optimal: {str(optimal).lower()}")
    print(f"nodes: {stats['nodes']}")
    print(f"subset: {','.join(map(str, subset))}")
    return 0


def cmd_verify(args) -> int:
    P = read_point_file(args.file)
    try:
        report = verify_distinct(P, args.subset)
    except (IndexError, ValueError) as e:
        raise DomainError(str(e)) from None
    if report.ok:
        print(f"valid: {len(args.subset)} points, all pairwise distances distinct")
        return 0
    (a, b), (c, d) = report.witness
    print(f"invalid: pairs ({a},{b}) and ({c},{d}) share distance key {report.key}")
    return 1


def cmd_experiment(args) -> int:
    try:
        sizes = parse_range(args.range)
    except ValueError as e:
        raise DomainError(str(e)) from None
    rows = run_experiment(
        args.shape,
        sizes,
        _params(args),
        den_bound=args.den_bound,
        exact=args.exact,
        timing=args.timing,
        workers=args.jobs,
    )
    write_atomic(args.out, rows_to_csv(rows))
    return 0


def _add_extract_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--q-scale", type=_rational_arg, default=Fraction(1), help="multiplier on the default q")
    p.add_argument("--q", type=_rational_arg, default=None, help="fixed sampling probability")
    p.add_argument("--policy", choices=POLICIES, default="naive")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output does not depend on it)")
    p.add_argument("--exact", action="store_true", help="print rationals as num/den")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ddsubsets", description="Distinct-distance subsets of exact point sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a point file")
    p.add_argument("--shape", choices=SHAPES, required=True)
    p.add_argument("--m", type=int, help="grid side length")
    p.add_argument("--n", type=int, help="point count (circle, random shapes)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--den-bound", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("count", help="count isosceles triples, quadruples, distinct distances")
    p.add_argument("file")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--top", type=int, default=10, help="multiset entries to show (0 = all)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("extract", help="random sampling plus deletion")
    p.add_argument("file")
    _add_extract_flags(p)
    p.add_argument("--out", help="write the full result as JSON")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("exact", help="maximum distinct-distance subset (small inputs)")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=1_000_000, help="search node budget")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", help="check a subset for repeated distances")
    p.add_argument("file")
    p.add_argument("--subset", type=_subset_arg, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="CSV of counts and extraction over a size range")
    p.add_argument("--shape", choices=SHAPES, required=True)
    p.add_argument("--range", required=True, help="A:B[:STEP] inclusive, or a comma list")
    p.add_argument("--den-bound", type=int, default=20)
    _add_extract_flags(p)
    p.add_argument("--timing", action="store_true", help="fill elapsed_ms (makes output nondeterministic)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, PointFileError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
