"""Distinct-distance subset extraction.

* :func:`random_deletion_extract`: sample each point independently with
  probability ``q``, then delete points until no isosceles triple or
  repeated-distance quadruple survives.  Every trial records the
  certificate ``|Q''| >= |Q| - t(Q) - f(Q)``.
* :func:`greedy_extract`: single greedy pass, used as a baseline.
* :func:`exact_max_subset`: branch and bound for small sets.
* :func:`verify_distinct`: exact checker used on every returned subset.

A "bad configuration" is an unordered pair of point pairs at the same
distance.  When the pairs share a point it is an isosceles triple.  When
they are disjoint it is a quadruple.
"""

from __future__ import annotations

import decimal
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from . import rng
from .counting import counts_from_matrix
from .geometry import DistanceKey, KeyMatrix, PointSet, distance_key, key_matrix

POLICIES = ("naive", "greedy-conflict")


@dataclass(frozen=True)
class ExtractionParams:
    q_scale: Fraction = Fraction(1)
    trials: int = 100
    seed: int = 0
    policy: str = "naive"
    q_override: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "q_scale", Fraction(self.q_scale))
        if self.q_scale <= 0:
            raise ValueError("q_scale must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}")
        if self.q_override is not None:
            object.__setattr__(self, "q_override", Fraction(self.q_override))
            if not 0 <= self.q_override <= 1:
                raise ValueError("q must lie in [0, 1]")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    sampled_size: int
    t_q: int
    f_q: int
    final_size: int
    certificate_ok: bool


@dataclass
class ExtractionResult:
    best_subset: list[int]
    trials: list[TrialRecord]
    params: ExtractionParams
    q: Fraction
    verified: bool
    best_trial: int | None = None

    @property
    def mean_final_size(self) -> Fraction:
        return Fraction(sum(r.final_size for r in self.trials), len(self.trials))

    def to_dict(self) -> dict:
        p = self.params
        return {
            "best_subset": list(self.best_subset),
            "best_size": len(self.best_subset),
            "best_trial": self.best_trial,
            "verified": self.verified,
            "q": str(self.q),
            "params": {
                "q_scale": str(p.q_scale),
                "trials": p.trials,
                "seed": p.seed,
                "policy": p.policy,
                "q_override": None if p.q_override is None else str(p.q_override),
            },
            "trials": [asdict(r) for r in self.trials],
        }


@dataclass(frozen=True)
class ConflictReport:
    """Empty (``ok``) when all pairwise distances differ, else one witness."""

    witness: tuple[tuple[int, int], tuple[int, int]] | None = None
    key: DistanceKey | None = None

    @property
    def ok(self) -> bool:
        return self.witness is None


def _check_indices(n: int, subset: Sequence[int]) -> None:
    for i in subset:
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for {n} points")
    if len(set(subset)) != len(subset):
        raise ValueError("subset contains repeated indices")


def verify_distinct(P: PointSet, subset: Sequence[int]) -> ConflictReport:
    subset = list(subset)
    _check_indices(len(P), subset)
    seen: dict[DistanceKey, tuple[int, int]] = {}
    for a in range(len(subset)):
        for b in range(a + 1, len(subset)):
            i, j = subset[a], subset[b]
            k = distance_key(P, i, j)
            if k in seen:
                return ConflictReport((seen[k], (i, j)), k)
            seen[k] = (i, j)
    return ConflictReport()


def expected_size_bound(n: int, t: int, f: int, q) -> Fraction:
    """``q n - q^3 t - q^4 f``, a lower bound on the expected surviving size."""
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ValueError("q must lie in [0, 1]")
    return q * n - q**3 * t - q**4 * f


_DEC = decimal.Context(prec=40, rounding=decimal.ROUND_HALF_EVEN)


def default_q(n: int, q_scale=1) -> Fraction:
    """``min(1, C n^(-2/3) / ln n)``, with ``q = 1`` for ``n <= 2``.

    The irrational factor is rounded to 40 significant digits by ``decimal``.
    Its ``ln`` and ``exp`` are correctly rounded, so the rational ``q`` is the
    same on every platform.
    """
    if n <= 2:
        return Fraction(1)
    ln = _DEC.ln(decimal.Decimal(n))
    base = _DEC.divide(_DEC.exp(_DEC.multiply(ln, _DEC.divide(-2, 3))), ln)
    return min(Fraction(1), Fraction(q_scale) * Fraction(base))


def effective_q(n: int, params: ExtractionParams) -> Fraction:
    if params.q_override is not None:
        return params.q_override
    return default_q(n, params.q_scale)


def _buckets(km: KeyMatrix, members: Sequence[int]) -> dict:
    """Pairs of ``members`` grouped by key; pairs in lexicographic order."""
    m = km.matrix
    out: dict = {}
    members = sorted(members)
    for a, i in enumerate(members):
        row = m[i]
        for j in members[a + 1 :]:
            out.setdefault(row[j], []).append((i, j))
    return out


def _delete_naive(km: KeyMatrix, sample: Sequence[int]) -> set[int]:
    # One sweep over all bad configurations in key order, then pair order.
    # A configuration whose points are all still present loses its
    # lowest-index point.
    alive = set(sample)
    buckets = _buckets(km, sample)
    for key in sorted(buckets):
        pairs = buckets[key]
        if len(pairs) < 2:
            continue
        first = None
        for pr in pairs:
            if pr[0] not in alive or pr[1] not in alive:
                continue
            if first is None:
                first = pr
                continue
            victim = min(first[0], pr[0])
            alive.discard(victim)
            if victim in first:
                first = None if victim in pr else pr
    return alive


def _conflict_degrees(buckets: dict, alive: set[int] | None = None) -> dict[int, int]:
    """Number of unordered bad configurations each point belongs to."""
    deg: dict[int, int] = {}
    for pairs in buckets.values():
        if alive is not None:
            pairs = [pr for pr in pairs if pr[0] in alive and pr[1] in alive]
        s = len(pairs)
        if s < 2:
            continue
        d: dict[int, int] = {}
        for a, b in pairs:
            d[a] = d.get(a, 0) + 1
            d[b] = d.get(b, 0) + 1
        total = s * (s - 1) // 2
        for v, dv in d.items():
            rest = s - dv
            deg[v] = deg.get(v, 0) + total - rest * (rest - 1) // 2
    return deg


def _delete_greedy(km: KeyMatrix, sample: Sequence[int]) -> set[int]:
    alive = set(sample)
    buckets = {k: v for k, v in _buckets(km, sample).items() if len(v) > 1}
    while True:
        deg = _conflict_degrees(buckets, alive)
        if not deg:
            return alive
        victim = min(deg, key=lambda v: (-deg[v], v))
        alive.discard(victim)


def conflict_degrees(km: KeyMatrix) -> list[int]:
    deg = _conflict_degrees(_buckets(km, range(km.n)))
    return [deg.get(i, 0) for i in range(km.n)]


def _run_trials(km: KeyMatrix, q: Fraction, params: ExtractionParams, ks: Sequence[int]):
    out = []
    for k in ks:
        mask = rng.bernoulli_mask(rng.stream(params.seed, k), km.n, q)
        sample = [int(i) for i in mask.nonzero()[0]]
        t_q, f_q, _ = counts_from_matrix(km.restrict(sample))
        if params.policy == "naive":
            kept = _delete_naive(km, sample)
        else:
            kept = _delete_greedy(km, sample)
        final = sorted(kept)
        rec = TrialRecord(
            trial=k,
            sampled_size=len(sample),
            t_q=t_q,
            f_q=f_q,
            final_size=len(final),
            certificate_ok=len(final) >= len(sample) - t_q - f_q,
        )
        out.append((rec, final))
    return out


def _chunks(total: int, parts: int) -> list[range]:
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out, start = [], 0
    for p in range(parts):
        size = step + (1 if p < extra else 0)
        out.append(range(start, start + size))
        start += size
    return out


def random_deletion_extract(
    P: PointSet,
    params: ExtractionParams = ExtractionParams(),
    workers: int = 1,
    km: KeyMatrix | None = None,
) -> ExtractionResult:
    """Sample-and-delete extraction, repeated over ``params.trials`` trials.

    Trial ``k`` draws from a stream that depends only on ``(seed, k)``.  The
    result is therefore the same for any ``workers``.
    """
    n = len(P)
    if n < 1:
        raise ValueError("empty point set")
    if km is None:
        km = key_matrix(P)
    q = effective_q(n, params)
    chunks = _chunks(params.trials, workers)
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=len(chunks)) as ex:
            parts = list(ex.map(_run_trials, [km] * len(chunks), [q] * len(chunks), [params] * len(chunks), chunks))
    else:
        parts = [_run_trials(km, q, params, c) for c in chunks]
    results = [r for part in parts for r in part]

    best, best_trial = [], None
    for rec, final in results:
        if len(final) > len(best):
            best, best_trial = final, rec.trial
    if not best:
        best = [0]
    report = verify_distinct(P, best)
    return ExtractionResult(
        best_subset=best,
        trials=[rec for rec, _ in results],
        params=params,
        q=q,
        verified=report.ok,
        best_trial=best_trial,
    )


def _compatible(row, chosen: Sequence[int], used: set) -> bool:
    keys = set()
    for c in chosen:
        k = row[c]
        if k in used or k in keys:
            return False
        keys.add(k)
    return True


def greedy_extract(P: PointSet, order: str = "input", seed: int = 0, km: KeyMatrix | None = None) -> list[int]:
    """Add points one at a time, keeping each that creates no repeated distance.

    ``order`` is ``"input"`` or ``"shuffle"`` (seeded Fisher-Yates).
    """
    if km is None:
        km = key_matrix(P)
    if order == "input":
        seq = list(range(len(P)))
    elif order == "shuffle":
        seq = rng.permutation(rng.stream(seed), len(P))
    else:
        raise ValueError(f"unknown order {order!r}")
    m = km.matrix
    chosen: list[int] = []
    used: set = set()
    for v in seq:
        row = m[v]
        if _compatible(row, chosen, used):
            used.update(row[c] for c in chosen)
            chosen.append(v)
    return sorted(chosen)


class _BudgetExhausted(Exception):
    pass


def _max_size_for_keys(distinct: int) -> int:
    # a valid k-subset uses C(k, 2) different keys
    return (1 + math.isqrt(1 + 8 * distinct)) // 2


def exact_max_subset(
    P: PointSet,
    node_budget: int = 1_000_000,
    km: KeyMatrix | None = None,
    stats: dict | None = None,
) -> tuple[list[int], bool]:
    """Largest distinct-distance subset by branch and bound.

    Returns ``(subset, optimal)``.  ``optimal`` is False when the search ran
    out of ``node_budget`` and the best subset found so far is returned.
    """
    n = len(P)
    if n == 0:
        return [], True
    if km is None:
        km = key_matrix(P)
    m = km.matrix
    rows = [m[i].tolist() for i in range(n)]
    deg = conflict_degrees(km)
    order = sorted(range(n), key=lambda v: (-deg[v], v))

    best = greedy_extract(P, km=km)
    cap = _max_size_for_keys(len({rows[i][j] for i in range(n) for j in range(i + 1, n)}))
    nodes = 0

    def search(chosen: list[int], used: set, cands: list[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExhausted
        if len(chosen) > len(best):
            best = sorted(chosen)
        for idx, v in enumerate(cands):
            if len(chosen) + len(cands) - idx <= len(best) or len(best) >= cap:
                return
            row = rows[v]
            new_used = used | {row[c] for c in chosen}
            nxt = chosen + [v]
            rest = [w for w in cands[idx + 1 :] if _compatible(rows[w], nxt, new_used)]
            search(nxt, new_used, rest)

    optimal = True
    try:
        search([], set(), order)
    except _BudgetExhausted:
        optimal = False
    if stats is not None:
        stats["nodes"] = min(nodes, node_budget)
    return best, optimal
