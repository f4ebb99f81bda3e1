"""Exit criteria.  Each test records one PASS/FAIL line in the terminal summary."""

import math
import statistics
import time
from fractions import Fraction as F

import pytest

from ddsubsets import rng
from ddsubsets.cli import main
from ddsubsets.counting import config_counts, count_distinct_distances
from ddsubsets.experiment import FIELDS
from ddsubsets.extraction import (
    ExtractionParams,
    exact_max_subset,
    expected_size_bound,
    greedy_extract,
    random_deletion_extract,
    verify_distinct,
)
from ddsubsets.generators import circle_equispaced, grid, random_plane, random_sphere
from ddsubsets.geometry import PlanePoint, SpherePoint, inverse_stereographic
from ddsubsets.pointfile import format_point_file

from oracles import brute_isosceles, brute_max_subset_size, brute_quadruples

# every subset emitted below is collected here and re-verified by criterion 11
EMITTED: list = []


def plane_corpus():
    # 210 sets at denominator bound 20, plus 105 coincidence-rich sets at bound 2
    sets = [random_plane(4 + s % 7, seed=s, denominator_bound=20) for s in range(210)]
    sets += [random_plane(4 + s % 7, seed=1000 + s, denominator_bound=2) for s in range(105)]
    return sets


def sphere_corpus():
    return [random_sphere(4 + s % 7, seed=2000 + s, denominator_bound=2) for s in range(60)]


def solver_corpus():
    return [random_plane(6 + s % 7, seed=3000 + s, denominator_bound=2) for s in range(50)]


def identity_ok(P):
    c = config_counts(P)
    return sum((2 * m) ** 2 for m in c.pair_multiset.values()) == c.f + 4 * c.t + 2 * c.n * (c.n - 1)


@pytest.fixture(scope="module")
def grid10_naive():
    P = grid(10)
    return P, random_deletion_extract(P, ExtractionParams(trials=1000, seed=0, policy="naive"))


def test_ac01_counting_oracle(record):
    start = time.perf_counter()
    sets = plane_corpus()
    bad = [i for i, P in enumerate(sets) if (lambda c: (c.t, c.f) != (brute_isosceles(P), brute_quadruples(P)))(config_counts(P))]
    elapsed = time.perf_counter() - start
    nontrivial = sum(config_counts(P).t > 0 for P in sets)
    ok = not bad and len(sets) >= 200 and elapsed < 60
    record("AC1 counting oracle equivalence", ok, f"{len(sets)} sets ({nontrivial} with t>0), mismatches={bad}, {elapsed:.1f}s")
    assert ok


def test_ac02_decomposition_identity(record):
    sets = plane_corpus() + [grid(m) for m in range(1, 9)] + sphere_corpus()
    bad = [i for i, P in enumerate(sets) if not identity_ok(P)]
    record("AC2 decomposition identity", not bad, f"{len(sets)} sets, failures={bad}")
    assert not bad


def test_ac03_unit_square(record):
    sq = grid(2)
    c = config_counts(sq)
    subset, optimal = exact_max_subset(sq)
    EMITTED.append((sq, subset))
    oracle = (brute_isosceles(sq), brute_quadruples(sq), brute_max_subset_size(sq))
    got = (c.t, c.f, c.distinct, len(subset), optimal)
    ok = got == (8, 24, 2, 2, True) and oracle == (8, 24, 2)
    record("AC3 unit-square goldens", ok, f"t,f,distinct,Delta,optimal={got}; oracle t,f,Delta={oracle}")
    assert ok


def test_ac04_circle_law(record):
    start = time.perf_counter()
    bad = [n for n in range(2, 1001) if count_distinct_distances(circle_equispaced(n)) != n // 2]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    record("AC4 circle law distinct = floor(n/2), 2<=n<=1000", ok, f"failures={bad[:5]}, {elapsed:.1f}s")
    assert ok


def test_ac05_proof_certificate(record, grid10_naive):
    P, result = grid10_naive
    EMITTED.append((P, result.best_subset))
    failed = []
    for rec in result.trials:
        # recount each sample independently of the extractor's bookkeeping
        mask = rng.bernoulli_mask(rng.stream(0, rec.trial), len(P), result.q)
        Q = P.subset(int(i) for i in mask.nonzero()[0])
        t_q, f_q = brute_isosceles(Q), brute_quadruples(Q)
        if (rec.sampled_size, rec.t_q, rec.f_q) != (len(Q), t_q, f_q) or rec.final_size < len(Q) - t_q - f_q:
            failed.append(rec.trial)
    ok = len(result.trials) == 1000 and not failed and all(r.certificate_ok for r in result.trials)
    record("AC5 per-trial certificate on grid(10)", ok, f"{len(result.trials)} trials, failures={failed[:5]}")
    assert ok


def test_ac05b_certificate_with_dense_samples(record):
    # default q leaves t(Q) = f(Q) = 0 almost always; also exercise big samples
    P = grid(10)
    result = random_deletion_extract(P, ExtractionParams(trials=200, seed=1, q_override=F(1, 5)))
    EMITTED.append((P, result.best_subset))
    ok = all(r.final_size >= r.sampled_size - r.t_q - r.f_q for r in result.trials)
    busy = sum(r.t_q + r.f_q > 0 for r in result.trials)
    record("AC5 (supplement) certificate at q=1/5", ok, f"{busy}/200 trials with bad configurations")
    assert ok


def test_ac06_expectation_bound(record, grid10_naive):
    P, result = grid10_naive
    c = config_counts(P)
    bound = expected_size_bound(c.n, c.t, c.f, result.q)
    sizes = [r.final_size for r in result.trials]
    mean = statistics.fmean(sizes)
    se = statistics.stdev(sizes) / math.sqrt(len(sizes))
    ok = mean >= float(bound) - 3 * se
    record("AC6 expectation bound on grid(10)", ok, f"mean={mean:.4f} bound={float(bound):.4f} SE={se:.4f} q={float(result.q):.6f}")
    assert ok


def test_ac07_exact_solver_oracle(record):
    start = time.perf_counter()
    bad, nontrivial = [], 0
    for i, P in enumerate(solver_corpus()):
        subset, optimal = exact_max_subset(P, node_budget=10**7)
        EMITTED.append((P, subset))
        truth = brute_max_subset_size(P)
        nontrivial += truth < len(P)
        if not optimal or len(subset) != truth:
            bad.append(i)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    record("AC7 exact solver vs 2^N enumeration", ok, f"50 sets ({nontrivial} with Delta<N), failures={bad}, {elapsed:.1f}s")
    assert ok


def test_ac08_sphere_parity(record):
    sets = sphere_corpus()
    bad = [i for i, S in enumerate(sets) if (lambda c: (c.t, c.f) != (brute_isosceles(S), brute_quadruples(S)))(config_counts(S))]
    on_sphere = all(p.x**2 + p.y**2 + p.z**2 == 1 for S in sets for p in S)
    goldens = inverse_stereographic(PlanePoint(0, 0)) == SpherePoint(0, 0, -1) and inverse_stereographic(
        PlanePoint(F(3, 4), 0)
    ) == SpherePoint(F(24, 25), 0, F(-7, 25))
    nontrivial = sum(config_counts(S).t > 0 for S in sets)
    ok = len(sets) >= 50 and not bad and on_sphere and goldens
    record("AC8 sphere parity", ok, f"{len(sets)} sets ({nontrivial} with t>0), mismatches={bad}, unit-norm={on_sphere}, goldens={goldens}")
    assert ok


def test_ac09_grid_trend(record, tmp_path):
    out = tmp_path / "grid.csv"
    start = time.perf_counter()
    code = main(["experiment", "--shape", "grid", "--range", "4,8,16,24,32", "--trials", "100", "--out", str(out)])
    elapsed = time.perf_counter() - start
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, l.split(","))) for l in lines[1:]]
    ns = [int(r["N"]) for r in rows]
    distinct = [int(r["distinct"]) for r in rows]
    ratios = [F(d, n) for d, n in zip(distinct, ns)]
    ok = (
        code == 0
        and header == FIELDS
        and ns == [16, 64, 256, 576, 1024]
        and all(d <= n for d, n in zip(distinct, ns))
        and all(a >= b for a, b in zip(ratios, ratios[1:]))
        and elapsed < 120
    )
    record("AC9 grid trend distinct/N non-increasing", ok, f"distinct={distinct} ratios={[round(float(r), 3) for r in ratios]} {elapsed:.1f}s")
    assert ok


def test_ac10_determinism(record, tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text(format_point_file(random_plane(40, seed=5, denominator_bound=2)))
    outputs = {}
    for jobs in ("1", "1", "3"):
        for cmd in ("extract", "experiment"):
            target = tmp_path / f"{cmd}-{jobs}-{len(outputs)}"
            flags = ["--trials", "60", "--seed", "17", "--q", "1/3", "--policy", "greedy-conflict", "--jobs", jobs]
            if cmd == "extract":
                main(["extract", str(pts), *flags, "--out", str(target)])
            else:
                main(["experiment", "--shape", "random-plane", "--range", "10:40:10", "--den-bound", "2", *flags, "--out", str(target)])
            stdout = capsys.readouterr().out
            outputs.setdefault(cmd, []).append((stdout, target.read_bytes()))
    ok = all(len(set(v)) == 1 for v in outputs.values())
    record("AC10 byte-identical reruns across --jobs", ok, f"variants per command: {[len(set(v)) for v in outputs.values()]}")
    assert ok


def test_ac11_soundness_sweep(record):
    corpus = (
        plane_corpus()[::5]
        + sphere_corpus()[::3]
        + solver_corpus()[::5]
        + [grid(m) for m in (2, 5, 10)]
        + [circle_equispaced(n) for n in (7, 20)]
    )
    for i, P in enumerate(corpus):
        EMITTED.append((P, greedy_extract(P)))
        EMITTED.append((P, greedy_extract(P, order="shuffle", seed=i)))
        for policy in ("naive", "greedy-conflict"):
            r = random_deletion_extract(P, ExtractionParams(trials=10, seed=i, policy=policy, q_override=F(1, 2)))
            EMITTED.append((P, r.best_subset))
        if len(P) <= 12:
            EMITTED.append((P, exact_max_subset(P)[0]))
    bad = [i for i, (P, s) in enumerate(EMITTED) if not verify_distinct(P, s).ok]
    ok = not bad and len(EMITTED) > 100
    record("AC11 soundness sweep", ok, f"{len(EMITTED)} emitted subsets, failures={bad[:5]}")
    assert ok
