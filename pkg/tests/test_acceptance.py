"""Acceptance criteria, one test per criterion.

Each test records a ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary (see ``conftest.py``) and when this file is run directly.
"""

import math
import statistics
import time
from fractions import Fraction

import numpy as np
import pytest

from histclass import (
    BinBoundaries,
    RunConfig,
    batchwise_optimize,
    classify,
    default_top_count,
    equal_width_boundaries,
    find_cics,
    histogram,
    indicator_scores,
    optimize_cutoff,
    pattern_similarity,
    predict,
    relevance_table,
    scale,
    split_training,
    union_classify,
)
from histclass.datagen import generate, planted_spec
from histclass.dataio import load_iris
from histclass.metrics import ConfusionStats, accuracy, kappa

RESULTS = {}


def record(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail}"
    RESULTS[n] = line
    print(line)
    return ok


# 1 ---------------------------------------------------------------------------

IRIS_TARGETS = {"setosa": (0.937, 98.3), "versicolor": (0.727, 93.3), "virginica": (0.756, 94.1)}


def iris_medians(typ, nb, seeds=range(25)):
    ds = load_iris(typ)
    kappas, accs = [], []
    for s in seeds:
        cfg = RunConfig(cic_mode="manual", cols=(2, 3), nb=nb, train_pos=0.6, train_neg=0.01, seed=s)
        c = classify(ds.X, ds.labels, cfg).confusion
        kappas.append(c.kappa)
        accs.append(100 * c.accuracy)
    return statistics.median(kappas), statistics.median(accs)


def test_01_iris_reproduction():
    t0 = time.perf_counter()
    parts, all_ok = [], True
    for typ, (k_ref, a_ref) in IRIS_TARGETS.items():
        type_ok = False
        for nb in (5, 6):
            k, a = iris_medians(typ, nb)
            ok = abs(k - k_ref) <= 0.10 and abs(a - a_ref) <= 2.0
            type_ok |= ok
            parts.append(f"{typ} nb={nb} kappa {k:.3f} (ref {k_ref}) acc {a:.1f} (ref {a_ref}){'' if ok else ' x'}")
        all_ok &= type_ok
    elapsed = time.perf_counter() - t0
    all_ok &= elapsed < 5.0
    record(1, all_ok, "iris medians over 25 seeds: " + "; ".join(parts) + f"; {elapsed:.2f}s")
    assert all_ok


# 2 ---------------------------------------------------------------------------

def brute_metrics(v, w):
    r = len(v)
    acc = Fraction(sum(a * b + (1 - a) * (1 - b) for a, b in zip(v, w)), r)
    nv0, nv1 = v.count(0), v.count(1)
    nw0, nw1 = w.count(0), w.count(1)
    pe = Fraction(nv0 * nw0 + nv1 * nw1, r * r)
    k = Fraction(0) if pe == 1 else (acc - pe) / (1 - pe)
    return float(acc), float(k)


def test_02_metric_oracle():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        r = int(rng.integers(1, 201))
        v = rng.integers(0, 2, r).tolist()
        # mix in low-entropy vectors so the degenerate branch is exercised
        w = (rng.random(r) < rng.choice([0.0, 0.1, 0.5, 1.0])).astype(int).tolist()
        acc, k = brute_metrics(v, w)
        worst = max(worst, abs(accuracy(v, w) - acc), abs(kappa(v, w) - k))
    setosa = ConfusionStats(18, 0, 99, 2)
    lot = ConfusionStats(740, 0, 31347, 36)
    ok = (worst <= 1e-12
          and abs(setosa.kappa - 0.937) <= 0.001
          and abs(lot.kappa - 0.976) <= 0.001
          and abs(100 * lot.accuracy - 99.9) <= 0.05)
    record(2, ok, f"max deviation {worst:.1e} over 1000 pairs; setosa kappa {setosa.kappa:.4f}; "
                  f"lot kappa {lot.kappa:.4f} acc {100 * lot.accuracy:.2f}")
    assert ok


# 3 ---------------------------------------------------------------------------

def normal_cdf(x):
    return 0.5 * (1 + math.erf(x / math.sqrt(2)))


def test_03_histogram_unbiased():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    R, s = 2000, 50
    cases = []
    inner = np.linspace(0.1, 0.9, 6)
    edges = [0.0, *inner, 1.0]
    cases.append(("uniform", BinBoundaries(inner=inner), lambda size: rng.random(size),
                  np.diff(edges)))
    inner = np.array([-1.5, -0.5, 0.0, 0.7, 2.0])
    cdf = [0.0] + [normal_cdf(a) for a in inner] + [1.0]
    cases.append(("normal", BinBoundaries(inner=inner), lambda size: rng.standard_normal(size),
                  np.diff(cdf)))
    ok, worst = True, 0.0
    for name, b, draw, p in cases:
        samples = draw((R, s))
        mean_h = np.mean([histogram(row, b).freqs for row in samples], axis=0)
        bound = 4 * np.sqrt(p * (1 - p) / (R * s))
        ok &= bool(np.all(np.abs(mean_h - p) <= bound))
        worst = max(worst, float(np.max(np.abs(mean_h - p) / bound)))
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10.0
    record(3, ok, f"largest |mean h - p| is {worst:.2f} of the 4-sigma bound; {elapsed:.2f}s")
    assert ok


# 4 ---------------------------------------------------------------------------

def linear_scan(value, inner):
    if value < inner[0]:
        return 0
    for k in range(1, len(inner)):
        if inner[k - 1] <= value < inner[k]:
            return k
    return len(inner)


def test_04_binning_oracle():
    rng = np.random.default_rng(4)
    mismatches = 0
    for _ in range(10_000):
        nb = int(rng.integers(3, 60))
        sample = rng.normal(rng.normal(scale=100), 10.0 ** rng.integers(-4, 4), size=int(rng.integers(1, 30)))
        b = equal_width_boundaries(sample, nb)
        pick = rng.integers(4)
        if pick == 0:
            value = rng.choice(sample)
        elif pick == 1:
            value = rng.choice(b.inner)
        elif pick == 2:
            value = np.nextafter(rng.choice(b.inner), -np.inf)
        else:
            value = rng.uniform(sample.min() - 1, sample.max() + 1)
        closed = int(b.bin_of([value])[0])
        search = int(BinBoundaries(inner=b.inner).bin_of([value])[0])
        mismatches += not (closed == search == linear_scan(float(value), b.inner.tolist()))
    record(4, mismatches == 0, f"{mismatches} mismatches in 10000 cases")
    assert mismatches == 0


# 5 ---------------------------------------------------------------------------

def exhaustive(scores, truth, measure):
    best = None
    for c in range(min(scores), max(scores) + 1):
        pred = [1 if s >= c else 0 for s in scores]
        q = brute_metrics(truth, pred)[0 if measure == "accuracy" else 1]
        if best is None or q > best[1]:
            best = (c, q)
    return best


def test_05_cutoff_optimality():
    rng = np.random.default_rng(5)
    bad = 0
    for i in range(200):
        r = int(rng.integers(1, 300))
        scores = rng.integers(0, int(rng.integers(1, 12)), r)
        truth = (rng.random(r) < np.clip(scores / (scores.max() + 1) + rng.normal(0, 0.3), 0, 1)).astype(int)
        measure = "kappa" if i % 2 == 0 else "accuracy"
        res = optimize_cutoff(scores, truth, measure)
        c, q = exhaustive(scores.tolist(), truth.tolist(), measure)
        bad += not (res.c_opt == c and abs(res.q_opt - q) <= 1e-12)
    monotone = True
    for _ in range(500):
        scores = rng.integers(0, 10, int(rng.integers(1, 50)))
        c1, c2 = np.sort(rng.uniform(-1, 11, 2))
        monotone &= bool(np.all(predict(scores, c1) >= predict(scores, c2)))
    ok = bad == 0 and monotone
    record(5, ok, f"{bad} disagreements with the exhaustive scan in 200 instances; predict monotone: {monotone}")
    assert ok


# 6 ---------------------------------------------------------------------------

def test_06_planted_recovery(planted_lot):
    X, labels, planted = planted_lot
    cfg = RunConfig(b_pos=0.3, b_neg=0.01, nb=1000, seed=0)
    split = split_training(labels, cfg.train_pos, cfg.train_neg, seed=cfg.seed)
    S = scale(X)
    found = sorted(find_cics(S, split, 0.3, 0.01, 1000).cols.tolist())
    top4 = sorted(r.col for r in relevance_table(S, split, 1000).rows[:4])
    k = classify(X, labels, cfg).confusion.kappa
    ok = found == planted and top4 == planted and k >= 0.95
    record(6, ok, f"FindCics {found}, top-4 ranks {top4}, planted {planted}, kappa {k:.4f}")
    assert ok


# 7 ---------------------------------------------------------------------------

def test_07_tiny_training(planted_lot):
    X, labels, _ = planted_lot
    ks = [classify(X, labels, RunConfig(train_pos=2, train_neg=1, seed=s)).confusion.kappa for s in range(25)]
    med = statistics.median(ks)
    record(7, med >= 0.90, f"|T+| = 2, |T-| = 1: median kappa {med:.4f} over 25 seeds (min {min(ks):.4f})")
    assert med >= 0.90


# 8 ---------------------------------------------------------------------------

def test_08_autocics_parity(planted_lot):
    X, labels, _ = planted_lot
    k_thr = classify(X, labels, RunConfig(seed=0)).confusion.kappa
    k_auto = classify(X, labels, RunConfig(cic_mode="auto", t=50, seed=0)).confusion.kappa
    t_default = default_top_count(332)
    ok = abs(k_auto - k_thr) <= 0.05 and t_default == 34
    record(8, ok, f"auto t=50 kappa {k_auto:.4f} vs thresholds {k_thr:.4f}; default t for n=332 is {t_default}")
    assert ok


# 9 ---------------------------------------------------------------------------

def core_time(X, split, repeats=7):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        S = scale(X)
        cics = find_cics(S, split, 0.3, 0.01, 1000)
        indicator_scores(S, cics, split.domain)
        best = min(best, time.perf_counter() - t0)
    return best


def test_09_complexity_scaling():
    t0 = time.perf_counter()
    by_m, by_n = {}, {}
    for m in (10_000, 20_000, 40_000):
        X, labels, _ = generate(planted_spec(m=m, n=50, seed=9))
        by_m[m] = core_time(X, split_training(labels, 0.2, 0.05, seed=0))
    for n in (50, 100, 200):
        X, labels, _ = generate(planted_spec(m=10_000, n=n, seed=9))
        by_n[n] = core_time(X, split_training(labels, 0.2, 0.05, seed=0))
    ratios_m = [by_m[20_000] / by_m[10_000], by_m[40_000] / by_m[20_000]]
    ratios_n = [by_n[100] / by_n[50], by_n[200] / by_n[100]]
    elapsed = time.perf_counter() - t0
    ok = max(ratios_m + ratios_n) <= 2.6 and elapsed < 60
    record(9, ok, "time ratios on doubling m: " + ", ".join(f"{r:.2f}" for r in ratios_m)
           + "; doubling n: " + ", ".join(f"{r:.2f}" for r in ratios_n) + f"; {elapsed:.1f}s")
    assert ok


# 10 --------------------------------------------------------------------------

def triple_loop(A, U):
    out = []
    for a in A:
        h = sum(a)
        qs = [sum(x * y for x, y in zip(a, u)) / h if h else 0.0 for u in U]
        out.append((max(qs), min(qs)))
    return out


def test_10_union_properties(planted_lot):
    rng = np.random.default_rng(10)
    ordered = single = oracle = True
    for _ in range(100):
        width = int(rng.integers(1, 10))
        A = rng.random((int(rng.integers(1, 40)), width)) < 0.5
        U = rng.random((int(rng.integers(1, 8)), width)) < 0.5
        sim = pattern_similarity(A, U)
        ordered &= bool(np.all(sim.q_min <= sim.q_max))
        one = pattern_similarity(A, U[:1])
        single &= bool(np.array_equal(one.q_min, one.q_max))
        ref = np.array(triple_loop(A.astype(int).tolist(), U.astype(int).tolist()))
        oracle &= bool(np.allclose(np.c_[sim.q_max, sim.q_min], ref, rtol=0, atol=1e-15))
    X, labels, _ = planted_lot
    rep = union_classify(X, labels, RunConfig(u_pos=10, seed=0))
    best = float(np.max(rep.cutoff.kappas))
    ok = ordered and single and oracle and best == 1.0
    record(10, ok, f"q_min<=q_max {ordered}; |U+|=1 equality {single}; triple-loop match {oracle}; "
                   f"best grid kappa {best:.4f} at c={rep.cutoff.c_opt:g}")
    assert ok


# 11 --------------------------------------------------------------------------

def test_11_batchwise(planted_lot):
    X, labels, _ = planted_lot
    rep = classify(X, labels, RunConfig(train_pos=2, train_neg=1, seed=3))
    scores, truth = rep.scores, rep.truth
    whole = batchwise_optimize(scores, truth, scores.size + 5)
    collapse = (len(whole.batches) == 1 and whole.batches[0].c_opt == rep.cutoff.c_opt
                and whole.batches[0].kappa == rep.cutoff.q_opt)
    batched = batchwise_optimize(scores, truth, 700)
    per_batch = True
    for b in batched.batches:
        c, q = exhaustive(scores[b.start:b.stop].tolist(), truth[b.start:b.stop].tolist(), "kappa")
        per_batch &= b.c_opt == c and abs(b.kappa - q) <= 1e-12
    census_ok = sum(batched.census.values()) == len(batched.batches)
    ok = collapse and per_batch and census_ok
    record(11, ok, f"single-batch collapse {collapse}; {len(batched.batches)} batches match recomputation "
                   f"{per_batch}; census {batched.census}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
