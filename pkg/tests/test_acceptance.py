"""Acceptance criteria, one test per criterion.

Each test records a one-line verdict; ``conftest.py`` prints all of them at the
end of the run.  Running this file directly prints the same lines.
"""
from __future__ import annotations

import logging
import math
import time

import mpmath
import numpy as np
import pytest

from genpos import (
    ExactOverlapParams, OnePointParams, build_one_point, check_pair_disjoint, dmn_interval_exact,
    empirical_displacement_check, exact_overlap_family, margin_exact_overlap, margin_one_point, one_point_family,
    similarity_dimension, similarity_system, theorem3_certificate, translation_all_family,
    translation_corollary_single, translation_corollary_ssc, wsp_witness_search,
)
from genpos.cases import exact_overlap_sweep
from genpos.ifs import AffineMap, IFSystem
from genpos.separation import piece_cover_contains
from oracles import brute_force_records, golden_case, moran_closed_form_equal, piece_distance_bounds

RESULTS: dict = {}


def record(number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float):
    ok = ok and elapsed < limit
    RESULTS[number] = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail}; {elapsed:.2f} s, limit {limit:g} s)"
    assert ok, RESULTS[number]


def test_criterion_1_moran_residuals():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        r = rng.uniform(0.01, 0.99, size=rng.integers(2, 9))
        s = similarity_dimension(r)
        worst = max(worst, abs(math.fsum(x**s for x in r) - 1))
    closed = [
        abs(similarity_dimension([r] * m) - moran_closed_form_equal(m, r))
        for m in range(2, 9) for r in (0.1, 0.25, 0.5)
    ]
    closed.append(abs(similarity_dimension([0.5, 0.25]) - golden_case()))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and max(closed) <= 1e-12
    record(1, "Moran residuals", ok, f"max residual {worst:.1e}, max closed-form error {max(closed):.1e}",
           elapsed, 1.0)


def _smallest_m(b, n):
    m = 1
    while m == n or 9.0**-m > 9 * b**n / 8:
        m += 1
    return m


def test_criterion_2_exact_overlap_margin():
    start = time.perf_counter()
    worst, all_hold, s_ok = 0.0, True, True
    for b in (0.05, 0.1):
        fam = exact_overlap_family(b)
        s_ok &= similarity_dimension(fam.ratios) < 0.5
        for n in range(1, 11):
            bn = b**n
            cert = theorem3_certificate(fam, (1,) * _smallest_m(b, n), (2,) * n,
                                        cj=8 * bn, Ck=0.0, rj=9 * bn / 8, rk=bn)
            worst = max(worst, abs(cert.margin - margin_exact_overlap(n, b)),
                        abs(margin_exact_overlap(n, b) - 359 / 64 * bn))
            all_hold &= cert.holds
    elapsed = time.perf_counter() - start
    record(2, "exact-overlap margin (359/64) b^n", worst <= 1e-12 and all_hold and s_ok,
           f"max deviation {worst:.1e}, all hold {all_hold}, s_r < 1/2 {s_ok}", elapsed, 1.0)


def test_criterion_3_one_point_margin(caplog):
    start = time.perf_counter()
    worst = 0.0
    with caplog.at_level(logging.INFO, logger="genpos.cases"):
        for p in (0.005, 0.02, 0.027):
            fam = one_point_family(p, p)
            for m in range(0, 7):
                pm = p**m
                worst = max(worst, abs(margin_one_point(m, p) - 23 / 105 * pm))
                cert = theorem3_certificate(fam, (3,) + (1,) * m, (4,) + (6,) * m, cj=pm / 3, Ck=0.0,
                                            rj=pm / 36, rk=3 * pm / 36)
                worst = max(worst, abs(cert.margin - 23 / 105 * pm))
    logged = any("23/105" in r.getMessage() and "1/4" in r.getMessage() for r in caplog.records)
    elapsed = time.perf_counter() - start
    record(3, "one-point margin (23/105) p^m", worst <= 1e-12 and logged,
           f"max deviation {worst:.1e}, discrepancy logged {logged}", elapsed, 1.0)


def test_criterion_4_displacement():
    start = time.perf_counter()
    half = 0.5 * np.eye(2)
    base = IFSystem((AffineMap(half, [0.0, 0.0]), AffineMap(half, [0.5, 0.0]), AffineMap(half, [0.0, 0.5])),
                    [0.0, 0.0], [1.0, 1.0])
    families = {
        "exact-overlap": exact_overlap_family(0.1),
        "one-point": one_point_family(0.02, 0.02),
        "translation-2d": translation_all_family(base, [-0.25] * 6, [0.25] * 6),
    }
    ratios = {}
    for name, fam in families.items():
        rep = empirical_displacement_check(fam, samples=1000, depth=30, seed=0)
        ratios[name] = rep.max_ratio if rep.passed else math.inf
    elapsed = time.perf_counter() - start
    ok = all(v <= 1 for v in ratios.values()) and abs(families["translation-2d"].ratios.sbar - 0.5) < 1e-12
    detail = ", ".join(f"{k} max ratio {v:.3f}" for k, v in ratios.items())
    record(4, "displacement bound on 1000 samples per family", ok, detail, elapsed, 10.0)


def test_criterion_5_separation_soundness():
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    disjoint = unsound = 0
    for _ in range(200):
        m = int(rng.integers(2, 5))
        ratios = rng.uniform(0.02, 0.25, m)
        offsets = rng.random(m) * (1 - ratios)
        j, k = (int(x) for x in rng.choice(np.arange(1, m + 1), 2, replace=False))
        v = check_pair_disjoint(similarity_system(ratios, offsets), (j,), (k,), 1e-9, 6)
        if v.disjoint:
            disjoint += 1
            lower, upper = piece_distance_bounds(list(ratios), list(offsets), (j,), (k,), 6)
            if lower < v.gap - 1e-9 or upper < v.gap - 1e-9:
                unsound += 1
    elapsed = time.perf_counter() - start
    record(5, "separation soundness against depth-6 enumeration", unsound == 0 and disjoint > 0,
           f"{disjoint} Disjoint verdicts, {unsound} unsound", elapsed, 60.0)


def _merged(intervals):
    out = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return out


def test_criterion_6_exact_overlap_sweep():
    start = time.perf_counter()
    b, cells = 0.05, 2000
    rep = exact_overlap_sweep(b, cells=cells, max_mn=4)
    width = (1 / 9) / cells
    dmn = [dmn_interval_exact(m, n, b) for m in range(1, 5) for n in range(1, 5) if m != n]
    union = _merged([(d.lo - width, d.hi + width) for d in dmn if not d.empty])
    # cell edges come from linspace, so allow a few ulp at the union boundary
    fuzz = 1e-15
    outside = [c for c in rep.cells if not c.verdict.disjoint
               and not any(lo - fuzz <= c.lo[0] and c.hi[0] <= hi + fuzz for lo, hi in union)]
    elapsed = time.perf_counter() - start
    ok = not outside and rep.disjoint_fraction >= 0.9
    record(6, "exact-overlap sweep, b = 0.05, 2000 cells", ok,
           f"disjoint fraction {rep.disjoint_fraction:.4f}, {len(outside)} undecided cells outside D_mn",
           elapsed, 120.0)


def test_criterion_7_one_point_structure():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    min_gap = 1 / 36 - 2 / 36**2
    failures = []
    worst_gap = math.inf
    for q in rng.uniform(0, 1 / 36, 50):
        if q == 0:
            continue
        s = build_one_point(OnePointParams(0.02, float(q), 0.02))
        for d in range(13):
            if not (piece_cover_contains(s, (3,), [0.5], d) and piece_cover_contains(s, (4,), [0.5], d)):
                failures.append((q, d))
        for i in range(1, 7):
            for j in range(i + 1, 7):
                if (i, j) == (3, 4):
                    continue
                v = check_pair_disjoint(s, (i,), (j,), 1e-9, 30)
                worst_gap = min(worst_gap, v.gap if v.disjoint else 0.0)
    elapsed = time.perf_counter() - start
    ok = not failures and worst_gap >= min_gap
    record(7, "one-point structure over 50 random q", ok,
           f"h missed {len(failures)} times, smallest other gap {worst_gap:.4f} (need {min_gap:.4f})", elapsed, 30.0)


def test_criterion_8_wsp_witnesses():
    start = time.perf_counter()
    search = wsp_witness_search("exact-overlap", ExactOverlapParams(0.05, 0.1), 1e-9, 200)
    found = [(w.m, w.n) for w in search.witnesses[:5]]
    oracle = brute_force_records(0.05, 0.1, 200, 5)
    dist = [w.identity_distance for w in search.witnesses]
    decreasing = all(a > b for a, b in zip(dist, dist[1:]))

    mpmath.mp.dps = 50
    p, q, r = 0.02, 0.01, 0.025
    op = wsp_witness_search("one-point", OnePointParams(p, q, r), 1e-3, 200)
    P, Q, R, A = mpmath.mpf(p), mpmath.mpf(q), mpmath.mpf(r), mpmath.mpf(1) / 3
    worst = 0.0
    for w in op.witnesses:
        scale = P**w.m * Q / R ** (w.n + 1)
        offset = (R ** (w.n + 1) - P**w.m * Q) * (1 - A) / R ** (w.n + 2)
        worst = max(worst, abs(float(scale) - w.map_scale), abs(float(offset) - w.map_offset))
    op_dist = [w.identity_distance for w in op.witnesses]
    decreasing &= all(a > b for a, b in zip(op_dist, op_dist[1:]))
    elapsed = time.perf_counter() - start
    ok = found == oracle and len(found) == 5 and decreasing and worst <= 1e-12
    record(8, "WSP witnesses", ok,
           f"exact-overlap {found} vs brute force {oracle}, one-point formula deviation {worst:.1e}", elapsed, 10.0)


def test_criterion_9_corollary_table():
    start = time.perf_counter()
    rng = np.random.default_rng(9)
    cases = mismatches = holds = 0
    while cases < 50:
        m = int(rng.integers(2, 7))
        r = float(rng.uniform(0.02, 0.45))
        n = int(rng.integers(1, 4))
        s = moran_closed_form_equal(m, r)
        if abs(3 * r - 1) < 1e-6 or abs(s - n / 2) < 1e-6:
            continue
        expected = 3 * r < 1 and s < n / 2
        k, km = (int(x) for x in rng.choice(np.arange(1, m + 1), 2, replace=False))
        single = translation_corollary_single([r] * m, k, km, n).holds
        ssc = translation_corollary_ssc([r] * m, n).holds
        mismatches += (single != expected) + (ssc != expected)
        holds += expected
        cases += 1
    elapsed = time.perf_counter() - start
    record(9, "translation corollaries on a 50-case table", mismatches == 0 and 0 < holds < 50,
           f"{mismatches} mismatches, {holds} holding cases", elapsed, 1.0)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
