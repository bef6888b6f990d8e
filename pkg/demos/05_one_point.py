"""
One-point intersections
=======================

Six maps on [0, 1]; K_3 and K_4 always share h = 1/2.  For generic q that
is the whole intersection, and compositions G_n^-1 H_m still approach the
identity.
"""

import numpy as np

from genpos import OnePointParams, classify_one_point, dmn_interval_onepoint, margin_one_point, wsp_witness_search

p, r = 0.02, 0.025
for m in range(3):
    for n in range(3):
        d = dmn_interval_onepoint(m, n, p, r)
        print(f"D_{m}{n}(p, r) = " + ("empty" if d.empty else f"({d.lo:.6f}, {d.hi:.6f})"))

print("margins:", [f"{margin_one_point(m, p):.3e}" for m in range(4)])

rng = np.random.default_rng(1)
for q in rng.uniform(0, 1 / 36, 4):
    v = classify_one_point(OnePointParams(p, float(q), r), max_mn=2)
    print(f"q={q:.5f}: verified={v.verified}, {v.fast_path} (m, n) skipped by hull intervals, "
          f"{len(v.results)} piece pairs checked")

search = wsp_witness_search("one-point", OnePointParams(p, 0.01, r), 1e-3, 200)
for w in search.witnesses:
    print(f"  m={w.m:3d} n={w.n:3d}  x -> {w.map_scale:.6f} x {w.map_offset:+.6f}")
