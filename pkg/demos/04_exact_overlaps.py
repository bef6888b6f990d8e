"""
Exact overlaps
==============

S1 = t x, S2 = b x, S3 = (x + 8)/9.  S1 S2(K) always lies in both K_1 and
K_2; away from the intervals D_mn nothing else does.
"""

from genpos import ExactOverlapParams, classify_exact_overlap, dmn_interval_exact, wsp_witness_search
from genpos.cases import commuting_inclusion_check, exact_overlap_sweep

b = 0.05
print("D_mn for b = 0.05:")
for m in range(1, 5):
    for n in range(1, 5):
        if m != n:
            d = dmn_interval_exact(m, n, b)
            print(f"  m={m} n={n}: " + ("empty" if d.empty else f"[{d.lo:.6f}, {d.hi:.6f}]"))

print("S1 S2 vs S2 S1 on sampled points:", commuting_inclusion_check(ExactOverlapParams(0.05, 0.1)))

for t in (0.03, 0.0513, 0.0025):
    v = classify_exact_overlap(ExactOverlapParams(t, b), max_mn=4)
    print(f"t={t}: verified={v.verified} undecided={v.undecided}")

rep = exact_overlap_sweep(b, cells=500)
print(f"sweep over 500 cells: disjoint fraction {rep.disjoint_fraction:.3f}")
for lo, hi in rep.exceptional_cover:
    print(f"  undecided t in [{lo[0]:.6f}, {hi[0]:.6f}]")

# t^l b^-n -> 1 along continued-fraction approximations of log t / log b
search = wsp_witness_search("exact-overlap", ExactOverlapParams(0.05, 0.1), 1e-4, 200)
for w in search.witnesses:
    print(f"  l={w.m:4d} n={w.n:4d}  t^l b^-n = {w.map_scale:.10f}")
