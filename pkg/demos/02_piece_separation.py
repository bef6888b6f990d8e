"""
Separating attractor pieces
===========================

Disjointness is only ever certified, never refuted: a pair of pieces is
Disjoint with a gap, or Undecided with the reason the search stopped.
"""

from genpos import (
    ExactOverlapParams, OnePointParams, build_exact_overlap, build_one_point, check_pair_disjoint, check_ssc,
    similarity_system,
)
from genpos.separation import piece_cover_contains

cantor = similarity_system([1 / 3, 1 / 3], [0.0, 2 / 3])
print("Cantor 1 vs 2:", check_pair_disjoint(cantor, [1], [2]))

# [0, 1] as two halves: the pieces share 1/2, so refinement bottoms out
halves = similarity_system([0.5, 0.5], [0.0, 0.5])
print("halves 1 vs 2:", check_pair_disjoint(halves, [1], [2], tol=1e-8))

# deep pieces of the exact-overlap system sit in t[8/9, 1] and b[8/9, 1]
eo = build_exact_overlap(ExactOverlapParams(0.05, 0.1))
v = check_pair_disjoint(eo, [1, 3], [2, 3])
print(f"exact overlap 13 vs 23: {v.status}, gap {v.gap:.6f}")

# strong separation fails only at the one-point intersection of K_3 and K_4
op = build_one_point(OnePointParams(0.02, 0.02, 0.02))
report = check_ssc(op, tol=1e-9)
for (i, j), v in sorted(report.verdicts.items()):
    print(f"  pieces {i},{j}: {v.status:9s} gap={v.gap:.4f} reason={v.reason or '-'}")

# h = 1/2 stays in the covers of both pieces at every depth
print("h in covers up to depth 12:",
      all(piece_cover_contains(op, (3,), [0.5], d) and piece_cover_contains(op, (4,), [0.5], d) for d in range(13)))
