"""
General-position certificates
=============================

Dimension bounds for exceptional parameter sets, the margin inequality for
parametrized pieces, and the translation corollaries.
"""

from genpos import (
    HolderData, corollary_preset, displacement_bound, empirical_displacement_check, exact_overlap_family,
    genpos_bound, one_point_family, similarity_system, theorem3_certificate, translation_corollary_single,
    translation_corollary_ssc, translation_single_family,
)

print(genpos_bound(HolderData(1, 1, 1, 1, dimL1L2=0.8, dimD=1)))
h = corollary_preset("escaping-translation", dim_product=0.6, M1=1, M2=3, n=1)
print("escaping translation:", h, genpos_bound(h).holds)

# points with a fixed address move at most C |t' - t| / (1 - rbar)
print("displacement bound C=1, rbar=1/9, dist=1:", displacement_bound(1, 1 / 9, 1))
rep = empirical_displacement_check(exact_overlap_family(0.1), samples=500, depth=30, seed=0)
print(f"spot check on 500 samples: passed={rep.passed} max ratio={rep.max_ratio:.3f}")

# margin with the exact-overlap constants c_j = 8 b^n, r_j = 9 b^n / 8, r_k = b^n
b, n, m = 0.1, 3, 4
cert = theorem3_certificate(exact_overlap_family(b), (1,) * m, (2,) * n,
                            cj=8 * b**n, Ck=0.0, rj=9 * b**n / 8, rk=b**n)
print(f"exact overlap: margin {cert.margin:.9f} = 359/64 b^3 = {359 / 64 * b**n:.9f}, holds={cert.holds}")

# the one-point margin is 23/105 p^m, a little under p^m / 4
p = 0.02
cert = theorem3_certificate(one_point_family(p, p), (3, 1), (4, 6), cj=p / 3, Ck=0.0, rj=p / 36, rk=3 * p / 36)
print(f"one point: margin {cert.margin:.9f}, 23/105 p = {23 / 105 * p:.9f}, p/4 = {p / 4:.9f}")

# a translated map: c_j = 1 for words starting with the moving index
base = similarity_system([0.1, 0.1, 0.1], [0.0, 0.45, 0.9])
print(theorem3_certificate(translation_single_family(base, 1, [-0.05], [0.05]), (1,), (3,)).conclusion)

for r, n in [((0.1, 0.1, 0.1), 1), ((0.3, 0.3, 0.3), 1), ((0.3, 0.3, 0.3), 2)]:
    c = translation_corollary_ssc(r, n)
    print(f"SSC corollary r={r} n={n}: s_r={c.inputs['s_r']:.3f} holds={c.holds}")
print("single corollary:", translation_corollary_single((0.1, 0.1), 1, 2, 1).holds)
