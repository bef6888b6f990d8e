"""
Similarity dimension
====================

Roots of the Moran equation and of the dimension equation of the
exact-overlap family.
"""

import math

import numpy as np

from genpos import DimensionEquation, similarity_dimension, solve_dimension_equation

# equal ratios have a closed form
for m, r in [(2, 1 / 3), (3, 0.1), (4, 0.25)]:
    print(f"m={m} r={r:.4f}  s={similarity_dimension([r] * m):.15f}  log m/log(1/r)={math.log(m) / math.log(1 / r):.15f}")

# (1/2, 1/4): u + u^2 = 1 with u = 2^-s
print("golden case", similarity_dimension([0.5, 0.25]), math.log2(2 / (math.sqrt(5) - 1)))

# random vectors; the residual stays at rounding level
rng = np.random.default_rng(0)
for _ in range(5):
    r = rng.uniform(0.05, 0.6, rng.integers(2, 6))
    s = similarity_dimension(r)
    print(np.round(r, 3), f"s={s:.6f}", f"residual={math.fsum(r**s) - 1:+.1e}")

# t^x + b^x - (tb)^x + 9^-x = 1 for the exact-overlap attractor
t = b = 0.1
eq = DimensionEquation(((1, t), (1, b), (-1, t * b), (1, 1 / 9)), 1.0)
x = solve_dimension_equation(eq, (0.3, 0.6))
print(f"exact-overlap dimension at t=b=0.1: {x:.16f} (residual {eq.residual(x):.1e})")
