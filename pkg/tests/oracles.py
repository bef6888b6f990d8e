"""Independent reference computations used by the tests.

Nothing here imports genpos: the oracles work on plain (ratio, offset) lists
for 1-D similarity systems with positive ratios on the hull [0, 1].
"""
from __future__ import annotations

import math

import numpy as np


def word_images(ratios, offsets, prefix, depth):
    """Scale and offset of ``S_{prefix u}`` for every ``u`` of length ``depth``."""
    scale, shift = 1.0, 0.0
    for i in prefix:
        shift += scale * offsets[i - 1]
        scale *= ratios[i - 1]
    scales, shifts = np.array([scale]), np.array([shift])
    r, c = np.asarray(ratios, dtype=float), np.asarray(offsets, dtype=float)
    for _ in range(depth):
        shifts = (shifts[:, None] + scales[:, None] * c[None, :]).ravel()
        scales = (scales[:, None] * r[None, :]).ravel()
    return scales, shifts


def interval_set_distance(lo_a, hi_a, lo_b, hi_b) -> float:
    """Minimum distance between two finite unions of closed intervals."""
    lo_b_sorted = np.sort(lo_b)
    hi_b_sorted = np.sort(hi_b)
    # b-intervals starting at or before hi_a, minus those ending before lo_a
    n_start = np.searchsorted(lo_b_sorted, hi_a, side="right")
    n_left = np.searchsorted(hi_b_sorted, lo_a, side="left")
    if np.any(n_start - n_left > 0):
        return 0.0
    best = math.inf
    right = n_start < lo_b_sorted.size
    if right.any():
        best = min(best, float((lo_b_sorted[n_start[right]] - hi_a[right]).min()))
    left = n_left > 0
    if left.any():
        best = min(best, float((lo_a[left] - hi_b_sorted[n_left[left] - 1]).min()))
    return best


def point_set_distance(xs, ys) -> float:
    ys = np.sort(ys)
    idx = np.searchsorted(ys, xs)
    best = math.inf
    for shift in (0, -1):
        k = np.clip(idx + shift, 0, ys.size - 1)
        best = min(best, float(np.abs(xs - ys[k]).min()))
    return best


def piece_distance_bounds(ratios, offsets, j, k, depth):
    """(lower, upper) bounds on dist(K_j, K_k) from depth-``depth`` refinements.

    The lower bound is the smallest distance between covering boxes
    ``S_w([0, 1])``; the upper bound uses the attractor points ``S_w(x0)`` where
    ``x0`` is the fixed point of the first map.
    """
    x0 = offsets[0] / (1 - ratios[0])
    sa, ca = word_images(ratios, offsets, j, depth)
    sb, cb = word_images(ratios, offsets, k, depth)
    lower = interval_set_distance(ca, ca + sa, cb, cb + sb)
    upper = point_set_distance(ca + sa * x0, cb + sb * x0)
    return lower, upper


def moran_closed_form_equal(m: int, r: float) -> float:
    return math.log(m) / math.log(1 / r)


def golden_case() -> float:
    """Root of (1/2)^s + (1/4)^s = 1: u + u^2 = 1 with u = (1/2)^s."""
    return math.log2(2 / (math.sqrt(5) - 1))


def brute_force_records(t: float, b: float, limit: int, count: int):
    """Record-breaking ``(l, n)`` for ``|t^l b^-n - 1|``, scanning ``n`` then ``l`` up to ``limit``."""
    lt, lb = math.log(t), math.log(b)
    best = math.inf
    out = []
    for n in range(1, limit + 1):
        for l in range(1, limit + 1):
            d = abs(math.exp(l * lt - n * lb) - 1)
            if d < best:
                best = d
                out.append((l, n))
                if len(out) == count:
                    return out
    return out
