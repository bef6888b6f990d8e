"""Outward-rounded box arithmetic.

Every computed box is inflated so that it contains the exact image of its
input box.  The padding is ``4 * (n + 2)`` units in the last place of the
*magnitude sum* of the terms entering each coordinate; measuring against the
magnitude sum (rather than the result) keeps the bound valid under
cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EPS = np.finfo(float).eps
# absolute floor on padding, keeps results sound when magnitudes underflow
TINY = 1e-300


@dataclass(frozen=True)
class Interval:
    """Closed real interval; empty when ``lo > hi`` (or ``lo >= hi`` if open)."""

    lo: float
    hi: float
    open: bool = False

    @property
    def empty(self) -> bool:
        return self.lo >= self.hi if self.open else self.lo > self.hi

    @property
    def width(self) -> float:
        return 0.0 if self.empty else self.hi - self.lo

    def contains(self, x: float) -> bool:
        if self.empty:
            return False
        if self.open:
            return self.lo < x < self.hi
        return self.lo <= x <= self.hi

    def inflate(self, w: float) -> "Interval":
        return Interval(self.lo - w, self.hi + w, self.open)

    def intersects(self, other: "Interval") -> bool:
        if self.empty or other.empty:
            return False
        return self.lo <= other.hi and other.lo <= self.hi


def pad_amount(magnitude, steps: int):
    """Padding covering ``steps`` rounded operations on values of ``magnitude``."""
    return 4 * steps * EPS * np.asarray(magnitude) + TINY


def affine_image(a_lo, a_hi, b_lo, b_hi, lo, hi):
    """Outward-rounded box enclosing ``{A x + b}`` for interval ``A``, ``b`` and box ``x``.

    All arguments are numpy arrays; ``a_*`` are ``(n, n)``, the rest ``(n,)``.
    Returns ``(out_lo, out_hi)``.
    """
    n = len(lo)
    prods = np.stack([a_lo * lo, a_lo * hi, a_hi * lo, a_hi * hi])
    pmin = prods.min(axis=0).sum(axis=1)
    pmax = prods.max(axis=0).sum(axis=1)
    mag = np.abs(prods).max(axis=0).sum(axis=1) + np.maximum(np.abs(b_lo), np.abs(b_hi))
    pad = pad_amount(mag, n + 2)
    return pmin + b_lo - pad, pmax + b_hi + pad


def box_diameter(lo, hi) -> float:
    return float(np.linalg.norm(np.asarray(hi) - np.asarray(lo)))


def box_gap(lo1, hi1, lo2, hi2) -> float:
    """Certified lower bound on the Euclidean distance between two boxes (0 if they meet)."""
    sep = np.maximum(0.0, np.maximum(np.asarray(lo2) - hi1, np.asarray(lo1) - hi2))
    top = float(sep.max())
    # below this scale the products lose relative precision; 0 is always a valid bound
    if not top > 1e-290:
        return 0.0
    # scaled norm: each step rounds once, so shaving a few ulp stays below the exact value
    unit = sep / top
    norm = math.sqrt(float(np.dot(unit, unit))) * top
    return float(norm * (1.0 - 16 * EPS))


def box_contains(outer_lo, outer_hi, inner_lo, inner_hi, slack=0.0) -> bool:
    return bool(np.all(inner_lo >= outer_lo - slack) and np.all(inner_hi <= outer_hi + slack))
