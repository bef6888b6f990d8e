"""Root finding for the Moran equation and related one-variable dimension equations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BracketError, DomainError, NonMonotoneError
from .ifs import RatioVector

MAX_ITER = 200
MAX_DOUBLINGS = 64


@dataclass(frozen=True)
class DimensionEquation:
    """``sum(coeff * base**s) = target`` with every base in (0, 1)."""

    terms: tuple
    target: float = 1.0

    def __post_init__(self):
        terms = tuple((float(c), float(b)) for c, b in self.terms)
        if not terms or not all(0 < b < 1 for _, b in terms):
            raise DomainError("every base must lie in (0, 1)")
        if not any(c > 0 for c, _ in terms):
            raise DomainError("at least one coefficient must be positive")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def moran(cls, ratios: Sequence[float]) -> "DimensionEquation":
        return cls(tuple((1.0, r) for r in ratios), 1.0)

    def __call__(self, s: float) -> float:
        return math.fsum(c * math.exp(s * math.log(b)) for c, b in self.terms)

    def residual(self, s: float) -> float:
        return abs(self(s) - self.target)


def _bisect(g, lo: float, hi: float) -> tuple[float, float]:
    """Shrink a sign-change bracket of ``g`` to adjacent floats (or MAX_ITER halvings)."""
    glo = g(lo)
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = g(mid)
        if gm == 0:
            return mid, mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return lo, hi


def solve_dimension_equation(eq: DimensionEquation, bracket: tuple[float, float]) -> float:
    """Root of ``eq`` inside ``bracket`` by bisection."""
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BracketError(f"empty bracket {bracket}")
    g = lambda s: eq(s) - eq.target  # noqa: E731
    vals = (g(lo), g(0.5 * (lo + hi)), g(hi))
    if vals[0] == 0:
        return lo
    if vals[2] == 0:
        return hi
    if (vals[0] > 0) == (vals[2] > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: {vals[0]!r}, {vals[2]!r}")
    increasing = vals[0] < vals[1] < vals[2]
    decreasing = vals[0] > vals[1] > vals[2]
    if not (increasing or decreasing):
        raise NonMonotoneError(f"equation is not monotone on [{lo}, {hi}]")
    a, b = _bisect(g, lo, hi)
    return a if abs(g(a)) <= abs(g(b)) else b


def _moran_bracket(ratios: Sequence[float], ambient_dim: int = 1) -> tuple[float, float]:
    eq = DimensionEquation.moran(ratios)
    hi = float(ambient_dim + 1)
    for _ in range(MAX_DOUBLINGS):
        if eq(hi) < 1:
            return 0.0, hi
        hi *= 2
    raise BracketError("could not bracket the Moran root")


def similarity_dimension(r: RatioVector | Sequence[float]) -> float:
    """Unique ``s`` with ``sum(r_i**s) = 1``."""
    entries = r.entries if isinstance(r, RatioVector) else tuple(RatioVector(tuple(r)).entries)
    if len(entries) == 1:
        return 0.0
    eq = DimensionEquation.moran(entries)
    return solve_dimension_equation(eq, _moran_bracket(entries))


def similarity_dimension_upper(r: RatioVector | Sequence[float]) -> float:
    """Upper bound for the Moran root, safe to compare against thresholds.

    The bisection endpoint on the decreasing side is moved up by one ulp.
    """
    entries = r.entries if isinstance(r, RatioVector) else tuple(RatioVector(tuple(r)).entries)
    if len(entries) == 1:
        return 0.0
    eq = DimensionEquation.moran(entries)
    lo, hi = _bisect(lambda s: eq(s) - 1.0, *_moran_bracket(entries))
    return math.nextafter(hi, math.inf)
