"""The exact-overlap and one-point-intersection families on [0, 1].

Exact overlap: ``S1 = t x``, ``S2 = b x``, ``S3 = (x + 8)/9`` with ``t, b`` in (0, 1/9).
``S1`` and ``S2`` commute, so ``S1 S2(K)`` always lies in ``K_1`` and ``K_2``; the
question is for which ``t`` nothing else does.

One point: six maps with ``h = 1/2``, ``a = 1/3`` and ``p, q, r`` in (0, 1/36);
``K_3`` and ``K_4`` always share ``h`` and the question is whether that is all.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, InapplicableError, PreconditionError
from .families import exact_overlap_family, one_point_family
from .ifs import AffineMap, IFSystem, RatioVector
from .intervals import Interval
from .separation import check_pair_disjoint, exceptional_set_sweep

log = logging.getLogger(__name__)

H = 0.5
A = 1 / 3
EXACT_MARGIN_CONSTANT = 8 - (9 / 8 + 1) / (8 / 9)  # 359/64
ONE_POINT_MARGIN_CONSTANT = 1 / 3 - 1 / 35 - 3 / 35  # 23/105


@dataclass(frozen=True)
class ExactOverlapParams:
    t: float
    b: float

    def __post_init__(self):
        for name in ("t", "b"):
            v = getattr(self, name)
            if not 0 < v < 1 / 9:
                raise DomainError(f"{name} must lie in (0, 1/9), got {v}")


@dataclass(frozen=True)
class OnePointParams:
    p: float
    q: float
    r: float

    def __post_init__(self):
        for name in ("p", "q", "r"):
            v = getattr(self, name)
            if not 0 < v < 1 / 36:
                raise DomainError(f"{name} must lie in (0, 1/36), got {v}")


def build_exact_overlap(params: ExactOverlapParams) -> IFSystem:
    t, b = params.t, params.b
    maps = (AffineMap([[t]], [0.0]), AffineMap([[b]], [0.0]), AffineMap([[1 / 9]], [8 / 9]))
    return IFSystem(maps, [0.0], [1.0])


def exact_overlap_ratios(params: ExactOverlapParams) -> RatioVector:
    return RatioVector((params.t, params.b, 1 / 9))


def dmn_interval_exact(m: int, n: int, b: float) -> Interval:
    """Values of ``t`` for which the hulls of ``S1^m(K_3)`` and ``S2^n(K_3)`` meet."""
    if m == n:
        raise PreconditionError("m and n must differ")
    if m < 1 or n < 1:
        raise PreconditionError("m and n must be >= 1")
    if not 0 < b < 1 / 9:
        raise DomainError(f"b must lie in (0, 1/9), got {b}")
    lo = (8 * b**n / 9) ** (1 / m)
    hi = min(9 * b**n / 8, 9.0**-m) ** (1 / m)
    return Interval(lo, hi)


def margin_exact_overlap(n: int, b: float) -> float:
    """Lower bound ``(359/64) b^n`` for the separation margin of ``S1^m`` against ``S2^n``."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    return EXACT_MARGIN_CONSTANT * b**n


def exact_overlap_dmn_family(m: int, n: int, b: float):
    """The exact-overlap family restricted to ``t`` in ``D_mn``."""
    d = dmn_interval_exact(m, n, b)
    if d.empty:
        raise DomainError(f"D_{m}{n} is empty for b = {b}")
    return exact_overlap_family(b, (d.lo, d.hi), t_ratio=d.hi)


@dataclass
class OverlapVerdict:
    verified: bool
    max_mn: int
    undecided: list
    results: dict = field(default_factory=dict)
    fast_path: int = 0

    def to_dict(self) -> dict:
        return {
            "verified": self.verified, "max_mn": self.max_mn,
            "undecided": [list(u) for u in self.undecided], "fast_path": self.fast_path,
            "results": [{"key": list(key), **v.to_dict()} for key, v in sorted(self.results.items())],
        }


def exact_overlap_pairs(max_mn: int) -> list:
    """Word pairs ``(1^m 3, 2^n 3)`` for ``m != n`` in ``1..max_mn``."""
    return [((1,) * m + (3,), (2,) * n + (3,))
            for m in range(1, max_mn + 1) for n in range(1, max_mn + 1) if m != n]


def classify_exact_overlap(params: ExactOverlapParams, max_mn: int = 4, tol: float = 1e-12,
                           depth: int = 30) -> OverlapVerdict:
    """Check ``S1^m(K_3)`` against ``S2^n(K_3)`` for all ``m != n <= max_mn``.

    All Disjoint means the exact overlap ``S1^m(K) ∩ S2^n(K) = S1^m S2^n(K)`` is
    verified for that range of ``m, n`` only.
    """
    if max_mn < 1:
        raise PreconditionError("max_mn must be >= 1")
    system = build_exact_overlap(params)
    results, undecided = {}, []
    for m in range(1, max_mn + 1):
        for n in range(1, max_mn + 1):
            if m == n:
                continue
            v = check_pair_disjoint(system, (1,) * m + (3,), (2,) * n + (3,), tol, depth)
            results[(m, n)] = v
            if not v.disjoint:
                undecided.append((m, n))
    return OverlapVerdict(not undecided, max_mn, undecided, results)


def commuting_inclusion_check(params: ExactOverlapParams, samples: int = 200, depth: int = 20,
                              seed: int = 0) -> float:
    """Largest discrepancy between ``S1 S2`` and ``S2 S1`` on sampled addresses.

    Also asserts that each sampled point of ``S1 S2(K)`` lies in the hull images of
    ``K_1`` and ``K_2``; returns the worst ``|S1 S2 x - S2 S1 x|``.
    """
    system = build_exact_overlap(params)
    s1, s2 = system.maps[0], system.maps[1]
    rng = np.random.default_rng(seed)
    worst = 0.0
    box1, box2 = system.word_box((1,)), system.word_box((2,))
    for _ in range(samples):
        x = system.hull_center
        for i in reversed(rng.integers(1, 4, size=depth)):
            x = system.maps[i - 1](x)
        y12, y21 = s1(s2(x)), s2(s1(x))
        worst = max(worst, float(abs(y12 - y21)[0]))
        for lo, hi in (box1, box2):
            if not (lo[0] <= y12[0] <= hi[0]):
                raise AssertionError(f"point {y12[0]} escapes the hull image [{lo[0]}, {hi[0]}]")
    return worst


def exact_overlap_sweep(b: float, cells: int = 2000, max_mn: int = 4, tol: float = 1e-12,
                        max_depth: int = 30, method: str = "interval", workers: int | None = None):
    """Sweep ``t`` over (0, 1/9) checking every pair ``S1^m(K_3), S2^n(K_3)``, ``m != n <= max_mn``."""
    fam = exact_overlap_family(b)
    return exceptional_set_sweep(fam, None, None, cells, tol, max_depth, pairs=exact_overlap_pairs(max_mn),
                                 method=method, workers=workers)


def build_one_point(params: OnePointParams) -> IFSystem:
    p, q, r = params.p, params.q, params.r
    maps = (
        AffineMap([[p]], [0.0]),
        AffineMap([[r]], [A]),
        AffineMap([[-q]], [H]),
        AffineMap([[r]], [H - r]),
        AffineMap([[-r]], [1 - A]),
        AffineMap([[r]], [1 - r]),
    )
    return IFSystem(maps, [0.0], [1.0])


def one_point_ratios(params: OnePointParams) -> RatioVector:
    """Ratio vector used for certificates; the entry for ``S3`` is the domain bound 1/36."""
    return RatioVector((params.p, params.r, 1 / 36, params.r, params.r, params.r))


def dmn_interval_onepoint(m: int, n: int, p: float, r: float) -> Interval:
    """Open interval of ``q`` outside which ``S3 S1^m`` and ``S4 S6^n`` pieces are trivially apart."""
    if m < 0 or n < 0:
        raise PreconditionError("m and n must be >= 0")
    lo = A * r ** (n + 1) / p**m
    hi = min(r ** (n + 1) / (A * p**m), 1 / 36)
    return Interval(lo, hi, open=True)


def margin_one_point(m: int, p: float) -> float:
    """``(1/3 - 1/35 - 3/35) p^m = (23/105) p^m``."""
    if m < 0:
        raise PreconditionError("m must be >= 0")
    log.info("one-point margin uses 23/105 = %.6f, which is below 1/4; the constant 1/4 is not used",
             ONE_POINT_MARGIN_CONSTANT)
    return ONE_POINT_MARGIN_CONSTANT * p**m


def one_point_fast_path(m: int, n: int, params: OnePointParams) -> bool:
    """True when ``p^m [aq, q]`` and ``r^{n+1} [a, 1]`` are disjoint, so nothing needs checking."""
    pm, rn = params.p**m, params.r ** (n + 1)
    return pm * params.q < rn * A or rn < pm * A * params.q


def classify_one_point(params: OnePointParams, max_mn: int = 3, tol: float = 1e-12,
                       depth: int = 30) -> OverlapVerdict:
    """Check ``S3 S1^m (K_j)`` against ``S4 S6^n (K_i)`` for ``j != 1``, ``i != 6``, ``m, n <= max_mn``.

    The common point ``h`` is excluded because ``K_1`` and ``K_6`` (the pieces
    through the fixed points 0 and 1) are left out.
    """
    if max_mn < 0:
        raise PreconditionError("max_mn must be >= 0")
    system = build_one_point(params)
    results, undecided, fast = {}, [], 0
    for m in range(max_mn + 1):
        for n in range(max_mn + 1):
            if one_point_fast_path(m, n, params):
                fast += 1
                continue
            for jj in range(2, 7):
                for ii in range(1, 6):
                    u = (3,) + (1,) * m + (jj,)
                    v = (4,) + (6,) * n + (ii,)
                    verdict = check_pair_disjoint(system, u, v, tol, depth)
                    results[(m, n, jj, ii)] = verdict
                    if not verdict.disjoint:
                        undecided.append((m, n, jj, ii))
    return OverlapVerdict(not undecided, max_mn, undecided, results, fast)


@dataclass(frozen=True)
class WspWitness:
    """An element ``x -> map_scale * x + map_offset`` of ``{S_i^-1 S_j}`` close to the identity."""

    m: int
    n: int
    map_scale: float
    map_offset: float

    @property
    def identity_distance(self) -> float:
        return abs(self.map_scale - 1) + abs(self.map_offset)

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "map_scale": self.map_scale, "map_offset": self.map_offset,
                "identity_distance": self.identity_distance}


@dataclass
class WitnessSearch:
    kind: str
    witnesses: list
    reached_tol: bool
    log_ratio: float

    def to_dict(self) -> dict:
        return {"kind": self.kind, "reached_tol": self.reached_tol, "log_ratio": self.log_ratio,
                "witnesses": [w.to_dict() for w in self.witnesses]}


RATIONAL_DENOMINATOR = 10**6


def _reject_rational(x: float, what: str) -> None:
    approx = Fraction(x).limit_denominator(RATIONAL_DENOMINATOR)
    if abs(x - float(approx)) <= 8 * abs(x) * np.finfo(float).eps:
        raise InapplicableError(f"{what} = {x!r} is numerically the rational {approx}; no witnesses need exist")


def continued_fraction(x: float, max_terms: int = 64) -> list:
    """Partial quotients of the float ``x`` (exact, via its rational value)."""
    f = Fraction(x)
    out = []
    for _ in range(max_terms):
        a = math.floor(f)
        out.append(a)
        f -= a
        if f == 0:
            break
        f = 1 / f
    return out


def semiconvergents(x: float, limit: int):
    """Fractions ``p/q`` that are one-sided best approximations of ``x``, in increasing ``q``.

    Yields convergents and intermediate fractions with ``q <= limit``.
    """
    quotients = continued_fraction(x)
    p2, q2, p1, q1 = 0, 1, 1, 0
    for a in quotients:
        for i in range(1, a + 1):
            p, q = p2 + i * p1, q2 + i * q1
            if q > limit:
                return
            yield p, q
        p2, q2, p1, q1 = p1, q1, p2 + a * p1, q2 + a * q1


def onepoint_witness_coefficients(m: int, n: int, p: float, q: float, r: float) -> tuple[float, float]:
    """Scale and offset of ``G_n^-1 H_m`` with ``H_m = S3 S1^m S5`` and ``G_n = S4 S6^n S2``."""
    log_scale = m * math.log(p) + math.log(q) - (n + 1) * math.log(r)
    scale = math.exp(log_scale)
    # (r^{n+1} - p^m q)(1 - a) / r^{n+2} written without forming tiny powers
    offset = -math.expm1(log_scale) * (1 - A) / r
    return scale, offset


def wsp_witness_search(kind: str, params, target_tol: float = 1e-3, max_exponent: int = 200) -> WitnessSearch:
    """Compositions ``S_i^-1 S_j`` approaching the identity, with strictly decreasing distance.

    ``exact-overlap``: ``S2^-n S1^l`` has scale ``t^l b^-n``; candidates are the
    semiconvergents of ``log t / log b``.
    ``one-point``: ``G_n^-1 H_m`` as above; the inhomogeneous problem
    ``m log p - (n+1) log r ~ -log q`` is scanned over ``m <= max_exponent``.
    """
    witnesses: list = []
    best = math.inf
    if kind == "exact-overlap":
        t, b = params.t, params.b
        ratio = math.log(t) / math.log(b)
        _reject_rational(ratio, "log t / log b")
        for n, l in semiconvergents(ratio, max_exponent):
            if n < 1 or l < 1 or n > max_exponent:
                continue
            scale = math.exp(l * math.log(t) - n * math.log(b))
            w = WspWitness(l, n, scale, 0.0)
            if w.identity_distance < best:
                best = w.identity_distance
                witnesses.append(w)
                if best <= target_tol:
                    break
    elif kind == "one-point":
        p, q, r = params.p, params.q, params.r
        ratio = math.log(p) / math.log(r)
        _reject_rational(ratio, "log p / log r")
        shift = math.log(q) / math.log(r)
        for m in range(max_exponent + 1):
            n1 = round(m * ratio + shift)
            for cand in (n1 - 1, n1, n1 + 1):
                n = cand - 1
                if n < 0 or n > max_exponent:
                    continue
                w = WspWitness(m, n, *onepoint_witness_coefficients(m, n, p, q, r))
                if w.identity_distance < best:
                    best = w.identity_distance
                    witnesses.append(w)
            if best <= target_tol:
                break
    else:
        raise DomainError(f"unknown witness kind {kind!r}")
    return WitnessSearch(kind, witnesses, best <= target_tol, ratio)
