"""General-position certificates for parametrized systems.

The certificates bound the Hausdorff dimension of the set of parameters at
which two parametrized sets (or two pieces of an attractor) meet.  A
certificate ``holds`` when that bound is strictly below the dimension of the
parameter domain, i.e. the two sets are disjoint for almost every parameter.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, HypothesisError, PreconditionError
from .families import EXACT_OVERLAP, ONE_POINT, TRANSLATION_SINGLE, FamilyDescriptor
from .ifs import Address, RatioVector, address_point, as_word, word_meet
from .intervals import EPS
from .moran import similarity_dimension_upper

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HolderData:
    """Constants of a Hölder / anti-Lipschitz pair of parametrized maps.

    ``C0, alpha``: uniform Hölder bound of each map in its space variable.
    ``M0, beta``: lower bound on how fast the difference moves with the parameter.
    """

    alpha: float
    beta: float
    C0: float
    M0: float
    dimL1L2: float
    dimD: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError("alpha and beta must be positive")
        if not (self.C0 > 0 and self.M0 > 0):
            raise DomainError("C0 and M0 must be positive")
        if self.dimL1L2 < 0 or self.dimD < 0:
            raise DomainError("dimensions must be non-negative")


@dataclass
class Certificate:
    bound: float
    threshold: float
    holds: bool
    margin: float | None = None
    conclusion: str = ""
    inputs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        return cls(**data)


def genpos_bound(h: HolderData) -> Certificate:
    """``dim Delta <= min(beta/alpha * dim(L1 x L2), dim D)``."""
    bound = min(h.beta / h.alpha * h.dimL1L2, h.dimD)
    return Certificate(
        bound=bound, threshold=h.dimD, holds=bound < h.dimD,
        conclusion="the two sets are disjoint for almost all parameters" if bound < h.dimD else "",
        inputs=asdict(h),
    )


PRESETS = ("zA-rotation", "escaping-translation", "bilip-translation")


def corollary_preset(example_id: str, *, dim_product: float, **params) -> HolderData:
    """Hölder data for the three Lipschitz (alpha = beta = 1) presets.

    ``zA-rotation``: ``inf_abs_z`` (> 0) and ``disc_radius``; parameter space is the plane.
    ``escaping-translation``: ``M1 < M2`` and ambient dimension ``n``.
    ``bilip-translation``: bi-Lipschitz constants ``L_minus <= L_plus`` and ``n``.
    """
    if example_id == "zA-rotation":
        inf_abs, radius = float(params["inf_abs_z"]), float(params["disc_radius"])
        if not inf_abs > 0:
            raise HypothesisError("zA-rotation needs 0 outside the closure of A (inf |z| > 0)")
        if not radius > 0:
            raise HypothesisError("disc radius must be positive")
        return HolderData(1.0, 1.0, C0=radius, M0=inf_abs, dimL1L2=dim_product, dimD=2.0)
    if example_id == "escaping-translation":
        m1, m2 = float(params["M1"]), float(params["M2"])
        if not m2 > m1 > 0:
            raise HypothesisError(f"escaping-translation needs M2 > M1 > 0, got M1={m1}, M2={m2}")
        return HolderData(1.0, 1.0, C0=m1, M0=m2 - m1, dimL1L2=dim_product, dimD=float(params["n"]))
    if example_id == "bilip-translation":
        lm, lp = float(params["L_minus"]), float(params["L_plus"])
        if not 0 < lm <= lp:
            raise HypothesisError(f"bi-Lipschitz constants need 0 < L- <= L+, got {lm}, {lp}")
        return HolderData(1.0, 1.0, C0=lp, M0=lm, dimL1L2=dim_product, dimD=float(params["n"]))
    raise DomainError(f"unknown preset {example_id!r}; choose from {PRESETS}")


def displacement_bound(C: float, rbar: float, dist: float) -> float:
    """How far a point with a fixed address can move when the parameter moves by ``dist``."""
    if not 0 < rbar < 1:
        raise DomainError(f"rbar must lie in (0, 1), got {rbar}")
    if not C > 0 or dist < 0:
        raise DomainError("C must be positive and dist non-negative")
    return C * dist / (1 - rbar)


@dataclass
class DisplacementReport:
    passed: bool
    max_ratio: float
    samples: int
    witness: dict | None = None


def displacement_observation(fam: FamilyDescriptor, address: Address, t, t2, depth: int):
    """Observed displacement of ``address`` between two parameters and the admissible amount."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    t2 = np.atleast_1d(np.asarray(t2, dtype=float))
    x1, _ = address_point(fam.at(t), address, depth)
    x2, _ = address_point(fam.at(t2), address, depth)
    observed = float(np.linalg.norm(x1 - x2))
    rbar = fam.ratios.sbar
    diam = fam.hull_diameter
    truncation = 2 * rbar**depth * diam
    # evaluating depth maps rounds once per coordinate operation
    rounding = 8 * (depth + 1) * fam.hull_lo.size * EPS * (diam + float(np.abs(fam.hull_hi).max()))
    allowed = displacement_bound(fam.C, rbar, float(np.linalg.norm(t2 - t))) + truncation + rounding
    return observed, allowed


def empirical_displacement_check(fam: FamilyDescriptor, samples: int = 1000, depth: int = 30,
                                 seed: int = 0) -> DisplacementReport:
    """Spot-check the displacement bound on random (address, t, t') triples."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    rng = np.random.default_rng(seed)
    m = len(fam.ratios)
    worst, witness = 0.0, None
    for _ in range(samples):
        prefix = tuple(int(i) for i in rng.integers(1, m + 1, size=depth))
        address = Address(prefix, int(rng.integers(1, m + 1)))
        t = _sample_param(fam, rng)
        t2 = _sample_param(fam, rng)
        observed, allowed = displacement_observation(fam, address, t, t2, depth)
        ratio = observed / allowed if allowed > 0 else (0.0 if observed == 0 else math.inf)
        if ratio > worst:
            worst = ratio
            witness = {"address": list(prefix), "tail": address.tail, "t": t.tolist(), "t2": t2.tolist(),
                       "observed": observed, "allowed": allowed}
    passed = worst <= 1.0
    return DisplacementReport(passed, worst, samples, None if passed else witness)


def _sample_param(fam: FamilyDescriptor, rng) -> np.ndarray:
    while True:
        t = fam.domain_lo + (fam.domain_hi - fam.domain_lo) * rng.random(fam.param_dim)
        if fam.contains(t):
            return t


def theorem_margin(cj: float, Ck: float, rj: float, rk: float, C: float, rbar: float) -> float:
    """``c_j - C_k - (r_j + r_k) C / (1 - rbar)``, rounded down by a few ulp."""
    motion = (rj + rk) * C / (1 - rbar)
    raw = cj - Ck - motion
    return raw - 4 * EPS * (abs(cj) + abs(Ck) + motion)


def motion_constants(fam: FamilyDescriptor, j: Sequence[int], k: Sequence[int]) -> tuple[float, float]:
    """Anti-Lipschitz constant of ``S_j`` and Lipschitz constant of ``S_k`` in the parameter.

    Only the shapes worked out for the built-in families are supported.  For the
    one-point family the word ``3 1^m`` is accepted with the understanding that
    the piece is restricted to points of ``K`` outside ``K_1``.
    """
    j, k = tuple(j), tuple(k)
    if fam.kind == EXACT_OVERLAP:
        if j and set(j) == {1} and 1 not in k:
            # inf m t^{m-1} over the domain is at least inf t^m / t >= 9 inf t^m
            return 9 * fam.domain_lo[0] ** len(j), 0.0
    elif fam.kind == ONE_POINT and len(j) >= 1 and j[0] == 3 and 3 not in k:
        body = j[1:]
        if body and body[-1] != 1 and set(body[:-1]) <= {1}:
            # j = 3 1^m i with i != 1: S_i maps the hull into [1/3, 1]
            return fam.meta["p"] ** (len(body) - 1) / 3, 0.0
        if set(body) <= {1}:
            # j = 3 1^m, valid for points of K outside K_1 (which lie in [1/3, 1])
            return fam.meta["p"] ** len(body) / 3, 0.0
    elif fam.kind == TRANSLATION_SINGLE:
        idx = fam.meta["index"]
        if j and j[0] == idx and idx not in j[1:] and idx not in k:
            return 1.0, 0.0
    raise PreconditionError(f"no built-in motion constants for words {list(j)}, {list(k)} in a {fam.kind} family; "
                            "pass cj and Ck explicitly")


def theorem3_certificate(fam: FamilyDescriptor, j: Sequence[int], k: Sequence[int],
                         cj: float | None = None, Ck: float | None = None, dimD: float | None = None,
                         rj: float | None = None, rk: float | None = None) -> Certificate:
    """Almost-sure disjointness of the pieces ``K_j`` and ``K_k`` over the family.

    ``rj``/``rk`` may replace the ratio products by larger (weaker) values.
    """
    m = len(fam.ratios)
    j, k = as_word(j, m), as_word(k, m)
    _, incomparable = word_meet(j, k)
    if not incomparable:
        raise PreconditionError(f"words {list(j)} and {list(k)} are comparable")
    if cj is None or Ck is None:
        cj_auto, ck_auto = motion_constants(fam, j, k)
        cj = cj_auto if cj is None else cj
        Ck = ck_auto if Ck is None else Ck
    if not cj > 0 or Ck < 0:
        raise PreconditionError("need cj > 0 and Ck >= 0")
    rj_prod, rk_prod = fam.ratios.product(j), fam.ratios.product(k)
    rj = rj_prod if rj is None else float(rj)
    rk = rk_prod if rk is None else float(rk)
    # overrides may only loosen the products; the slack absorbs the upward rounding of the products
    slack_j, slack_k = 1 - (4 * len(j) + 16) * EPS, 1 - (4 * len(k) + 16) * EPS
    if rj < rj_prod * slack_j or rk < rk_prod * slack_k:
        raise PreconditionError("ratio overrides must not be smaller than the ratio products")
    rbar = fam.ratios.sbar
    dimD = float(fam.dim_domain if dimD is None else dimD)
    margin = theorem_margin(cj, Ck, rj, rk, fam.C, rbar)
    if fam.kind == ONE_POINT:
        log.info("one-point margin: with c_j = p^m/3 the displayed terms give 23/105 p^m, "
                 "which is below p^m/4; the computed margin %.17g is reported", margin)
    s = similarity_dimension_upper(fam.ratios)
    holds = margin > 0 and s < dimD / 2
    return Certificate(
        bound=2 * s, threshold=dimD, holds=holds, margin=margin,
        conclusion=f"K_{_fmt(j)} and K_{_fmt(k)} are disjoint for almost all parameters" if holds else "",
        inputs={"kind": fam.kind, "j": list(j), "k": list(k), "cj": cj, "Ck": Ck, "rj": rj, "rk": rk,
                "C": fam.C, "rbar": rbar, "ratios": list(fam.ratios.entries), "s_r": s, "dimD": dimD},
    )


def _fmt(w) -> str:
    return "".join(str(i) for i in w) if all(i < 10 for i in w) else ".".join(map(str, w))


def translation_corollary_single(r: RatioVector | Sequence[float], k: int, m: int, n: int) -> Certificate:
    """Only map ``m`` is translated by ``t`` in ``R^n``: are ``K_k`` and ``K_m`` disjoint for a.e. ``t``?"""
    r = r if isinstance(r, RatioVector) else RatioVector(tuple(r))
    if k == m:
        raise PreconditionError("k and m must differ")
    as_word((k, m), len(r))
    s = similarity_dimension_upper(r)
    rsum = r.entries[k - 1] + r.entries[m - 1] + r.sbar
    holds = rsum < 1 and s < n / 2
    return Certificate(
        bound=2 * s, threshold=float(n), holds=holds, margin=1 - rsum,
        conclusion=f"K_{k},t and K_{m},t are disjoint for almost all t in R^{n}" if holds else "",
        inputs={"ratios": list(r.entries), "k": k, "m": m, "n": n, "s_r": s, "ratio_sum": rsum},
    )


def translation_corollary_ssc(r: RatioVector | Sequence[float], n: int) -> Certificate:
    """Every map translated independently: strong separation for almost every translation vector?"""
    r = r if isinstance(r, RatioVector) else RatioVector(tuple(r))
    e = sorted(r.entries, reverse=True)
    s = similarity_dimension_upper(r)
    # the two largest entries give the worst pair
    worst = (e[0] + e[1] + r.sbar) if len(e) >= 2 else r.sbar
    holds = worst < 1 and s < n / 2
    mdim = len(e) * n
    return Certificate(
        bound=2 * s, threshold=float(n), holds=holds, margin=1 - worst,
        conclusion=f"strong separation for almost all translation vectors in R^{mdim}" if holds else "",
        inputs={"ratios": list(r.entries), "n": n, "s_r": s, "worst_pair_sum": worst},
    )
