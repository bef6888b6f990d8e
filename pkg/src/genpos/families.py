"""Parametrized families of affine systems.

A family knows how to build its system at a single parameter and, for sweeps,
an interval-coefficient system valid over a whole parameter box.  It also
carries the uniform motion constant ``C`` (``|S_{k,t'}(x) - S_{k,t}(x)| <= C |t' - t|``
on the hull) and a ratio vector dominating every map over the domain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .ifs import AffineMap, IFSystem, IntervalAffineMap, RatioVector

TRANSLATION_ALL = "translation-all"
TRANSLATION_SINGLE = "translation-single"
EXACT_OVERLAP = "exact-overlap"
ONE_POINT = "one-point"
KINDS = (TRANSLATION_ALL, TRANSLATION_SINGLE, EXACT_OVERLAP, ONE_POINT)

# coefficients(lo, hi) -> list of (a_lo, a_hi, b_lo, b_hi) per map
Coefficients = Callable[[np.ndarray, np.ndarray], list]


@dataclass(frozen=True, eq=False)
class FamilyDescriptor:
    kind: str
    coefficients: Coefficients
    domain_lo: np.ndarray
    domain_hi: np.ndarray
    hull_lo: np.ndarray
    hull_hi: np.ndarray
    C: float
    ratios: RatioVector
    # an open domain excludes its boundary from admissible parameters
    open_domain: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown family kind {self.kind!r}")
        for name in ("domain_lo", "domain_hi", "hull_lo", "hull_hi"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
        if np.any(self.domain_lo > self.domain_hi):
            raise DomainError("empty parameter domain")
        if not self.C > 0:
            raise DomainError("motion constant C must be positive")

    @property
    def param_dim(self) -> int:
        return len(self.domain_lo)

    @property
    def dim_domain(self) -> int:
        """Affine dimension of the parameter box."""
        return int(np.count_nonzero(self.domain_hi > self.domain_lo))

    def contains(self, t) -> bool:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.open_domain:
            inner = (t > self.domain_lo) | (self.domain_lo == self.domain_hi)
            outer = (t < self.domain_hi) | (self.domain_lo == self.domain_hi)
            return bool(np.all(inner & outer))
        return bool(np.all((t >= self.domain_lo) & (t <= self.domain_hi)))

    def at(self, t) -> IFSystem:
        """The system at parameter ``t``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if t.shape != self.domain_lo.shape or not self.contains(t):
            raise DomainError(f"parameter {t.tolist()} outside the family domain")
        maps = []
        for a_lo, _, b_lo, _ in self.coefficients(t, t):
            maps.append(AffineMap(a_lo, b_lo))
        return IFSystem(tuple(maps), self.hull_lo, self.hull_hi)

    def over(self, lo, hi) -> IFSystem:
        """Interval system covering every parameter in the box ``[lo, hi]``."""
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        maps = []
        for k, (a_lo, a_hi, b_lo, b_hi) in enumerate(self.coefficients(lo, hi)):
            maps.append(IntervalAffineMap(a_lo, a_hi, b_lo, b_hi, self.ratios.entries[k]))
        return IFSystem(tuple(maps), self.hull_lo, self.hull_hi)

    @property
    def hull_diameter(self) -> float:
        return float(np.linalg.norm(self.hull_hi - self.hull_lo))


def _point(a, b):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    return a, a, b, b


def _one(x) -> np.ndarray:
    return np.array([[x]], dtype=float)


def exact_overlap_family(b: float, domain=(0.0, 1 / 9), t_ratio: float | None = None) -> FamilyDescriptor:
    """``S1 = t x``, ``S2 = b x``, ``S3 = (x + 8)/9`` on ``[0, 1]`` with ``t`` the parameter.

    ``t_ratio`` bounds ``t`` over the domain; it defaults to the upper end of the domain.
    """
    if not 0 < b < 1 / 9:
        raise DomainError(f"b must lie in (0, 1/9), got {b}")
    lo, hi = float(domain[0]), float(domain[1])
    if not 0 <= lo <= hi <= 1 / 9:
        raise DomainError(f"t-domain must lie inside (0, 1/9), got {domain}")
    tr = hi if t_ratio is None else float(t_ratio)
    if tr < hi:
        raise DomainError("t_ratio must dominate the domain")

    def coefficients(t_lo, t_hi):
        return [
            (_one(t_lo[0]), _one(t_hi[0]), np.zeros(1), np.zeros(1)),
            _point([[b]], [0.0]),
            _point([[1 / 9]], [8 / 9]),
        ]

    return FamilyDescriptor(
        EXACT_OVERLAP, coefficients, [lo], [hi], [0.0], [1.0], C=1.0,
        ratios=RatioVector((tr, b, 1 / 9)), meta={"b": b},
    )


def one_point_family(p: float, r: float, domain=(0.0, 1 / 36)) -> FamilyDescriptor:
    """Six-map system on ``[0, 1]`` with ``q`` (the slope of the reversing map ``S3``) as parameter."""
    for name, v in (("p", p), ("r", r)):
        if not 0 < v < 1 / 36:
            raise DomainError(f"{name} must lie in (0, 1/36), got {v}")
    lo, hi = float(domain[0]), float(domain[1])
    if not 0 <= lo <= hi <= 1 / 36:
        raise DomainError(f"q-domain must lie inside (0, 1/36), got {domain}")
    h, a = 0.5, 1 / 3

    def coefficients(q_lo, q_hi):
        return [
            _point([[p]], [0.0]),
            _point([[r]], [a]),
            (_one(-q_hi[0]), _one(-q_lo[0]), np.array([h]), np.array([h])),
            _point([[r]], [h - r]),
            _point([[-r]], [1 - a]),
            _point([[r]], [1 - r]),
        ]

    return FamilyDescriptor(
        ONE_POINT, coefficients, [lo], [hi], [0.0], [1.0], C=1.0,
        ratios=RatioVector((p, r, 1 / 36, r, r, r)), meta={"p": p, "r": r},
    )


def _translation_hull(base: IFSystem, reach: float):
    """Symmetric box invariant under every map translated by at most ``reach`` per coordinate."""
    centre = base.hull_center
    half = 0.0
    for f in base.maps:
        row_norm = float(np.abs(f.matrix).sum(axis=1).max())
        if not row_norm < 1:
            raise DomainError("translation hull needs max-row-sum norms below 1")
        shift = np.abs(f.matrix @ centre + f.offset - centre).max()
        half = max(half, (shift + reach) / (1 - row_norm))
    half = max(half, float((base.hull_hi - base.hull_lo).max()) / 2) * (1 + 1e-9) + 1e-12
    return centre - half, centre + half


def translation_single_family(base: IFSystem, index: int, domain_lo, domain_hi) -> FamilyDescriptor:
    """Only map ``index`` (1-based) moves: ``S_{index,t}(x) = S_index(x) + t``."""
    if not 1 <= index <= base.m:
        raise DomainError(f"index {index} outside 1..{base.m}")
    dlo = np.atleast_1d(np.asarray(domain_lo, dtype=float))
    dhi = np.atleast_1d(np.asarray(domain_hi, dtype=float))
    if dlo.shape != (base.dim,):
        raise DomainError("translation parameter must live in the ambient space")
    reach = float(np.maximum(np.abs(dlo), np.abs(dhi)).max())
    hull_lo, hull_hi = _translation_hull(base, reach)

    def coefficients(t_lo, t_hi):
        out = []
        for k, f in enumerate(base.maps, start=1):
            if k == index:
                out.append((f.matrix, f.matrix, f.offset + t_lo, f.offset + t_hi))
            else:
                out.append((f.matrix, f.matrix, f.offset, f.offset))
        return out

    return FamilyDescriptor(
        TRANSLATION_SINGLE, coefficients, dlo, dhi, hull_lo, hull_hi, C=1.0,
        ratios=base.ratios, open_domain=False, meta={"index": index, "base": base},
    )


def translation_all_family(base: IFSystem, domain_lo, domain_hi) -> FamilyDescriptor:
    """Every map gets its own translation; the parameter is the concatenation ``(t_1, ..., t_m)``."""
    n, m = base.dim, base.m
    dlo = np.atleast_1d(np.asarray(domain_lo, dtype=float))
    dhi = np.atleast_1d(np.asarray(domain_hi, dtype=float))
    if dlo.shape != (n * m,):
        raise DomainError(f"translation-all parameter must have {n * m} coordinates")
    reach = float(np.maximum(np.abs(dlo), np.abs(dhi)).max())
    hull_lo, hull_hi = _translation_hull(base, reach)

    def coefficients(t_lo, t_hi):
        return [
            (f.matrix, f.matrix, f.offset + t_lo[k * n:(k + 1) * n], f.offset + t_hi[k * n:(k + 1) * n])
            for k, f in enumerate(base.maps)
        ]

    return FamilyDescriptor(
        TRANSLATION_ALL, coefficients, dlo, dhi, hull_lo, hull_hi, C=1.0,
        ratios=base.ratios, open_domain=False, meta={"base": base},
    )


def family_from_dict(data: dict) -> FamilyDescriptor:
    """Family descriptor from its JSON form (``{"kind": ..., ...}``)."""
    from .ifs import system_from_dict

    try:
        kind = data["kind"]
        if kind == EXACT_OVERLAP:
            return exact_overlap_family(float(data["b"]), tuple(data.get("domain", (0.0, 1 / 9))))
        if kind == ONE_POINT:
            return one_point_family(float(data["p"]), float(data["r"]), tuple(data.get("domain", (0.0, 1 / 36))))
        if kind == TRANSLATION_SINGLE:
            base = system_from_dict(data["system"])
            return translation_single_family(base, int(data["index"]), data["domain"]["lo"], data["domain"]["hi"])
        if kind == TRANSLATION_ALL:
            base = system_from_dict(data["system"])
            return translation_all_family(base, data["domain"]["lo"], data["domain"]["hi"])
    except KeyError as exc:
        raise DomainError(f"family descriptor is missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise DomainError(f"malformed family descriptor: {exc}") from exc
    raise DomainError(f"unknown family kind {data.get('kind')!r}")
