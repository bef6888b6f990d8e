"""Affine iterated function systems, words over the index alphabet and the coding map."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .intervals import EPS, affine_image, box_contains, box_diameter, pad_amount

Word = tuple  # tuple[int, ...], letters are 1-based map indices


def operator_norm_bound(matrix) -> float:
    """Upper bound on the spectral norm of ``matrix``.

    The smaller of the Frobenius norm and the SVD estimate inflated by a few
    ulp; both are never below the exact operator norm.
    """
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if n == 1:
        return abs(float(a[0, 0]))
    frob = float(np.linalg.norm(a, "fro")) * (1 + 4 * EPS)
    svd = float(np.linalg.norm(a, 2)) * (1 + 16 * n * EPS)
    return min(frob, svd)


def _rounded_up_product(values: Iterable[float]) -> float:
    prod, k = 1.0, 0
    for v in values:
        prod *= v
        k += 1
    return prod * (1 + 2 * k * EPS) if k else 1.0


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Affine contraction ``x -> matrix @ x + offset`` with a certified Lipschitz ratio."""

    matrix: np.ndarray
    offset: np.ndarray
    ratio: float = None

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        b = np.atleast_1d(np.asarray(self.offset, dtype=float))
        n = a.shape[0]
        if n not in (1, 2, 3) or a.shape != (n, n) or b.shape != (n,):
            raise DomainError(f"affine map must be n x n with n in 1..3, got matrix {a.shape}, offset {b.shape}")
        bound = operator_norm_bound(a)
        ratio = bound if self.ratio is None else float(self.ratio)
        if ratio < bound:
            raise DomainError(f"ratio override {ratio} is below the computed norm bound {bound}")
        if not ratio < 1:
            raise DomainError(f"map is not a contraction: ratio bound {ratio} >= 1")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "offset", b)
        object.__setattr__(self, "ratio", ratio)

    @property
    def dim(self) -> int:
        return self.offset.shape[0]

    def __call__(self, x):
        return self.matrix @ np.asarray(x, dtype=float) + self.offset

    def then(self, inner: "AffineMap") -> "AffineMap":
        """Composition ``self o inner``."""
        if isinstance(inner, _IdentityMap):
            return self
        if isinstance(self, _IdentityMap):
            return inner
        a = self.matrix @ inner.matrix
        b = self.matrix @ inner.offset + self.offset
        # the product matrix is itself rounded, so its norm bound gets a few ulp of headroom
        bound = operator_norm_bound(a) * (1 + 8 * EPS)
        prod = self.ratio * inner.ratio * (1 + 2 * EPS)
        return AffineMap(a, b, ratio=max(min(bound, prod), operator_norm_bound(a)))

    def image_box(self, lo, hi):
        return affine_image(self.matrix, self.matrix, self.offset, self.offset, lo, hi)

    def __repr__(self):
        return f"AffineMap(matrix={self.matrix.tolist()}, offset={self.offset.tolist()}, ratio={self.ratio!r})"


@dataclass(frozen=True, eq=False)
class IntervalAffineMap:
    """Affine map whose coefficients are only known to lie in intervals.

    Used to evaluate a whole cell of a parameter sweep at once.
    """

    matrix_lo: np.ndarray
    matrix_hi: np.ndarray
    offset_lo: np.ndarray
    offset_hi: np.ndarray
    ratio: float

    @property
    def dim(self) -> int:
        return len(self.offset_lo)

    def image_box(self, lo, hi):
        return affine_image(self.matrix_lo, self.matrix_hi, self.offset_lo, self.offset_hi, lo, hi)


@dataclass(frozen=True, eq=False)
class IFSystem:
    """Ordered maps together with an invariant axis-aligned box (the hull)."""

    maps: tuple
    hull_lo: np.ndarray
    hull_hi: np.ndarray

    def __post_init__(self):
        maps = tuple(self.maps)
        lo = np.atleast_1d(np.asarray(self.hull_lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hull_hi, dtype=float))
        if len(maps) < 2:
            raise DomainError(f"a system needs at least 2 maps, got {len(maps)}")
        if any(f.dim != len(lo) for f in maps) or lo.shape != hi.shape or np.any(lo > hi):
            raise DomainError("hull and map dimensions disagree")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "hull_lo", lo)
        object.__setattr__(self, "hull_hi", hi)
        # boundary fixed points make exact containment fail by rounding only
        slack = 2 * pad_amount(np.maximum(np.abs(lo), np.abs(hi)).max(), len(lo) + 2)
        for i, f in enumerate(maps, start=1):
            img_lo, img_hi = f.image_box(lo, hi)
            if not box_contains(lo, hi, img_lo, img_hi, slack=slack):
                raise DomainError(f"hull is not invariant under map {i}: image [{img_lo}, {img_hi}]")

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def dim(self) -> int:
        return len(self.hull_lo)

    @property
    def hull_center(self) -> np.ndarray:
        return (self.hull_lo + self.hull_hi) / 2

    @property
    def hull_diameter(self) -> float:
        return box_diameter(self.hull_lo, self.hull_hi)

    @property
    def ratios(self) -> "RatioVector":
        return RatioVector(tuple(f.ratio for f in self.maps))

    def check_word(self, word: Sequence[int]) -> Word:
        return as_word(word, self.m)

    def word_box(self, word: Sequence[int]):
        """Outward-rounded box containing ``S_word(hull)``, hence the piece ``K_word``."""
        lo, hi = self.hull_lo, self.hull_hi
        for i in reversed(word):
            lo, hi = self.maps[i - 1].image_box(lo, hi)
        return lo, hi


def as_word(letters: Iterable[int], m: int | None = None) -> Word:
    w = tuple(int(i) for i in letters)
    if m is not None:
        bad = [i for i in w if not 1 <= i <= m]
        if bad:
            raise DomainError(f"letters {bad} outside 1..{m}")
    return w


@dataclass(frozen=True)
class RatioVector:
    """Per-map contraction bounds ``r_1..r_m``."""

    entries: tuple

    def __post_init__(self):
        e = tuple(float(x) for x in self.entries)
        if len(e) < 1 or not all(0 < x < 1 for x in e):
            raise DomainError(f"ratio entries must lie in (0, 1): {e}")
        object.__setattr__(self, "entries", e)

    @property
    def sbar(self) -> float:
        return max(self.entries)

    def __len__(self):
        return len(self.entries)

    def product(self, word: Sequence[int]) -> float:
        """``r_word``, rounded upward; 1 for the empty word."""
        as_word(word, len(self.entries))
        return _rounded_up_product(self.entries[i - 1] for i in word)


@dataclass(frozen=True)
class Address:
    """Eventually constant point of the coding space: ``prefix`` then ``tail`` forever."""

    prefix: tuple = ()
    tail: int = 1

    def __post_init__(self):
        object.__setattr__(self, "prefix", as_word(self.prefix))
        if self.tail < 1 or any(i < 1 for i in self.prefix):
            raise DomainError("address letters must be positive")

    def letters(self, n: int) -> Word:
        p = self.prefix[:n]
        return p + (self.tail,) * (n - len(p))


def compose(system: IFSystem, word: Sequence[int]) -> AffineMap:
    """``S_word = S_{w1} o S_{w2} o ...``; the empty word gives the identity."""
    w = system.check_word(word)
    n = system.dim
    if not w:
        return _identity(n)
    out = system.maps[w[-1] - 1]
    for i in reversed(w[:-1]):
        out = system.maps[i - 1].then(out)
    return out


class _IdentityMap(AffineMap):
    # ratio 1 is legitimate here; skip the contraction check
    def __post_init__(self):
        a = np.eye(len(np.atleast_1d(self.offset)))
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "offset", np.zeros(len(a)))
        object.__setattr__(self, "ratio", 1.0)


def _identity(n: int) -> AffineMap:
    return _IdentityMap(np.eye(n), np.zeros(n))


def word_meet(a: Sequence[int], b: Sequence[int]) -> tuple[Word, bool]:
    """Longest common prefix of two words and whether they are incomparable."""
    a, b = tuple(a), tuple(b)
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return a[:k], k < min(len(a), len(b))


def address_meet(a: Address, b: Address) -> Word | None:
    """Common prefix of two addresses, or ``None`` when they are identical."""
    n = max(len(a.prefix), len(b.prefix)) + 1
    la, lb = a.letters(n), b.letters(n)
    meet, _ = word_meet(la, lb)
    if len(meet) == n:
        # both sequences are constant from position n - 1 on
        return None
    return meet


def coding_distance(a: Address, b: Address, r: RatioVector, depth_cap: int = 10_000) -> float:
    """``rho_r(a, b) = r_{a ^ b}``; 0 for identical addresses, 1 for an empty meet.

    Meets longer than ``depth_cap`` are truncated, which can only enlarge the value.
    """
    if depth_cap < 1:
        raise PreconditionError("depth_cap must be >= 1")
    meet = address_meet(a, b)
    if meet is None:
        return 0.0
    return r.product(meet[:depth_cap])


def address_point(system: IFSystem, address: Address, depth: int) -> tuple[np.ndarray, float]:
    """Approximate ``pi(address)`` as ``S_{address|depth}(hull centre)``.

    Returns the point and a radius within which the exact point lies.
    """
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    w = system.check_word(address.letters(depth))
    x = system.hull_center
    for i in reversed(w):
        x = system.maps[i - 1](x)
    ratio = _rounded_up_product(system.maps[i - 1].ratio for i in w)
    return x, ratio * system.hull_diameter


def system_from_dict(data: dict) -> IFSystem:
    """Build a system from the JSON descriptor layout ``{dim, maps, hull}``."""
    try:
        dim = int(data["dim"])
        maps = []
        for k, spec in enumerate(data["maps"], start=1):
            a = np.asarray(spec["matrix"], dtype=float).reshape(dim, dim)
            b = np.asarray(spec["offset"], dtype=float).reshape(dim)
            maps.append(AffineMap(a, b, ratio=spec.get("ratio")))
        hull = data["hull"]
        lo = np.asarray(hull["lo"], dtype=float).reshape(dim)
        hi = np.asarray(hull["hi"], dtype=float).reshape(dim)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed system descriptor: {exc!r}") from exc
    return IFSystem(tuple(maps), lo, hi)


def system_to_dict(system: IFSystem) -> dict:
    return {
        "dim": system.dim,
        "maps": [{"matrix": f.matrix.tolist(), "offset": f.offset.tolist()} for f in system.maps],
        "hull": {"lo": system.hull_lo.tolist(), "hi": system.hull_hi.tolist()},
    }


def similarity_system(ratios: Sequence[float], offsets: Sequence[float], hull=(0.0, 1.0)) -> IFSystem:
    """1-D system ``x -> r_i x + b_i``; a small convenience for tests and demos."""
    maps = tuple(AffineMap([[r]], [b]) for r, b in zip(ratios, offsets))
    return IFSystem(maps, [hull[0]], [hull[1]])
