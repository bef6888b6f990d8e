"""Sound disjointness checks for attractor pieces, SSC checks and parameter sweeps.

Pieces are covered by outward-rounded boxes ``S_w(hull)``.  A pair of pieces
is reported ``Disjoint`` only when every pair of covering boxes in a finite
refinement is separated by a positive distance; otherwise the verdict is
``Undecided``.  Intersections are never claimed.
"""
from __future__ import annotations

import heapq
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .families import FamilyDescriptor
from .ifs import IFSystem, word_meet
from .intervals import box_diameter, box_gap, pad_amount

DISJOINT = "Disjoint"
UNDECIDED = "Undecided"

DEFAULT_MAX_PAIRS = 200_000


@dataclass
class SeparationVerdict:
    status: str
    gap: float = 0.0
    overlap_diameter: float = 0.0
    depth_used: int = 0
    # why an Undecided search stopped: "tolerance", "depth" or "budget"
    reason: str = ""
    pairs_examined: int = 0

    @property
    def disjoint(self) -> bool:
        return self.status == DISJOINT

    def to_dict(self) -> dict:
        return {
            "status": self.status, "gap": self.gap, "overlap_diameter": self.overlap_diameter,
            "depth_used": self.depth_used, "reason": self.reason, "pairs_examined": self.pairs_examined,
        }


def check_pair_disjoint(system: IFSystem, j: Sequence[int], k: Sequence[int], tol: float = 1e-9,
                        max_depth: int = 30, max_pairs: int = DEFAULT_MAX_PAIRS) -> SeparationVerdict:
    """Branch and bound on box covers of ``K_j`` and ``K_k``.

    Pairs are refined largest-first; the larger box of a pair is split (both on a
    tie), so the refinement tree does not depend on the order of ``j`` and ``k``.
    """
    j, k = system.check_word(j), system.check_word(k)
    if not word_meet(j, k)[1]:
        raise PreconditionError(f"words {list(j)} and {list(k)} are comparable")
    if not tol > 0:
        raise DomainError("tol must be positive")
    m = system.m
    boxes: dict = {}

    def box(w):
        b = boxes.get(w)
        if b is None:
            lo, hi = system.word_box(w)
            b = boxes[w] = (lo, hi, box_diameter(lo, hi))
        return b

    base_j, base_k = len(j), len(k)
    heap = [(-(box(j)[2] + box(k)[2]), j, k)]
    gap = np.inf
    depth_used = 0
    examined = 0
    while heap:
        _, u, v = heapq.heappop(heap)
        examined += 1
        lu, hu, du = box(u)
        lv, hv, dv = box(v)
        level_u, level_v = len(u) - base_j, len(v) - base_k
        depth_used = max(depth_used, level_u, level_v)
        d = box_gap(lu, hu, lv, hv)
        if d > 0:
            gap = min(gap, d)
            continue
        split_u = du > tol and level_u < max_depth
        split_v = dv > tol and level_v < max_depth
        if not (split_u or split_v):
            reason = "tolerance" if max(du, dv) <= tol else "depth"
            return SeparationVerdict(UNDECIDED, 0.0, max(du, dv), depth_used, reason, examined)
        if examined >= max_pairs:
            return SeparationVerdict(UNDECIDED, 0.0, max(du, dv), depth_used, "budget", examined)
        if split_u and split_v:
            if du > dv:
                split_v = False
            elif dv > du:
                split_u = False
        us = [u + (i,) for i in range(1, m + 1)] if split_u else [u]
        vs = [v + (i,) for i in range(1, m + 1)] if split_v else [v]
        for cu, cv in itertools.product(us, vs):
            heapq.heappush(heap, (-(box(cu)[2] + box(cv)[2]), cu, cv))
    return SeparationVerdict(DISJOINT, float(gap), 0.0, depth_used, "", examined)


@dataclass
class SSCReport:
    holds: bool
    min_gap: float
    verdicts: dict

    def to_dict(self) -> dict:
        return {
            "holds": self.holds, "min_gap": self.min_gap,
            "pairs": [{"i": i, "j": j, **v.to_dict()} for (i, j), v in sorted(self.verdicts.items())],
        }


def check_ssc(system: IFSystem, tol: float = 1e-9, max_depth: int = 30,
              max_pairs: int = DEFAULT_MAX_PAIRS) -> SSCReport:
    """Pairwise first-level disjointness; SSC is certified only if every pair is Disjoint."""
    verdicts = {}
    for i, j in itertools.combinations(range(1, system.m + 1), 2):
        verdicts[(i, j)] = check_pair_disjoint(system, (i,), (j,), tol, max_depth, max_pairs)
    holds = all(v.disjoint for v in verdicts.values())
    min_gap = min(v.gap for v in verdicts.values()) if holds else 0.0
    return SSCReport(holds, min_gap, verdicts)


def piece_cover_contains(system: IFSystem, word: Sequence[int], point, depth: int) -> bool:
    """Whether ``point`` lies in one of the boxes ``S_{word u}(hull)``, ``|u| = depth``."""
    point = np.atleast_1d(np.asarray(point, dtype=float))
    word = system.check_word(word)
    stack = [word]
    target = len(word) + depth
    while stack:
        w = stack.pop()
        lo, hi = system.word_box(w)
        if np.any(point < lo) or np.any(point > hi):
            continue
        if len(w) == target:
            return True
        stack.extend(w + (i,) for i in range(system.m, 0, -1))
    return False


@dataclass
class CellResult:
    lo: np.ndarray
    hi: np.ndarray
    verdict: SeparationVerdict

    @property
    def status(self) -> str:
        return self.verdict.status


@dataclass
class SweepReport:
    grid: dict
    cells: list
    disjoint_fraction: float
    undecided_measure: float
    exceptional_cover: list = field(default_factory=list)

    @property
    def undecided_fraction(self) -> float:
        return 1.0 - self.disjoint_fraction

    def summary(self) -> dict:
        return {
            "grid": self.grid,
            "disjoint_fraction": self.disjoint_fraction,
            "undecided_fraction": self.undecided_fraction,
            "undecided_measure": self.undecided_measure,
            "exceptional_cover": [[list(map(float, lo)), list(map(float, hi))] for lo, hi in self.exceptional_cover],
        }

    def rows(self) -> list:
        """CSV rows ``cell_lo, cell_hi, status, gap_or_overlap, depth`` (first parameter axis)."""
        out = []
        for c in self.cells:
            v = c.verdict
            value = v.gap if v.disjoint else v.overlap_diameter
            lo = float(c.lo[0]) if len(c.lo) == 1 else ";".join(repr(float(x)) for x in c.lo)
            hi = float(c.hi[0]) if len(c.hi) == 1 else ";".join(repr(float(x)) for x in c.hi)
            out.append((lo, hi, v.status, float(value), v.depth_used))
        return out


def sweep_workers(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("GENPOS_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise DomainError(f"GENPOS_THREADS must be a positive integer, got {env!r}") from exc
        if n < 1:
            raise DomainError(f"GENPOS_THREADS must be a positive integer, got {env!r}")
        return n
    return 1


def _grid(fam: FamilyDescriptor, cells: int):
    lo, hi = fam.domain_lo, fam.domain_hi
    axes = []
    for a, b in zip(lo, hi):
        if b > a:
            edges = np.linspace(a, b, cells + 1)
            axes.append(list(zip(edges[:-1], edges[1:])))
        else:
            axes.append([(a, b)])
    for combo in itertools.product(*axes):
        yield np.array([c[0] for c in combo]), np.array([c[1] for c in combo])


def classify_cell(fam: FamilyDescriptor, pairs, lo, hi, tol: float, max_depth: int,
                  method: str = "center", max_pairs: int = DEFAULT_MAX_PAIRS) -> SeparationVerdict:
    """Verdict valid for every parameter of the cell ``[lo, hi]``.

    ``center``: check the cell centre, then demand that the gap exceed the worst
    motion of both pieces across the cell (the displacement bound, once per piece).
    ``interval``: check the interval-coefficient system covering the whole cell.
    Its boxes cannot shrink below the spread the cell induces, so the resolution
    is coarsened to the cell diameter.
    """
    if method == "center":
        centre = (lo + hi) / 2
        system = fam.at(centre)
        motion = 2 * fam.C * float(np.linalg.norm(hi - lo)) / 2 / (1 - fam.ratios.sbar)
        motion += pad_amount(motion, 2)
    elif method == "interval":
        system = fam.over(lo, hi)
        motion = 0.0
        tol = max(tol, float(np.linalg.norm(hi - lo)))
    else:
        raise DomainError(f"unknown sweep method {method!r}")
    worst = None
    for j, k in pairs:
        v = check_pair_disjoint(system, j, k, tol, max_depth, max_pairs)
        if v.disjoint and v.gap > motion:
            v = SeparationVerdict(DISJOINT, v.gap - motion, 0.0, v.depth_used, "", v.pairs_examined)
        elif v.disjoint:
            # certified at the centre, but the pieces may meet elsewhere in the cell
            v = SeparationVerdict(UNDECIDED, 0.0, motion, v.depth_used, "motion", v.pairs_examined)
        if not v.disjoint:
            return v
        if worst is None or v.gap < worst.gap:
            worst = v
    return worst


def exceptional_set_sweep(fam: FamilyDescriptor, j: Sequence[int] | None, k: Sequence[int] | None,
                          cells: int = 100, tol: float = 1e-9, max_depth: int = 30, *,
                          pairs=None, method: str = "center", workers: int | None = None,
                          max_pairs: int = DEFAULT_MAX_PAIRS) -> SweepReport:
    """Classify a uniform grid of parameter cells as Disjoint or Undecided.

    ``pairs`` replaces ``(j, k)`` by several word pairs; a cell is Disjoint only
    if all of them are.  Cells are independent and may be evaluated on a thread
    pool (``workers`` or ``GENPOS_THREADS``); results keep grid order.
    """
    if cells < 1:
        raise DomainError("cells must be >= 1")
    if pairs is None:
        pairs = [(tuple(j), tuple(k))]
    pairs = [(tuple(a), tuple(b)) for a, b in pairs]
    grid = list(_grid(fam, cells))

    def run(cell):
        lo, hi = cell
        return CellResult(lo, hi, classify_cell(fam, pairs, lo, hi, tol, max_depth, method, max_pairs))

    n_workers = sweep_workers(workers)
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(run, grid))
    else:
        results = [run(c) for c in grid]

    live = fam.domain_hi > fam.domain_lo
    disjoint = sum(1 for c in results if c.verdict.disjoint)
    undecided_measure = float(sum(np.prod((c.hi - c.lo)[live]) for c in results if not c.verdict.disjoint))
    return SweepReport(
        grid={"lo": fam.domain_lo.tolist(), "hi": fam.domain_hi.tolist(), "cells_per_axis": cells,
              "method": method, "pairs": [[list(a), list(b)] for a, b in pairs]},
        cells=results,
        disjoint_fraction=disjoint / len(results),
        undecided_measure=undecided_measure,
        exceptional_cover=_cover(results, fam.param_dim),
    )


def _cover(results, dim: int) -> list:
    bad = [(c.lo, c.hi) for c in results if not c.verdict.disjoint]
    if dim != 1:
        return bad
    merged = []
    for lo, hi in bad:
        if merged and lo[0] <= merged[-1][1][0]:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged
