"""Dominance regions of the generator under the constrained travel time.

For two vehicles the boundary of the set where one is faster is found on the
perpendicular bisector of the pair: a boundary abscissa ``x`` is one whose
interception point ``(x, y)`` is equidistant from both vehicles, with
``y = v * distance``. That gives a quadratic in the signed offset along the
bisector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentVehiclesError, InvariantViolation
from .intervals import Region
from .single_vehicle import GameParams, constrained_time

__all__ = [
    "Partition",
    "pairwise_dominance",
    "dominance_partition",
    "region_hausdorff",
    "dominance_boundary_scan",
]

DISC_CLAMP = 1e-12
SCAN_STEP_REL = 1e-6


def _quadratic_roots(A, B, C):
    """Real roots of ``A*l**2 + B*l + C``; linear when ``A`` vanishes."""
    scale = max(abs(A), abs(B), abs(C), 1e-300)
    if abs(A) <= 1e-14 * scale:
        if abs(B) <= 1e-14 * scale:
            return None
        return [-C / B]
    disc = B * B - 4 * A * C
    if disc < 0:
        if disc < -DISC_CLAMP * max(B * B, abs(4 * A * C), 1.0):
            raise InvariantViolation(f"complex boundary roots: discriminant {disc:.3g}")
        disc = 0.0
    sq = math.sqrt(disc)
    q = -0.5 * (B + math.copysign(sq, B))
    if q == 0:
        return [0.0, 0.0]
    return [q / A, C / q]


def dominance_boundary_scan(pi, pj, g: GameParams, step: float | None = None) -> Region:
    """Brute-force ``{x : T(pi, x) <= T(pj, x)}`` on a grid of spacing ``step``."""
    W = g.width
    step = step or W * SCAN_STEP_REL
    n = int(round(W / step))
    xs = np.linspace(0.0, W, n + 1)
    win = constrained_time(pi, xs, g) <= constrained_time(pj, xs, g)
    edges = np.flatnonzero(np.diff(win.astype(np.int8)))
    pieces, start = [], 0.0 if win[0] else None
    for e in edges:
        if start is None:
            start = 0.5 * (xs[e] + xs[e + 1])
        else:
            pieces.append((start, 0.5 * (xs[e] + xs[e + 1])))
            start = None
    if start is not None:
        pieces.append((start, W))
    return Region(W, pieces)


def pairwise_dominance(pi, pj, g: GameParams) -> Region:
    """Abscissae where a vehicle at ``pi`` intercepts no later than one at ``pj``."""
    Xi, Yi = float(pi[0]), float(pi[1])
    Xj, Yj = float(pj[0]), float(pj[1])
    W, v = g.width, g.target_speed
    if Xi == Xj and Yi == Yj:
        raise CoincidentVehiclesError("i", "j", f"coincident vehicles at ({Xi}, {Yi})")
    xm, ym = 0.5 * (Xi + Xj), 0.5 * (Yi + Yj)
    if Yi == Yj:
        return Region(W, [(0.0, xm)] if Xi < Xj else [(xm, W)])

    # bisector direction at angle atan2(Yj-Yi, Xj-Xi) + pi/2, taken without trig
    # so that vertically stacked pairs give an exactly vertical chord
    d2 = (Xi - Xj) ** 2 + (Yi - Yj) ** 2
    dist = math.sqrt(d2)
    s, c = (Xj - Xi) / dist, -(Yj - Yi) / dist
    ysum = Yi + Yj
    roots = _quadratic_roots(4 * (s * s - v * v), 4 * ysum * s, ysum * ysum - v * v * d2)
    if roots is None:
        return dominance_boundary_scan(pi, pj, g)
    cands = [(ym + s * l, xm + c * l) for l in roots]
    positive = [x for y, x in cands if y > 0]
    if not positive:
        raise InvariantViolation(
            f"no boundary candidate above the generator for p_i=({Xi}, {Yi}), p_j=({Xj}, {Yj})")
    if len(positive) == 2:
        x1, x2 = sorted(positive)
        if Yi < Yj:
            return Region(W, [(max(x1, 0.0), min(x2, W))] if x1 < W and x2 > 0 else [])
        return Region(W, [(0.0, min(max(x1, 0.0), W)), (max(min(x2, W), 0.0), W)])
    x = positive[0]
    if Xi < Xj:
        return Region(W, [(0.0, min(max(x, 0.0), W))])
    return Region(W, [(max(min(x, W), 0.0), W)])


@dataclass
class Partition:
    width: float
    regions: list[Region]

    def __len__(self):
        return len(self.regions)

    def __getitem__(self, i) -> Region:
        return self.regions[i]

    def owner(self, x: float) -> int:
        """Index of a vehicle whose region contains ``x`` (smallest index on ties)."""
        for i, r in enumerate(self.regions):
            if r.contains(x, tol=1e-12 * self.width):
                return i
        raise InvariantViolation(f"x={x} is not covered by the partition")

    def empty_flags(self) -> list[bool]:
        return [r.is_empty for r in self.regions]

    def to_json(self) -> list[dict]:
        return [{"vehicle": i, "intervals": r.as_pairs()} for i, r in enumerate(self.regions)]


def dominance_partition(ps, g: GameParams) -> Partition:
    """Dominance region of every vehicle: intersection of its pairwise regions.

    Each unordered pair is solved once; the reverse pairwise region is its
    closed complement, so the regions tile the segment exactly.
    """
    W = g.width
    m = len(ps)
    for i in range(m):
        for j in range(i + 1, m):
            if ps[i][0] == ps[j][0] and ps[i][1] == ps[j][1]:
                raise CoincidentVehiclesError(i, j)
    regions = [Region.full(W) for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            uij = pairwise_dominance(ps[i], ps[j], g)
            regions[i] = regions[i].intersect(uij)
            regions[j] = regions[j].intersect(uij.complement())
    return Partition(W, regions)


def _directed(a: Region, b: Region) -> float:
    gaps = [0.5 * (b.intervals[k].hi + b.intervals[k + 1].lo) for k in range(len(b) - 1)]
    cands = a.breakpoints() + [x for x in gaps if a.contains(x)]
    return max(b.distance_to(x) for x in cands)


def region_hausdorff(a: Region, b: Region) -> float:
    """Symmetric Hausdorff distance; ``inf`` when exactly one region is empty."""
    if a.is_empty and b.is_empty:
        return 0.0
    if a.is_empty or b.is_empty:
        return math.inf
    return max(_directed(a, b), _directed(b, a))
