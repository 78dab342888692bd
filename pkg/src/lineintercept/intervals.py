"""Closed intervals and finite unions of them on the generator segment.

A :class:`Region` is kept in canonical form: sorted, pairwise disjoint
intervals of positive length. Endpoints closer than ``snap`` are merged, and
zero-length pieces are dropped, so a region that is a single point compares
equal to the empty region (it carries no probability mass).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DomainError

SNAP_REL = 1e-12


@dataclass(frozen=True, order=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DomainError(f"interval with lo={self.lo} > hi={self.hi}")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi


def _canonical(pairs: Iterable[Sequence[float]], snap: float) -> tuple[Interval, ...]:
    items = sorted((float(lo), float(hi)) for lo, hi in pairs if hi - lo > snap)
    out: list[list[float]] = []
    for lo, hi in items:
        if out and lo <= out[-1][1] + snap:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return tuple(Interval(lo, hi) for lo, hi in out)


class Region:
    """Finite union of closed subintervals of ``[0, width]``."""

    __slots__ = ("width", "intervals", "_snap")

    def __init__(self, width: float, intervals: Iterable[Sequence[float]] = ()):
        if not width > 0:
            raise DomainError(f"width must be positive, got {width}")
        self.width = float(width)
        self._snap = SNAP_REL * self.width
        clipped = []
        for lo, hi in intervals:
            if lo > hi:
                raise DomainError(f"interval with lo={lo} > hi={hi}")
            lo, hi = max(lo, 0.0), min(hi, self.width)
            # endpoints within snap of the segment ends are pinned to them
            if lo <= self._snap:
                lo = 0.0
            if hi >= self.width - self._snap:
                hi = self.width
            if lo < hi:
                clipped.append((lo, hi))
        self.intervals = _canonical(clipped, self._snap)

    @classmethod
    def full(cls, width: float) -> "Region":
        return cls(width, [(0.0, width)])

    @classmethod
    def empty(cls, width: float) -> "Region":
        return cls(width)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return self.width == other.width and self.intervals == other.intervals

    def __repr__(self) -> str:
        body = ", ".join(f"[{iv.lo:.6g}, {iv.hi:.6g}]" for iv in self.intervals)
        return f"Region({body or 'empty'})"

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def length(self) -> float:
        return float(sum(iv.length for iv in self.intervals))

    @property
    def n_components(self) -> int:
        return len(self.intervals)

    def as_pairs(self) -> list[list[float]]:
        return [[iv.lo, iv.hi] for iv in self.intervals]

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(iv.lo - tol <= x <= iv.hi + tol for iv in self.intervals)

    def intersect(self, other: "Region") -> "Region":
        out = []
        a, b = self.intervals, other.intervals
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i].lo, b[j].lo)
            hi = min(a[i].hi, b[j].hi)
            if lo < hi:
                out.append((lo, hi))
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return Region(self.width, out)

    def union(self, other: "Region") -> "Region":
        return Region(self.width, [*self.as_pairs(), *other.as_pairs()])

    def complement(self) -> "Region":
        """Closure of ``[0, width]`` minus this region."""
        out, cursor = [], 0.0
        for iv in self.intervals:
            if iv.lo > cursor:
                out.append((cursor, iv.lo))
            cursor = iv.hi
        if cursor < self.width:
            out.append((cursor, self.width))
        return Region(self.width, out)

    def breakpoints(self) -> list[float]:
        return [x for iv in self.intervals for x in (iv.lo, iv.hi)]

    def distance_to(self, x: float) -> float:
        if not self.intervals:
            return math.inf
        return min(0.0 if iv.lo <= x <= iv.hi else min(abs(x - iv.lo), abs(x - iv.hi))
                   for iv in self.intervals)


def as_region(width: float, r) -> Region:
    """Coerce ``None`` / Interval / (lo, hi) / Region into a Region."""
    if r is None:
        return Region.full(width)
    if isinstance(r, Region):
        return r
    if isinstance(r, Interval):
        return Region(width, [(r.lo, r.hi)])
    lo, hi = r
    return Region(width, [(lo, hi)])
