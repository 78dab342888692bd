"""Arrival density on the generator segment ``[0, W]``.

Densities are continuous and piecewise linear. Quadrature splits the domain
into panels at density breakpoints and region boundaries and applies a
20-point Gauss-Legendre rule per panel; a panel whose one-rule and
two-half-rule estimates disagree is bisected recursively.
"""
from __future__ import annotations

import math
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .intervals import Interval, Region, as_region

__all__ = [
    "Density",
    "Interval",
    "uniform",
    "ramp_density",
    "triangle",
    "evaluate",
    "integrate",
    "centroid_and_spread",
    "median",
    "GL_ORDER",
]

GL_ORDER = 20
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)
_ADAPT_TOL = 1e-10
_ADAPT_DEPTH = 40


class Density:
    """Continuous piecewise-linear probability density on ``[0, width]``.

    ``breakpoints`` is a sequence of ``(x, value)`` pairs, strictly increasing
    in ``x``, starting at 0 and ending at ``width``. Values are rescaled so
    the density integrates to one.
    """

    def __init__(self, width: float, breakpoints: Sequence[Sequence[float]]):
        width = float(width)
        if not (width > 0 and math.isfinite(width)):
            raise DomainError(f"width must be positive and finite, got {width}")
        pts = np.asarray(breakpoints, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise DomainError("breakpoints must be at least two (x, value) pairs")
        xs, vs = pts[:, 0].copy(), pts[:, 1].copy()
        if np.any(np.diff(xs) <= 0):
            raise DomainError("breakpoint abscissae must be strictly increasing")
        if abs(xs[0]) > 1e-12 * width or abs(xs[-1] - width) > 1e-12 * width:
            raise DomainError(f"breakpoints must span [0, {width}], got [{xs[0]}, {xs[-1]}]")
        if np.any(vs < 0) or not np.all(np.isfinite(vs)):
            raise DomainError("density values must be finite and non-negative")
        xs[0], xs[-1] = 0.0, width
        mass = float(np.sum(0.5 * (vs[1:] + vs[:-1]) * np.diff(xs)))
        if not mass > 0:
            raise DomainError("density has no support")
        self.width = width
        self.xs = xs
        self.values = vs / mass
        self.xs.setflags(write=False)
        self.values.setflags(write=False)

    def __repr__(self):
        pts = ", ".join(f"({x:g}, {v:g})" for x, v in zip(self.xs, self.values))
        return f"Density(width={self.width:g}, [{pts}])"

    @property
    def bound(self) -> float:
        return float(self.values.max())

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.values.tolist()))

    @cached_property
    def _slopes(self):
        return np.diff(self.values) / np.diff(self.xs)

    @cached_property
    def lipschitz(self) -> float:
        return float(np.abs(self._slopes).max())

    @cached_property
    def _cdf_knots(self):
        seg = 0.5 * (self.values[1:] + self.values[:-1]) * np.diff(self.xs)
        return np.concatenate([[0.0], np.cumsum(seg)])

    def __call__(self, x):
        return evaluate(self, x)

    def cdf(self, x: float) -> float:
        x = _check_point(self, x)
        k = min(int(np.searchsorted(self.xs, x, side="right")) - 1, len(self.xs) - 2)
        u = x - self.xs[k]
        return float(self._cdf_knots[k] + self.values[k] * u + 0.5 * self._slopes[k] * u * u)

    def panels(self, region=None):
        """Split ``region`` at density breakpoints.

        Returns arrays ``(lo, hi, s0, s1)`` such that the density equals
        ``s0 + s1 * x`` on ``[lo[k], hi[k]]``.
        """
        reg = as_region(self.width, region)
        los, his, s0, s1 = [], [], [], []
        for iv in reg:
            ka = int(np.searchsorted(self.xs, iv.lo, side="right")) - 1
            ka = min(max(ka, 0), len(self.xs) - 2)
            cuts = [iv.lo, *[x for x in self.xs[ka + 1:-1] if iv.lo < x < iv.hi], iv.hi]
            for a, b in zip(cuts[:-1], cuts[1:]):
                k = min(int(np.searchsorted(self.xs, 0.5 * (a + b), side="right")) - 1,
                        len(self.xs) - 2)
                slope = self._slopes[k]
                los.append(a)
                his.append(b)
                s0.append(self.values[k] - slope * self.xs[k])
                s1.append(slope)
        return (np.array(los, dtype=float), np.array(his, dtype=float),
                np.array(s0, dtype=float), np.array(s1, dtype=float))


def uniform(width: float = 1.0) -> Density:
    return Density(width, [(0.0, 1.0), (width, 1.0)])


def ramp_density(width: float = 1.0) -> Density:
    """Ramp up to ``2/W`` at ``W/4`` then linearly down to zero at ``W``."""
    return Density(width, [(0.0, 0.0), (width / 4, 2.0 / width), (width, 0.0)])


def triangle(width: float, peak: float, half_base: float) -> Density:
    """Narrow triangular bump centred at ``peak`` (clipped to the segment)."""
    lo, hi = peak - half_base, peak + half_base
    if not (0.0 < lo and hi < width):
        raise DomainError("triangle must lie strictly inside the segment")
    return Density(width, [(0.0, 0.0), (lo, 0.0), (peak, 1.0), (hi, 0.0), (width, 0.0)])


def _check_point(d: Density, x):
    x = float(x)
    if not (-1e-12 * d.width <= x <= d.width * (1 + 1e-12)):
        raise DomainError(f"x={x} outside [0, {d.width}]")
    return min(max(x, 0.0), d.width)


def evaluate(d: Density, x):
    """Density value at ``x`` (scalar or array), by linear interpolation."""
    arr = np.asarray(x, dtype=float)
    tol = 1e-12 * d.width
    if np.any(arr < -tol) or np.any(arr > d.width + tol):
        raise DomainError(f"x outside [0, {d.width}]")
    out = np.interp(arr, d.xs, d.values)
    return float(out) if out.ndim == 0 else out


def _gl(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _GL_NODES
    return half * float(np.dot(_GL_WEIGHTS, f(x)))


def _adaptive(f, a, b, whole, depth):
    m = 0.5 * (a + b)
    left, right = _gl(f, a, m), _gl(f, m, b)
    if abs(left + right - whole) <= _ADAPT_TOL or depth >= _ADAPT_DEPTH:
        return left + right
    return _adaptive(f, a, m, left, depth + 1) + _adaptive(f, m, b, right, depth + 1)


def integrate(d: Density, r=None, f: Callable | None = None, splits: Sequence[float] = ()) -> float:
    """Integrate ``f(x) * phi(x)`` over region ``r`` (default: whole segment).

    ``f`` must accept a numpy array of abscissae. ``splits`` are extra panel
    cut points, e.g. where ``f`` has a kink.
    """
    lo, hi, s0, s1 = d.panels(r)
    total = 0.0
    cuts = sorted(float(s) for s in splits)
    for a0, b0, c0, c1 in zip(lo, hi, s0, s1):
        if f is None:
            def g(x, c0=c0, c1=c1):
                return c0 + c1 * x
        else:
            def g(x, c0=c0, c1=c1):
                return np.asarray(f(x), dtype=float) * (c0 + c1 * x)
        edges = [a0, *[s for s in cuts if a0 < s < b0], b0]
        for a, b in zip(edges[:-1], edges[1:]):
            total += _adaptive(g, a, b, _gl(g, a, b), 0)
    return float(total)


def centroid_and_spread(d: Density) -> tuple[float, float]:
    """Mean and standard deviation of the density."""
    mean = integrate(d, None, lambda x: x)
    var = integrate(d, None, lambda x: (x - mean) ** 2)
    return float(mean), math.sqrt(max(var, 0.0))


def median(d: Density) -> float:
    """Abscissa where the CDF equals one half."""
    knots = d._cdf_knots
    k = int(np.searchsorted(knots, 0.5, side="left")) - 1
    k = min(max(k, 0), len(d.xs) - 2)
    a, b = d.xs[k], d.xs[k + 1]
    # CDF is quadratic and non-decreasing on this panel; bracket is exact
    return float(brentq(lambda x: d.cdf(x) - 0.5, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps))
