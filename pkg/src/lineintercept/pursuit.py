"""Pursuit-evasion geometry for a unit-speed pursuer and a slower evader.

The evader's optimal play is a straight run toward a point of the Apollonius
circle drawn at the start: the top-most point when it maximises the capture
height, the X-axis point farthest from it when it maximises the capture time
while staying above the axis. ``simulate_pursuit`` integrates both players
forward in time and serves as an independent check on the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import Density, integrate
from .errors import DegenerateGeometryError, DomainError, InfeasibleError, InvariantViolation
from .single_vehicle import generic_cost, height_coeffs

__all__ = [
    "ApolloniusCircle",
    "PursuitTrace",
    "apollonius",
    "evader_target_height",
    "evader_target_wall",
    "vertical_height",
    "intercept_time",
    "intercept_time_pythagorean",
    "simulate_pursuit",
    "classify_two_pursuer",
    "expected_intercept_time",
    "on_axis_intercept_scan",
]

MIN_WALL_SPEED = 1e-9


def _check_speed(v, lo=0.0):
    if not (0 < v < 1 and v >= lo):
        raise DomainError(f"evader speed must lie in (0, 1) and be >= {lo}, got {v}")


def _xy(q):
    if np.ndim(q) == 0:
        return float(q), 0.0
    return float(q[0]), float(q[1])


@dataclass(frozen=True)
class ApolloniusCircle:
    center: tuple[float, float]
    radius: float

    def points(self, n: int = 64) -> np.ndarray:
        t = 2 * np.pi * np.arange(n) / n
        return np.column_stack([self.center[0] + self.radius * np.cos(t),
                                self.center[1] + self.radius * np.sin(t)])

    def contains(self, other: "ApolloniusCircle", tol: float = 0.0) -> bool:
        gap = math.hypot(self.center[0] - other.center[0], self.center[1] - other.center[1])
        return gap + other.radius <= self.radius + tol


def apollonius(p, q, v: float) -> ApolloniusCircle:
    """Points reachable by the evader at ``q`` no later than the pursuer at ``p``.

    ``q`` is either a generator abscissa or a planar point.
    """
    _check_speed(v)
    X, Y = float(p[0]), float(p[1])
    qx, qy = _xy(q)
    d = math.hypot(X - qx, Y - qy)
    if d == 0:
        raise DegenerateGeometryError("pursuer and evader coincide")
    s = 1.0 - v * v
    return ApolloniusCircle(((qx - v * v * X) / s, (qy - v * v * Y) / s), v * d / s)


def evader_target_height(p, q, v: float) -> tuple[float, float]:
    c = apollonius(p, q, v)
    return c.center[0], c.center[1] + c.radius


def vertical_height(p, x, v: float):
    """Height above the generator at which the evader starting at ``(x, 0)``
    is caught under optimal play by both sides."""
    _check_speed(v)
    return generic_cost(p, x, height_coeffs(v))


def evader_target_wall(p, q, v: float) -> tuple[float, float]:
    """Intersection of the Apollonius circle with the X-axis farthest from ``q``.

    When both intersections are equally far (pursuer straight above the
    evader) the one at larger X is returned.
    """
    _check_speed(v, MIN_WALL_SPEED)
    X, Y = float(p[0]), float(p[1])
    qx, qy = _xy(q)
    if qy != 0.0:
        raise DomainError("wall pursuit starts with the evader on the X-axis")
    c = apollonius(p, q, v)
    s = 1.0 - v * v
    half_chord = v / s * math.sqrt((X - qx) ** 2 + s * Y * Y)
    offset = c.center[0] - qx
    sign = -1.0 if offset < -1e-15 * max(1.0, abs(qx)) else 1.0
    return c.center[0] + sign * half_chord, 0.0


def intercept_time(p, x, v: float):
    """Capture time when the evader at ``(x, 0)`` runs to the far X-axis point
    of the Apollonius circle.

    The capture point ``F`` lies on the circle, so the evader needs
    ``|F - q| / v``; both the center offset and the half chord are explicit.
    """
    _check_speed(v, MIN_WALL_SPEED)
    X, Y = float(p[0]), float(p[1])
    u = np.abs(np.asarray(x, dtype=float) - X)
    s = 1.0 - v * v
    out = (v * u + np.sqrt(u * u + s * Y * Y)) / s
    return float(out) if out.ndim == 0 else out


def intercept_time_pythagorean(p, x, v: float) -> float:
    """Alternative closed form ``sqrt(R^2 - (vY/(1-v))^2)/v + |(x-vX)/(1-v) - x|/v``.

    Kept for comparison with :func:`intercept_time`. It agrees with the
    capture kinematics only in degenerate cases; its radicand turns negative
    when the pursuer is nearly above the evader, which raises
    :class:`InfeasibleError`.
    """
    _check_speed(v, MIN_WALL_SPEED)
    X, Y = float(p[0]), float(p[1])
    x = float(x)
    if X == x and Y == 0:
        return 0.0
    R = apollonius(p, x, v).radius
    rad = R * R - (v * Y / (1 - v)) ** 2
    if rad < 0:
        if rad < -1e-12:
            raise InfeasibleError(
                f"negative radicand {rad:.6g} for p=({X}, {Y}), x={x}, v={v}")
        rad = 0.0
    return math.sqrt(rad) / v + abs((x - v * X) / (1 - v) - x) / v


@dataclass
class PursuitTrace:
    dt: float
    t: np.ndarray
    pursuer: np.ndarray
    evader: np.ndarray
    captured: bool
    capture_time: float
    capture_point: tuple[float, float]
    evader_goal: tuple[float, float]
    strategy: str

    def rows(self):
        return np.column_stack([self.t, self.pursuer, self.evader])


def simulate_pursuit(p0, x0: float, v: float, strategy: str = "height", dt: float = 1e-4,
                     capture_radius: float | None = None) -> PursuitTrace:
    """Forward-Euler pursuit with a fixed evader heading and a parallel-navigation pursuer.

    The pursuer cancels the evader's velocity across the initial line of
    sight and spends the rest of its unit speed closing along it, so the line
    of sight never rotates. The run stops when the separation drops to
    ``capture_radius`` (default ``2*dt``); the reported capture time and
    point extrapolate the last step linearly to zero separation.
    """
    if strategy not in ("height", "wall"):
        raise DomainError(f"unknown strategy {strategy!r}")
    if not dt > 0:
        raise DomainError("dt must be positive")
    capture_radius = 2 * dt if capture_radius is None else float(capture_radius)
    if capture_radius < dt:
        raise DomainError("capture_radius must be at least dt")
    _check_speed(v, MIN_WALL_SPEED if strategy == "wall" else 0.0)
    p = np.array([float(p0[0]), float(p0[1])])
    q = np.array([float(x0), 0.0])
    sep0 = float(np.linalg.norm(q - p))
    if sep0 == 0:
        raise DegenerateGeometryError("pursuer starts on the evader")
    goal = evader_target_height(p, q, v) if strategy == "height" else evader_target_wall(p, q, v)
    heading = np.array(goal) - q
    ve = v * heading / np.linalg.norm(heading)
    los = (q - p) / sep0
    across = ve - np.dot(ve, los) * los
    vp = across + math.sqrt(max(0.0, 1.0 - float(np.dot(across, across)))) * los

    t_cap = 10.0 * sep0 / (1.0 - v)
    n = int(math.ceil(t_cap / dt)) + 1
    steps = np.arange(n, dtype=float)[:, None]
    # Euler increments are constant: both velocities are fixed for the whole run
    P = p + steps * (dt * vp)
    E = q + steps * (dt * ve)
    sep = np.linalg.norm(E - P, axis=1)
    hit = np.flatnonzero(sep <= capture_radius)
    if hit.size == 0:
        return PursuitTrace(dt, steps[:, 0] * dt, P, E, False, math.nan, (math.nan, math.nan),
                            tuple(goal), strategy)
    k = int(hit[0])
    closing = float(np.dot(vp - ve, los))
    if closing <= 0:
        raise InvariantViolation("pursuer is not closing on the evader")
    tc = k * dt + sep[k] / closing
    point = q + tc * ve
    return PursuitTrace(dt, steps[: k + 1, 0] * dt, P[: k + 1], E[: k + 1], True, float(tc),
                        (float(point[0]), float(point[1])), tuple(goal), strategy)


def classify_two_pursuer(q, p1, p2, v: float) -> str:
    """Which pursuer(s) must move against an evader appearing at ``q``.

    ``"V1"`` when pursuer 1's Apollonius disc lies inside pursuer 2's (pursuer
    1 alone moves), ``"V2"`` for the converse, ``"V12"`` otherwise.
    """
    if math.hypot(p1[0] - p2[0], p1[1] - p2[1]) == 0:
        raise DegenerateGeometryError("pursuers coincide")
    c1, c2 = apollonius(p1, q, v), apollonius(p2, q, v)
    if c2.contains(c1):
        return "V1"
    if c1.contains(c2):
        return "V2"
    return "V12"


def expected_intercept_time(p, d: Density, v: float) -> float:
    """Capture time of :func:`intercept_time` averaged over the arrival density."""
    return integrate(d, None, lambda x: intercept_time(p, x, v), splits=[float(p[0])])


def on_axis_intercept_scan(d: Density, v: float, step: float = 1e-3):
    """Expected capture time for pursuers parked on the generator, on an X-grid.

    Returns ``(xs, values)``; the minimiser over the grid approximates the
    best on-axis placement without using the median.
    """
    n = int(round(d.width / step))
    xs = np.linspace(0.0, d.width, n + 1)
    return xs, np.array([expected_intercept_time((x, 0.0), d, v) for x in xs])
