"""Expected cost of a single vehicle and its minimisation.

All costs share the form ``a*sqrt(b*(X-x)**2 + Y**2) - c*Y``. The constrained
travel time and the adversarial vertical height are two coefficient choices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .density import Density, centroid_and_spread
from .errors import DomainError, SingularityError
from .intervals import as_region

__all__ = [
    "CostCoeffs",
    "VehiclePos",
    "GameParams",
    "DescentResult",
    "time_coeffs",
    "height_coeffs",
    "constrained_time",
    "generic_cost",
    "expected_cost",
    "expected_cost_gradient",
    "optimize_single",
    "equal_speed_optimum",
]


@dataclass(frozen=True)
class CostCoeffs:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.c >= 0):
            raise DomainError(f"need a > 0, b > 0, c >= 0; got {self}")
        if not self.a > self.c:
            raise DomainError(f"need a > c; got a={self.a}, c={self.c}")


@dataclass(frozen=True)
class VehiclePos:
    X: float
    Y: float

    def __post_init__(self):
        if not (math.isfinite(self.X) and math.isfinite(self.Y)):
            raise DomainError(f"non-finite position ({self.X}, {self.Y})")
        if self.Y < 0:
            raise DomainError(f"vehicle below the generator: Y={self.Y}")

    def __iter__(self):
        yield self.X
        yield self.Y

    def __getitem__(self, i):
        return (self.X, self.Y)[i]

    def __len__(self):
        return 2

    def dist(self, other) -> float:
        ox, oy = other
        return math.hypot(self.X - ox, self.Y - oy)


@dataclass(frozen=True)
class GameParams:
    width: float
    target_speed: float

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError(f"width must be positive, got {self.width}")
        if not 0 < self.target_speed < 1:
            raise DomainError(f"target_speed must lie in (0, 1), got {self.target_speed}")

    @property
    def time_coeffs(self) -> CostCoeffs:
        return time_coeffs(self.target_speed)

    @property
    def height_coeffs(self) -> CostCoeffs:
        return height_coeffs(self.target_speed)


def time_coeffs(v: float) -> CostCoeffs:
    """Coefficients turning the generic cost into the constrained travel time."""
    if not 0 <= v < 1:
        raise DomainError(f"target speed must lie in [0, 1), got {v}")
    s = 1.0 - v * v
    return CostCoeffs(1.0 / s, s, v / s)


def height_coeffs(v: float) -> CostCoeffs:
    """Coefficients turning the generic cost into the optimal vertical height."""
    if not 0 < v < 1:
        raise DomainError(f"target speed must lie in (0, 1), got {v}")
    s = 1.0 - v * v
    return CostCoeffs(v / s, 1.0, v * v / s)


def _speed(g) -> float:
    return g.target_speed if isinstance(g, GameParams) else float(g)


def generic_cost(p, x, k: CostCoeffs):
    X, Y = p
    dx = np.asarray(x, dtype=float) - X
    out = k.a * np.sqrt(k.b * dx * dx + Y * Y) - k.c * Y
    return float(out) if out.ndim == 0 else out


def constrained_time(p, x, g):
    """Time for a unit-speed vehicle at ``p`` to catch a target leaving ``(x, 0)``
    straight up at speed ``v``. ``g`` is a :class:`GameParams` or the speed."""
    return generic_cost(p, x, time_coeffs(_speed(g)))


def expected_cost(p, k: CostCoeffs, d: Density, region=None) -> float:
    lo, hi, s0, s1 = d.panels(region)
    X, Y = p
    return float(kernels.cost_and_gradient(float(X), float(Y), k.a, k.b, k.c, lo, hi, s0, s1)[0])


def expected_cost_gradient(p, k: CostCoeffs, d: Density, region=None) -> tuple[float, float]:
    """Partial derivatives of the expected cost in ``X`` and ``Y``.

    Restricting to ``region`` gives the per-region gradient used by the
    multi-vehicle descent; the constant term is then ``-c`` times the
    region's probability mass.
    """
    X, Y = float(p[0]), float(p[1])
    reg = as_region(d.width, region)
    if Y <= 0 and reg.contains(X):
        raise SingularityError(f"gradient undefined at Y={Y} with X={X} inside the integration region")
    lo, hi, s0, s1 = d.panels(reg)
    _, gx, gy = kernels.cost_and_gradient(X, Y, k.a, k.b, k.c, lo, hi, s0, s1)
    return float(gx), float(gy)


@dataclass
class DescentResult:
    optimum: VehiclePos
    cost: float
    grad_norm: float
    iterations: int
    converged: bool
    trace: list = field(default_factory=list, repr=False)


def optimize_single(start, k: CostCoeffs, d: Density, tol: float = 1e-8, max_iter: int = 10000,
                    region=None, keep_trace: bool = True) -> DescentResult:
    """Steepest descent with Armijo backtracking on the expected cost.

    Steps that would put ``Y <= 0`` or carry ``X`` out of ``[0, W]`` (from
    inside) are shrunk. When the Armijo decrease falls below the rounding
    level of the cost, a step is accepted if the cost did not rise beyond
    rounding and the slope along the step has not overshot.
    """
    X, Y = float(start[0]), float(start[1])
    if not Y > 0:
        raise DomainError(f"start must have Y > 0, got Y={Y}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    W = d.width
    lo, hi, s0, s1 = d.panels(region)

    def evaluate(x, y):
        return kernels.cost_and_gradient(x, y, k.a, k.b, k.c, lo, hi, s0, s1)

    f, gx, gy = evaluate(X, Y)
    trace = [(VehiclePos(X, Y), f)] if keep_trace else []
    inside = 0.0 <= X <= W
    it = 0
    gnorm = math.hypot(gx, gy)
    while gnorm >= tol and it < max_iter:
        slope = -(gx * gx + gy * gy)
        alpha = 1.0
        accepted = False
        for _ in range(200):
            nx, ny = X - alpha * gx, Y - alpha * gy
            if ny > 0 and (not inside or 0.0 <= nx <= W):
                nf, ngx, ngy = evaluate(nx, ny)
                if nf <= f + 1e-4 * alpha * slope:
                    accepted = True
                elif nf - f <= 1e-14 * max(1.0, abs(f)):
                    # cost change is below rounding; fall back to the slope test
                    accepted = -(ngx * gx + ngy * gy) <= -0.8 * slope
                if accepted:
                    break
            alpha *= 0.5
        if not accepted:
            break
        X, Y, f, gx, gy = nx, ny, nf, ngx, ngy
        gnorm = math.hypot(gx, gy)
        it += 1
        if keep_trace:
            trace.append((VehiclePos(X, Y), f))
    return DescentResult(VehiclePos(X, Y), f, gnorm, it, gnorm < tol, trace)


def equal_speed_optimum(d: Density) -> VehiclePos:
    """Placement that minimises expected time in the limit of equal speeds:
    the density's mean and standard deviation."""
    x, y = centroid_and_spread(d)
    return VehiclePos(float(x), float(y))
