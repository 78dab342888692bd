"""Multi-vehicle expected time and its Lloyd-type descent.

Each round snapshots the vehicle positions, computes the dominance
partition, and moves every vehicle for one unit of time: vehicles with an
empty region drop toward the generator, the others follow the saturated
gradient flow of the expected time over their region, frozen for the round.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .density import Density, integrate
from .errors import CoincidentVehiclesError, DomainError, PreconditionError
from .partition import Partition, dominance_partition
from .single_vehicle import (
    GameParams,
    VehiclePos,
    constrained_time,
    expected_cost,
    expected_cost_gradient,
    optimize_single,
    time_coeffs,
)

__all__ = [
    "Configuration",
    "RoundRecord",
    "LloydTrace",
    "CriticalReport",
    "expected_time_multi",
    "expected_time_direct",
    "region_gradient",
    "lloyd_round",
    "lloyd_descend",
    "is_critical",
    "instability_check",
]

COINCIDENCE_REL = 1e-9


@dataclass(frozen=True)
class Configuration:
    positions: tuple[VehiclePos, ...]
    params: GameParams

    def __init__(self, positions: Sequence, params: GameParams):
        pos = tuple(p if isinstance(p, VehiclePos) else VehiclePos(float(p[0]), float(p[1]))
                    for p in positions)
        if not pos:
            raise DomainError("configuration needs at least one vehicle")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "params", params)
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                if pos[i].X == pos[j].X and pos[i].Y == pos[j].Y:
                    raise CoincidentVehiclesError(i, j)

    def __len__(self):
        return len(self.positions)

    def as_array(self) -> np.ndarray:
        return np.array([[p.X, p.Y] for p in self.positions])

    def moved(self, i: int, dx: float = 0.0, dy: float = 0.0) -> "Configuration":
        pos = list(self.positions)
        pos[i] = VehiclePos(pos[i].X + dx, pos[i].Y + dy)
        return Configuration(pos, self.params)

    def min_separation(self) -> tuple[float, int, int]:
        best = (math.inf, -1, -1)
        for i in range(len(self)):
            for j in range(i + 1, len(self)):
                d = self.positions[i].dist(self.positions[j])
                if d < best[0]:
                    best = (d, i, j)
        return best


def _coeffs(c: Configuration):
    return time_coeffs(c.params.target_speed)


def expected_time_multi(c: Configuration, d: Density, partition: Partition | None = None) -> float:
    """Expected interception time, summed region by region."""
    part = partition or dominance_partition(c.positions, c.params)
    k = _coeffs(c)
    return sum(expected_cost(p, k, d, r) for p, r in zip(c.positions, part.regions) if r)


def expected_time_direct(c: Configuration, d: Density) -> float:
    """Expected interception time from adaptive quadrature of the pointwise minimum."""
    g = c.params

    def fastest(x):
        return np.min([constrained_time(p, x, g) for p in c.positions], axis=0)

    return integrate(d, None, fastest, splits=[p.X for p in c.positions])


def region_gradient(c: Configuration, i: int, d: Density,
                    partition: Partition | None = None) -> tuple[float, float]:
    """Gradient of the expected time in vehicle ``i``'s position.

    Only the integral over the vehicle's own region appears: boundary terms
    from neighbouring regions cancel because the interception time is
    continuous across boundaries.
    """
    part = partition or dominance_partition(c.positions, c.params)
    region = part[i]
    if region.is_empty:
        raise PreconditionError(f"vehicle {i} has an empty dominance region; gradient undefined")
    return expected_cost_gradient(c.positions[i], _coeffs(c), d, region)


def _grad_norms(c: Configuration, d: Density, part: Partition) -> list[float]:
    k = _coeffs(c)
    out = []
    for p, r in zip(c.positions, part.regions):
        if r.is_empty:
            out.append(math.nan)
            continue
        lo, hi, s0, s1 = d.panels(r)
        _, gx, gy = kernels.cost_and_gradient(p.X, p.Y, k.a, k.b, k.c, lo, hi, s0, s1)
        out.append(math.hypot(gx, gy))
    return out


def _advance(c: Configuration, d: Density, part: Partition, substeps: int) -> Configuration:
    k = _coeffs(c)
    new = []
    for p, r in zip(c.positions, part.regions):
        if r.is_empty:
            new.append(VehiclePos(p.X, p.Y - min(1.0, p.Y)))
            continue
        lo, hi, s0, s1 = d.panels(r)
        x, y = kernels.flow_round(p.X, p.Y, k.a, k.b, k.c, lo, hi, s0, s1, substeps)
        new.append(VehiclePos(float(x), max(float(y), 0.0)))
    W = c.params.width
    for i in range(len(new)):
        for j in range(i + 1, len(new)):
            if new[i].dist(new[j]) < COINCIDENCE_REL * W:
                raise CoincidentVehiclesError(
                    i, j, f"vehicles {i} and {j} became coincident at ({new[i].X}, {new[i].Y})")
    return Configuration(new, c.params)


def lloyd_round(c: Configuration, d: Density, substeps: int = 64) -> Configuration:
    """One synchronous unit-time round from a common position snapshot."""
    return _advance(c, d, dominance_partition(c.positions, c.params), substeps)


@dataclass
class RoundRecord:
    round: int
    positions: tuple[VehiclePos, ...]
    partition: Partition
    expected_time: float
    grad_norms: list[float]
    empty: list[bool]

    @property
    def region_lengths(self) -> list[float]:
        return [r.length for r in self.partition.regions]


@dataclass
class LloydTrace:
    params: GameParams
    records: list[RoundRecord] = field(default_factory=list)
    converged: bool = False
    recoveries: list[tuple[int, int]] = field(default_factory=list)
    oscillations: list[int] = field(default_factory=list)

    @property
    def final(self) -> Configuration:
        rec = self.records[-1]
        return Configuration(rec.positions, self.params)

    @property
    def expected_times(self) -> list[float]:
        return [r.expected_time for r in self.records]

    def ever_empty(self, i: int) -> bool:
        return any(r.empty[i] for r in self.records)


def lloyd_descend(c0: Configuration, d: Density, rounds: int = 500, tol: float = 1e-7,
                  substeps: int = 64, patience: int = 3) -> LloydTrace:
    """Iterate rounds until ``patience`` consecutive rounds have every region
    non-empty and every region gradient below ``tol``.

    The trace holds the state at the start of every round plus the final
    state. ``recoveries`` lists ``(vehicle, round)`` where an empty region
    became non-empty; ``oscillations[i]`` counts non-empty to empty flips.
    """
    trace = LloydTrace(c0.params, oscillations=[0] * len(c0))
    c = c0
    calm = 0
    prev_empty = None
    for n in range(rounds + 1):
        part = dominance_partition(c.positions, c.params)
        empty = part.empty_flags()
        norms = _grad_norms(c, d, part)
        trace.records.append(RoundRecord(n, c.positions, part, expected_time_multi(c, d, part),
                                         norms, empty))
        if prev_empty is not None:
            for i, (was, now) in enumerate(zip(prev_empty, empty)):
                if was and not now:
                    trace.recoveries.append((i, n))
                elif now and not was:
                    trace.oscillations[i] += 1
        prev_empty = empty
        if not any(empty) and max(norms) < tol:
            calm += 1
            if calm >= patience:
                trace.converged = True
                break
        else:
            calm = 0
        if n == rounds:
            break
        c = _advance(c, d, part, substeps)
    return trace


@dataclass
class CriticalReport:
    critical: bool
    grad_norms: list[float]
    displacements: list[float]
    empty: list[bool]

    def __bool__(self):
        return self.critical


def is_critical(c: Configuration, d: Density, tol: float = 1e-6) -> CriticalReport:
    """Whether every vehicle sits at the minimiser of the expected time over
    its own (frozen) dominance region.

    Two per-vehicle diagnostics: the region gradient norm, and how far a
    single-vehicle descent restricted to the frozen region moves it.
    """
    part = dominance_partition(c.positions, c.params)
    empty = part.empty_flags()
    norms, moves = [], []
    k = _coeffs(c)
    for p, r in zip(c.positions, part.regions):
        if r.is_empty or p.Y <= 0:
            norms.append(math.nan)
            moves.append(math.nan)
            continue
        g = expected_cost_gradient(p, k, d, r)
        norms.append(math.hypot(*g))
        res = optimize_single(p, k, d, tol=min(1e-10, 1e-3 * tol), region=r, keep_trace=False)
        moves.append(p.dist(res.optimum))
    ok = (not any(empty)) and all(n < tol and m <= tol for n, m in zip(norms, moves))
    return CriticalReport(ok, norms, moves, empty)


def instability_check(c: Configuration, d: Density, tol: float = 1e-5, delta: float = 1e-4,
                      rounds: int = 100, substeps: int = 64) -> list[dict]:
    """Flag vehicles whose dominance region is disconnected at a critical configuration.

    Each flagged vehicle is nudged by ``delta`` in X and the descent is run
    for ``rounds`` rounds; ``escaped`` records whether the configuration moved
    farther than ``10*delta`` from where it started.
    """
    report = is_critical(c, d, tol)
    if not report.critical:
        raise PreconditionError("instability_check needs a critical configuration")
    part = dominance_partition(c.positions, c.params)
    base = c.as_array()
    out = []
    for i, r in enumerate(part.regions):
        entry = {"vehicle": i, "components": r.n_components, "status": "stable-candidate"}
        if r.n_components >= 2:
            entry["status"] = "unstable"
            trace = lloyd_descend(c.moved(i, dx=delta), d, rounds=rounds, tol=0.0,
                                  substeps=substeps)
            drift = [float(np.linalg.norm(np.array([[p.X, p.Y] for p in rec.positions]) - base))
                     for rec in trace.records]
            entry["escaped"] = max(drift) > 10 * delta
            entry["max_drift"] = max(drift)
        out.append(entry)
    return out
