"""Seeded property suites behind ``lineintercept verify``.

Every check compares library output against an oracle that does not share
the code path under test (discrete sums, dense scans, finite differences,
direct simulation) and records the worst measured discrepancy next to its
tolerance.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import density as dens
from . import kernels
from .density import Density
from .lloyd import (
    Configuration,
    expected_time_direct,
    expected_time_multi,
    is_critical,
    lloyd_descend,
    region_gradient,
)
from .partition import (
    dominance_boundary_scan,
    dominance_partition,
    pairwise_dominance,
    region_hausdorff,
)
from .pursuit import (
    apollonius,
    evader_target_height,
    intercept_time,
    on_axis_intercept_scan,
    simulate_pursuit,
    vertical_height,
)
from .single_vehicle import (
    GameParams,
    constrained_time,
    expected_cost,
    expected_cost_gradient,
    generic_cost,
    height_coeffs,
    optimize_single,
    time_coeffs,
)

SELECTORS = ("density", "single_vehicle", "pursuit_games", "partition", "lloyd_solver")
BASE_SEED = 20240601


class UnknownSelectorError(ValueError):
    pass


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    samples: int
    detail: dict = field(default_factory=dict)


def _check(name, measured, tolerance, samples, ok=None, **detail) -> Check:
    measured = float(measured)
    passed = bool(measured <= tolerance) if ok is None else bool(ok)
    return Check(name, passed, measured, float(tolerance), int(samples), detail)


def _rng(tag: int) -> np.random.Generator:
    return np.random.default_rng([BASE_SEED, tag])


def random_density(rng: np.random.Generator, width: float = 1.0) -> Density:
    """Random continuous piecewise-linear density with 2 to 6 knots."""
    k = int(rng.integers(2, 7))
    inner = np.sort(rng.uniform(0.0, width, size=k - 2))
    xs = np.concatenate([[0.0], inner, [width]])
    return Density(width, list(zip(xs, rng.uniform(0.05, 2.0, size=k))))


def _discrete(d: Density, n: int = 200_000):
    """Midpoint nodes and probability weights for discrete-sum oracles."""
    x = (np.arange(n) + 0.5) * (d.width / n)
    w = dens.evaluate(d, x) * (d.width / n)
    return x, w


def _abs_moment(x, w, grid):
    """``sum_k w_k |g - x_k|`` for every ``g`` in ``grid`` via prefix sums."""
    cw, cxw = np.cumsum(w), np.cumsum(w * x)
    k = np.searchsorted(x, grid)
    left_w = np.where(k > 0, cw[np.maximum(k - 1, 0)], 0.0)
    left_xw = np.where(k > 0, cxw[np.maximum(k - 1, 0)], 0.0)
    return grid * left_w - left_xw + (cxw[-1] - left_xw) - grid * (cw[-1] - left_w)


def _densities():
    rng = _rng(1)
    return [("uniform", dens.uniform(1.0)), ("nonuniform", dens.ramp_density(1.0))] + [
        (f"random{i}", random_density(rng)) for i in range(10)]


# --------------------------------------------------------------------- density

def suite_density() -> list[Check]:
    out = []
    ds = _densities()

    errs = [abs(dens.integrate(d) - 1.0) for _, d in ds]
    disc = [abs(float(np.sum(_discrete(d)[1])) - 1.0) for _, d in ds]
    out.append(_check("normalization", max(errs), 1e-9, len(ds), discrete_sum_error=max(disc)))

    rng = _rng(2)
    worst = 0.0
    for _, d in ds:
        x = rng.uniform(0, d.width * (1 - 1e-3), 1000)
        h = rng.uniform(1e-9, 1e-3, 1000)
        jump = np.abs(dens.evaluate(d, x) - dens.evaluate(d, x + h))
        worst = max(worst, float(np.max(jump - d.lipschitz * h)))
    out.append(_check("lipschitz_continuity", worst, 1e-12, 1000 * len(ds)))

    med_err, cen_err, spread_err = 0.0, 0.0, 0.0
    for _, d in ds:
        x, w = _discrete(d)
        grid = np.linspace(0.0, d.width, int(round(d.width / 1e-4)) + 1)
        best = grid[np.argmin(_abs_moment(x, w, grid))]
        med_err = max(med_err, abs(best - dens.median(d)))
        m1, m2 = float(np.sum(w * x)), float(np.sum(w * x * x))
        quad = grid * grid - 2 * grid * m1 + m2
        mean, spread = dens.centroid_and_spread(d)
        cen_err = max(cen_err, abs(grid[np.argmin(quad)] - mean))
        spread_err = max(spread_err, abs(math.sqrt(m2 - m1 * m1) - spread))
    out.append(_check("median_vs_grid", med_err, 2e-4, len(ds)))
    out.append(_check("centroid_vs_grid", cen_err, 2e-4, len(ds)))
    out.append(_check("spread_vs_discrete", spread_err, 1e-6, len(ds)))
    return out


# -------------------------------------------------------------- single vehicle

def fd_gradient(f, p, h: float = 1e-6):
    X, Y = p
    return ((f((X + h, Y)) - f((X - h, Y))) / (2 * h),
            (f((X, Y + h)) - f((X, Y - h))) / (2 * h))


def rel_error(g, ref, floor: float = 1e-12) -> float:
    return math.hypot(g[0] - ref[0], g[1] - ref[1]) / max(math.hypot(*ref), floor)


def suite_single_vehicle() -> list[Check]:
    out = []
    rng = _rng(3)
    ds = [d for _, d in _densities()]

    worst = 0.0
    for _ in range(200):
        d = ds[int(rng.integers(len(ds)))]
        k = time_coeffs(float(rng.uniform(0.05, 0.95)))
        p1 = rng.uniform([0.0, 0.0], [1.0, 2.0])
        p2 = rng.uniform([0.0, 0.0], [1.0, 2.0])
        mid = expected_cost(0.5 * (p1 + p2), k, d)
        worst = max(worst, mid - 0.5 * (expected_cost(p1, k, d) + expected_cost(p2, k, d)))
    out.append(_check("midpoint_convexity", worst, 1e-9, 200))

    worst = 0.0
    for _ in range(100):
        d = ds[int(rng.integers(len(ds)))]
        v = float(rng.uniform(0.05, 0.95))
        k = time_coeffs(v) if rng.random() < 0.5 else height_coeffs(v)
        p = (float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.01, 2.0)))
        fd = fd_gradient(lambda q: expected_cost(q, k, d), p)
        worst = max(worst, rel_error(expected_cost_gradient(p, k, d), fd))
    out.append(_check("gradient_vs_finite_difference", worst, 1e-6, 100))

    rise, escape = 0.0, 0.0
    for _ in range(20):
        d = ds[int(rng.integers(len(ds)))]
        k = time_coeffs(float(rng.uniform(0.1, 0.9)))
        start = (float(rng.uniform(0, 1)), float(rng.uniform(0.01, 2.0)))
        res = optimize_single(start, k, d)
        costs = np.array([c for _, c in res.trace])
        rise = max(rise, float(np.max(np.diff(costs), initial=0.0)))
        for q, _ in res.trace:
            escape = max(escape, -q.X, q.X - (d.width + 1e-9), 1e-300 if q.Y <= 0 else 0.0)
    out.append(_check("descent_monotone", rise, 1e-12, 20))
    out.append(_check("descent_confinement", escape, 0.0, 20))

    mism = 0
    for _ in range(200):
        v = float(rng.uniform(0.0, 0.99))
        p = (float(rng.uniform(0, 1)), float(rng.uniform(0, 2)))
        x = float(rng.uniform(0, 1))
        mism += constrained_time(p, x, v) != generic_cost(p, x, time_coeffs(v))
    out.append(_check("instance_consistency", mism, 0, 200))

    if "compiled" in kernels.available():
        worst = 0.0
        for _ in range(50):
            d = ds[int(rng.integers(len(ds)))]
            k = time_coeffs(float(rng.uniform(0.1, 0.9)))
            X, Y = float(rng.uniform(0, 1)), float(rng.uniform(0.01, 2.0))
            lo, hi, s0, s1 = d.panels()
            vals = []
            for name in ("compiled", "python"):
                with kernels.backend(name):
                    vals.append(np.array(kernels.cost_and_gradient(X, Y, k.a, k.b, k.c,
                                                                   lo, hi, s0, s1)))
            worst = max(worst, float(np.max(np.abs(vals[0] - vals[1]))))
        out.append(_check("backend_agreement", worst, 1e-12, 50))
    return out


# ------------------------------------------------------------- pursuit games

def suite_pursuit_games(dt: float = 1e-4) -> list[Check]:
    out = []
    rng = _rng(4)

    worst = 0.0
    for _ in range(50):
        v = float(rng.uniform(0.05, 0.95))
        p = rng.uniform([0, 0], [1, 2])
        q = rng.uniform([0, 0], [1, 1]) if rng.random() < 0.5 else float(rng.uniform(0, 1))
        qv = np.array([q, 0.0]) if np.ndim(q) == 0 else q
        w = apollonius(p, q, v).points(64)
        res = np.abs(np.linalg.norm(qv - w, axis=1) - v * np.linalg.norm(p - w, axis=1))
        worst = max(worst, float(np.max(res)))
    out.append(_check("apollonius_identity", worst, 1e-9, 50 * 64))

    hgap, hform = 0.0, 0
    for _ in range(200):
        v = float(rng.uniform(0.05, 0.95))
        p = (float(rng.uniform(0, 1)), float(rng.uniform(0.001, 2)))
        x = float(rng.uniform(0, 1))
        hgap = max(hgap, abs(vertical_height(p, x, v) - evader_target_height(p, x, v)[1]))
        hform += vertical_height(p, x, v) != generic_cost(p, x, height_coeffs(v))
    out.append(_check("height_consistency", hgap, 1e-12, 200))
    out.append(_check("height_cost_form", hform, 0, 200))

    sim_h, sim_w, shrink = 0.0, 0.0, 0.0
    for _ in range(25):
        v = float(rng.uniform(0.1, 0.8))
        p = (float(rng.uniform(0, 1)), float(rng.uniform(0.05, 1)))
        x = float(rng.uniform(0, 1))
        tr = simulate_pursuit(p, x, v, "height", dt=dt)
        sim_h = max(sim_h, abs(tr.capture_point[1] - vertical_height(p, x, v)))
        c0 = apollonius(tr.pursuer[0], tr.evader[0], v)
        for idx in np.linspace(0, len(tr.t) - 2, 10).astype(int):
            ct = apollonius(tr.pursuer[idx], tr.evader[idx], v)
            gap = math.hypot(c0.center[0] - ct.center[0], c0.center[1] - ct.center[1])
            shrink = max(shrink, gap + ct.radius - c0.radius)
        tw = simulate_pursuit(p, x, v, "wall", dt=dt)
        sim_w = max(sim_w, abs(tw.capture_time - intercept_time(p, x, v)))
    out.append(_check("simulated_height_vs_formula", sim_h, 5 * dt, 25))
    out.append(_check("simulated_intercept_time_vs_formula", sim_w, 5 * dt, 25))
    out.append(_check("shrinking_apollonius_circle", shrink, 1e-6, 250))

    d = dens.uniform(1.0)
    gap = 0.0
    for v in (0.3, 0.5, 0.8):
        k = height_coeffs(v)
        a = optimize_single((0.1, 0.8), k, d).optimum
        b = optimize_single((0.9, 0.2), k, d).optimum
        gap = max(gap, a.dist(b))
    out.append(_check("height_optimum_unique", gap, 1e-4, 3))

    worst = 0.0
    for d in (dens.uniform(1.0), dens.ramp_density(1.0)):
        xs, vals = on_axis_intercept_scan(d, 0.5, 1e-3)
        worst = max(worst, abs(xs[int(np.argmin(vals))] - dens.median(d)))
    out.append(_check("median_optimality", worst, 2e-3, 2))
    return out


# ------------------------------------------------------------------ partition

def random_configuration(rng: np.random.Generator, m: int, width: float = 1.0,
                         max_y: float = 1.0, min_y: float = 0.0):
    return [(float(x), float(y)) for x, y in
            rng.uniform([0.0, min_y], [width, max_y], size=(m, 2))]


def owners(part, x: np.ndarray) -> np.ndarray:
    """Lowest-index owner of each abscissa, vectorised over ``x``."""
    tol = 1e-12 * part.width
    own = np.full(x.shape, -1)
    for i in reversed(range(len(part))):
        for iv in part[i]:
            own[(x >= iv.lo - tol) & (x <= iv.hi + tol)] = i
    return own


def suite_partition() -> list[Check]:
    out = []
    rng = _rng(5)
    cov, overlap, slack, uncovered = 0.0, 0.0, 0.0, 0
    for n in range(100):
        m = 2 + n % 4
        v = float(rng.uniform(0.05, 0.95))
        g = GameParams(1.0, v)
        ps = random_configuration(rng, m)
        part = dominance_partition(ps, g)
        cov = max(cov, abs(sum(r.length for r in part.regions) - 1.0))
        for i in range(m):
            for j in range(i + 1, m):
                overlap = max(overlap, part[i].intersect(part[j]).length)
        x = rng.uniform(0, 1, 10_000)
        own = owners(part, x)
        uncovered += int(np.sum(own < 0))
        T = np.array([constrained_time(p, x, g) for p in ps])
        slack = max(slack, float(np.max(T[own, np.arange(x.size)] - T.min(axis=0))))
    out.append(_check("coverage", cov, 1e-9, 100))
    out.append(_check("overlap", overlap, 1e-9, 100))
    out.append(_check("pointwise_optimality", slack, 1e-9, 1_000_000, ok=slack <= 1e-9 and not uncovered,
                      uncovered=uncovered))

    worst_sound, worst_scan = 0.0, 0.0
    step = 1e-5
    for _ in range(100):
        g = GameParams(1.0, float(rng.uniform(0.05, 0.95)))
        pi, pj = random_configuration(rng, 2)
        r = pairwise_dominance(pi, pj, g)
        if not r.is_empty:
            lens = np.array([iv.length for iv in r])
            pick = rng.choice(len(lens), size=1000, p=lens / lens.sum()) if lens.sum() > 0 \
                else np.zeros(1000, int)
            x = np.array([r.intervals[k].lo for k in pick]) + rng.uniform(0, 1, 1000) * lens[pick]
            gap = constrained_time(pi, x, g) - constrained_time(pj, x, g)
            worst_sound = max(worst_sound, float(np.max(gap)))
        ref = dominance_boundary_scan(pi, pj, g, step)
        if r.length > 2 * step or ref.length > 2 * step:
            worst_scan = max(worst_scan, region_hausdorff(r, ref))
    out.append(_check("pairwise_soundness", worst_sound, 1e-9, 100_000))
    out.append(_check("pairwise_vs_scan", worst_scan, 2 * step, 100))

    bad, tested = 0, 0
    while tested < 20:
        g = GameParams(1.0, float(rng.uniform(0.2, 0.8)))
        ps = random_configuration(rng, 3, min_y=0.05)
        base = dominance_partition(ps, g)
        if any(r.length < 1e-2 for r in base.regions):
            continue
        tested += 1
        direction = rng.normal(size=(3, 2))
        direction /= np.linalg.norm(direction)
        dists = []
        for delta in (1e-2, 1e-3, 1e-4):
            moved = [(x + delta * dx, max(y + delta * dy, 0.0))
                     for (x, y), (dx, dy) in zip(ps, direction)]
            pert = dominance_partition(moved, g)
            dists.append(max(region_hausdorff(a, b) for a, b in zip(base.regions, pert.regions)))
        bad += not (dists[0] >= dists[1] >= dists[2])
    out.append(_check("continuity", bad, 0, tested))

    bad = 0
    for _ in range(50):
        g = GameParams(1.0, float(rng.uniform(0.05, 0.95)))
        ps = random_configuration(rng, 2, max_y=0.5)
        # T >= (a - c) * Y = Y / (1 + v), so this height loses at every abscissa
        worst = max(constrained_time(p, x, g) for p in ps for x in (0.0, 1.0))
        ps.append((float(rng.uniform(0, 1)), (1 + g.target_speed) * worst + 0.1))
        bad += not dominance_partition(ps, g)[2].is_empty
    out.append(_check("far_vehicle_empty", bad, 0, 50))
    return out


# --------------------------------------------------------------- lloyd solver

def suite_lloyd_solver() -> list[Check]:
    out = []
    rng = _rng(6)
    ds = [dens.uniform(1.0), dens.ramp_density(1.0)]

    worst_eq, worst_fd = 0.0, 0.0
    for _ in range(50):
        d = ds[int(rng.integers(2))]
        g = GameParams(1.0, float(rng.uniform(0.1, 0.9)))
        c = Configuration(random_configuration(rng, int(rng.integers(2, 5)), min_y=0.05), g)
        worst_eq = max(worst_eq, abs(expected_time_multi(c, d) - expected_time_direct(c, d)))
    out.append(_check("partition_sum_vs_direct", worst_eq, 1e-8, 50))

    tested = 0
    while tested < 50:
        d = ds[int(rng.integers(2))]
        g = GameParams(1.0, float(rng.uniform(0.1, 0.9)))
        c = Configuration(random_configuration(rng, int(rng.integers(2, 4)), min_y=0.05), g)
        part = dominance_partition(c.positions, g)
        if any(r.length < 1e-3 for r in part.regions):
            continue
        i = int(rng.integers(len(c)))
        tested += 1

        def f(q, i=i, c=c, d=d):
            pos = list(c.positions)
            pos[i] = q
            return expected_time_multi(Configuration(pos, c.params), d)

        fd = fd_gradient(f, (c.positions[i].X, c.positions[i].Y))
        worst_fd = max(worst_fd, rel_error(region_gradient(c, i, d, part), fd))
    out.append(_check("region_gradient_vs_finite_difference", worst_fd, 1e-5, 50))

    rise, escape, jump, recover_bad, crit_bad, unconverged = 0.0, 0.0, 0.0, 0, 0, 0
    n_scen = 10
    for s in range(n_scen):
        d = ds[s % 2]
        g = GameParams(1.0, (0.3, 0.5, 0.7)[s % 3])
        c0 = Configuration(random_configuration(rng, 2 + s % 3, max_y=1.5), g)
        tr = lloyd_descend(c0, d, rounds=500)
        et = np.array(tr.expected_times)
        rise = max(rise, float(np.max(np.diff(et), initial=0.0)))
        arr = np.array([[[p.X, p.Y] for p in r.positions] for r in tr.records])
        escape = max(escape, float(np.max(-arr[..., 0])), float(np.max(arr[..., 0] - 1.0)),
                     float(np.max(-arr[..., 1])))
        if len(arr) > 1:
            jump = max(jump, float(np.max(np.linalg.norm(np.diff(arr, axis=0), axis=2))))
        recover_bad += _empty_recovery_violations(tr)
        if tr.converged:
            crit_bad += not is_critical(tr.final, d, 1e-5)
        else:
            unconverged += 1
    out.append(_check("monotone_expected_time", rise, 1e-10, n_scen))
    out.append(_check("confinement", escape, 0.0, n_scen))
    out.append(_check("saturation", jump, 1 + 1e-9, n_scen))
    out.append(_check("empty_region_descends", recover_bad, 0, n_scen))
    out.append(_check("critical_at_convergence", crit_bad + unconverged, 0, n_scen,
                      unconverged=unconverged))
    return out


def _empty_recovery_violations(trace) -> int:
    """Vehicles that stay empty for ``ceil(Y)`` rounds without reaching ``Y = 0``."""
    bad = 0
    recs = trace.records
    for i in range(len(recs[0].positions)):
        for n, rec in enumerate(recs):
            if not rec.empty[i] or (n > 0 and recs[n - 1].empty[i]):
                continue
            k = math.ceil(rec.positions[i].Y)
            if n + k < len(recs) and all(recs[m].empty[i] for m in range(n, n + k)):
                bad += recs[n + k].positions[i].Y != 0.0
    return bad


SUITES = {
    "density": suite_density,
    "single_vehicle": suite_single_vehicle,
    "pursuit_games": suite_pursuit_games,
    "partition": suite_partition,
    "lloyd_solver": suite_lloyd_solver,
}


def run(selector: str = "all") -> dict:
    """Run one suite (or ``"all"``) and return a JSON-ready report."""
    if selector == "all":
        names = list(SELECTORS)
    elif selector in SUITES:
        names = [selector]
    else:
        raise UnknownSelectorError(
            f"unknown selector {selector!r}; expected one of {', '.join(SELECTORS)} or all")
    modules = {}
    for name in names:
        checks = SUITES[name]()
        modules[name] = {"passed": all(c.passed for c in checks),
                         "checks": [asdict(c) for c in checks]}
    return {"selector": selector, "passed": all(m["passed"] for m in modules.values()),
            "modules": modules}
