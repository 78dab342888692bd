"""Acceptance criteria, one test per criterion.

Each test records a ``PASS``/``FAIL`` line with the measured value and the
tolerance; the lines are printed in the terminal summary.
"""
import hashlib
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import closed_form_uniform_cost

from lineintercept import density as dens
from lineintercept.cli import main
from lineintercept.lloyd import (
    Configuration,
    expected_time_multi,
    instability_check,
    is_critical,
    lloyd_descend,
    region_gradient,
)
from lineintercept.partition import dominance_partition
from lineintercept.pursuit import (
    apollonius,
    intercept_time,
    on_axis_intercept_scan,
    simulate_pursuit,
    vertical_height,
)
from lineintercept.single_vehicle import (
    GameParams,
    expected_cost,
    expected_cost_gradient,
    height_coeffs,
    optimize_single,
    time_coeffs,
)


def report(num, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title} :: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def fd(f, p, h=1e-6):
    X, Y = p
    return ((f((X + h, Y)) - f((X - h, Y))) / (2 * h), (f((X, Y + h)) - f((X, Y - h))) / (2 * h))


def rel(g, ref):
    return math.hypot(g[0] - ref[0], g[1] - ref[1]) / max(math.hypot(*ref), 1e-12)


def test_01_gradient_fidelity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    ds = [dens.uniform(1.0), dens.ramp_density(1.0)]
    single = 0.0
    for n in range(100):
        d = ds[n % 2]
        v = float(rng.uniform(0.05, 0.95))
        k = time_coeffs(v) if n % 4 < 2 else height_coeffs(v)
        p = (float(rng.uniform(0, 1)), float(rng.uniform(0.01, 2)))
        single = max(single, rel(expected_cost_gradient(p, k, d),
                                 fd(lambda q: expected_cost(q, k, d), p)))
    multi, done = 0.0, 0
    while done < 100:
        d = ds[done % 2]
        g = GameParams(1.0, float(rng.uniform(0.1, 0.9)))
        m = int(rng.integers(2, 5))
        ps = [tuple(x) for x in rng.uniform([0, 0.05], [1, 1], size=(m, 2))]
        c = Configuration(ps, g)
        part = dominance_partition(c.positions, g)
        if any(r.length < 1e-3 for r in part.regions):
            continue
        i = int(rng.integers(m))

        def f(q):
            pos = list(c.positions)
            pos[i] = q
            return expected_time_multi(Configuration(pos, g), d)

        multi = max(multi, rel(region_gradient(c, i, d, part),
                               fd(f, (c.positions[i].X, c.positions[i].Y))))
        done += 1
    dt = time.perf_counter() - t0
    ok = single <= 1e-5 and multi <= 1e-5 and dt < 10
    report(1, "gradient fidelity", ok,
           f"single max rel err {single:.2e}, region max rel err {multi:.2e} (tol 1e-5), "
           f"{dt:.2f}s (< 10s)")


def test_02_single_vehicle_optimum():
    t0 = time.perf_counter()
    d, k = dens.uniform(1.0), time_coeffs(0.5)
    a = optimize_single((0.1, 0.8), k, d)
    b = optimize_single((0.9, 0.2), k, d)

    # brute force on the closed-form expected cost: 1e-2 grid, then 1e-4 around the best
    def grid_min(xs, ys):
        XX, YY = np.meshgrid(xs, ys, indexing="ij")
        F = np.vectorize(lambda x, y: closed_form_uniform_cost(x, y, k.a, k.b, k.c))(XX, YY)
        i, j = np.unravel_index(np.argmin(F), F.shape)
        return xs[i], ys[j]

    x0, y0 = grid_min(np.arange(0, 101) * 1e-2, np.arange(1, 101) * 1e-2)
    xg, yg = grid_min(x0 + np.arange(-200, 201) * 1e-4, y0 + np.arange(-200, 201) * 1e-4)
    dt = time.perf_counter() - t0
    ex = abs(a.optimum.X - 0.5)
    ey = abs(a.optimum.Y - yg)
    gap = a.optimum.dist(b.optimum)
    ok = ex <= 1e-4 and ey <= 2e-4 and gap <= 1e-4 and dt < 30
    report(2, "single-vehicle optimum", ok,
           f"opt ({a.optimum.X:.6f}, {a.optimum.Y:.6f}); |X-0.5| {ex:.1e} (1e-4); grid oracle "
           f"({xg:.4f}, {yg:.4f}) |dY| {ey:.1e} (2e-4); start gap {gap:.1e} (1e-4); {dt:.1f}s")


def test_03_game_formula_oracles():
    rng = np.random.default_rng(303)
    dt = 1e-4
    eh = ew = eap = 0.0
    for _ in range(25):
        v = float(rng.uniform(0.1, 0.8))
        p = (float(rng.uniform(0, 1)), float(rng.uniform(0.05, 1)))
        x = float(rng.uniform(0, 1))
        th = simulate_pursuit(p, x, v, "height", dt=dt)
        tw = simulate_pursuit(p, x, v, "wall", dt=dt)
        eh = max(eh, abs(th.capture_point[1] - vertical_height(p, x, v)))
        ew = max(ew, abs(tw.capture_time - intercept_time(p, x, v)))
        w = apollonius(p, x, v).points(64)
        q = np.array([x, 0.0])
        eap = max(eap, float(np.max(np.abs(np.linalg.norm(q - w, axis=1)
                                           - v * np.linalg.norm(np.asarray(p) - w, axis=1)))))
    ok = eh <= 5 * dt and ew <= 5 * dt and eap <= 1e-9
    report(3, "game-formula oracles", ok,
           f"height err {eh:.1e}, intercept-time err {ew:.1e} (5dt = {5 * dt:.0e}); "
           f"Apollonius identity {eap:.1e} (1e-9)")


def test_04_median_optimality():
    errs = {}
    for name, d in [("uniform", dens.uniform(1.0)), ("ramp", dens.ramp_density(1.0))]:
        xs, vals = on_axis_intercept_scan(d, 0.5, 1e-3)
        errs[name] = abs(xs[int(np.argmin(vals))] - dens.median(d))
    ok = max(errs.values()) <= 2e-3
    report(4, "median optimality", ok,
           ", ".join(f"{k} |argmin - median| {v:.1e}" for k, v in errs.items()) + " (2e-3)")


def test_05_partition_soundness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(505)
    cov = over = 0.0
    slack = 0.0
    for n in range(100):
        m = 2 + n % 4
        g = GameParams(1.0, float(rng.uniform(0.05, 0.95)))
        ps = [tuple(p) for p in rng.uniform([0, 0], [1, 1], size=(m, 2))]
        part = dominance_partition(ps, g)
        cov = max(cov, abs(sum(r.length for r in part.regions) - 1.0))
        for i in range(m):
            for j in range(i + 1, m):
                over = max(over, part[i].intersect(part[j]).length)
        x = rng.uniform(0, 1, 10_000)
        own = np.full(x.size, -1)
        for i in reversed(range(m)):
            for iv in part[i]:
                own[(x >= iv.lo - 1e-12) & (x <= iv.hi + 1e-12)] = i
        assert np.all(own >= 0)
        T = np.array([g.time_coeffs.a * np.sqrt(g.time_coeffs.b * (x - X) ** 2 + Y * Y)
                      - g.time_coeffs.c * Y for X, Y in ps])
        slack = min(slack, float(np.min(T.min(axis=0) - T[own, np.arange(x.size)])))
    dt = time.perf_counter() - t0
    ok = cov <= 1e-9 and over <= 1e-9 and slack >= -1e-9 and dt < 60
    report(5, "partition soundness", ok,
           f"coverage err {cov:.1e}, overlap {over:.1e} (1e-9); min optimality slack {slack:.1e} "
           f"(>= -1e-9); {dt:.1f}s (< 60s)")


def test_06_lloyd_monotone_and_convergent():
    rng = np.random.default_rng(606)
    worst_rise, crit_fail, not_conv, max_rounds = 0.0, 0, 0, 0
    for s in range(20):
        d = dens.uniform(1.0) if s % 2 else dens.ramp_density(1.0)
        g = GameParams(1.0, (0.3, 0.5, 0.7)[s % 3])
        m = 2 + s % 3
        ps = [tuple(p) for p in rng.uniform([0, 0.05], [1, 1.5], size=(m, 2))]
        tr = lloyd_descend(Configuration(ps, g), d, rounds=500)
        et = np.array(tr.expected_times)
        worst_rise = max(worst_rise, float(np.max(np.diff(et), initial=0.0)))
        max_rounds = max(max_rounds, tr.records[-1].round)
        if not tr.converged:
            not_conv += 1
        elif not is_critical(tr.final, d, 1e-5):
            crit_fail += 1
    ok = worst_rise <= 1e-10 and not crit_fail and not not_conv
    report(6, "Lloyd monotonicity + convergence", ok,
           f"max per-round increase {worst_rise:.1e} (1e-10); {20 - not_conv}/20 converged, "
           f"{20 - not_conv - crit_fail}/20 critical at 1e-5; max rounds {max_rounds} (<= 500)")


def test_07_stacked_pair_instability():
    g, d = GameParams(1.0, 0.5), dens.uniform(1.0)
    tr = lloyd_descend(Configuration([(0.5, 0.3), (0.5, 0.7)], g), d, rounds=500)
    final = tr.final
    crit = is_critical(final, d, 1e-5)
    part = dominance_partition(final.positions, g)
    upper = int(np.argmax([p.Y for p in final.positions]))
    disconnected = part[upper].n_components == 2
    flags = instability_check(final, d, 1e-5)
    unstable = flags[upper]["status"] == "unstable" and flags[upper]["escaped"]
    et_sym = tr.records[-1].expected_time

    moved = final.moved(upper, dx=1e-3)
    tr2 = lloyd_descend(moved, d, rounds=500)
    part2 = dominance_partition(tr2.final.positions, g)
    connected = all(r.n_components == 1 for r in part2.regions)
    crit2 = is_critical(tr2.final, d, 1e-5)
    et2 = tr2.records[-1].expected_time
    ok = (tr.converged and bool(crit) and disconnected and unstable and tr2.converged
          and bool(crit2) and connected and et2 < et_sym)
    report(7, "stacked symmetric pair: unstable critical, perturbed escape", ok,
           f"symmetric critical {[(round(p.X, 4), round(p.Y, 4)) for p in final.positions]} in "
           f"{tr.records[-1].round} rounds, upper region {part[upper].as_pairs()} "
           f"({part[upper].n_components} pieces), flagged unstable={unstable}; perturbed -> "
           f"{[(round(p.X, 4), round(p.Y, 4)) for p in tr2.final.positions]} connected={connected}"
           f", expected time {et_sym:.6f} -> {et2:.6f}")


def test_08_three_vehicle_empty_region_recovery():
    g, d = GameParams(1.0, 0.5), dens.ramp_density(1.0)
    tr = lloyd_descend(Configuration([(0.2, 0.2), (0.6, 0.1), (0.4, 2.5)], g), d, rounds=500)
    first_empty = tr.records[0].empty
    crit = is_critical(tr.final, d, 1e-5)
    ok = (first_empty[2] and bool(tr.recoveries) and tr.converged and bool(crit)
          and not any(tr.records[-1].empty))
    report(8, "three-vehicle ramp density: empty-region recovery", ok,
           f"initially empty {first_empty}; recoveries (vehicle, round) {tr.recoveries}; "
           f"converged={tr.converged} in {tr.records[-1].round} rounds; critical={bool(crit)}")


def test_09_equal_speed_limit():
    opt = optimize_single((0.2, 0.6), time_coeffs(0.99), dens.uniform(1.0)).optimum
    gap = opt.dist((0.5, math.sqrt(1 / 12)))
    report(9, "equal-speed limit", gap <= 0.02,
           f"v=0.99 optimum ({opt.X:.5f}, {opt.Y:.5f}); distance to (0.5, {math.sqrt(1 / 12):.5f})"
           f" {gap:.4f} (0.02)")


def test_10_determinism(tmp_path, capsys):
    from pathlib import Path
    root = Path(__file__).resolve().parents[1] / "scenarios"
    mismatched, files = [], 0
    for scen in sorted(root.glob("*.json")):
        digests = []
        for rep in ("a", "b"):
            out = tmp_path / scen.stem / rep
            main(["run", str(scen), "--out", str(out), "--seed", "11"])
            digests.append({str(p.relative_to(out)): hashlib.sha256(p.read_bytes()).hexdigest()
                            for p in sorted(out.rglob("*")) if p.is_file()})
        files += len(digests[0])
        if digests[0] != digests[1] or not digests[0]:
            mismatched.append(scen.stem)
    capsys.readouterr()
    report(10, "determinism", not mismatched,
           f"{files} artifacts over {len(list(root.glob('*.json')))} scenarios byte-identical; "
           f"mismatches: {mismatched or 'none'}")
