import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lineintercept.errors import CoincidentVehiclesError, InvariantViolation
from lineintercept.intervals import Region
from lineintercept.partition import (
    Partition,
    _quadratic_roots,
    dominance_boundary_scan,
    dominance_partition,
    pairwise_dominance,
    region_hausdorff,
)
from lineintercept.single_vehicle import GameParams, constrained_time

G = GameParams(1.0, 0.5)


def test_equal_heights_split_at_midpoint():
    assert pairwise_dominance((0.2, 0.3), (0.6, 0.3), G).as_pairs() == [[0.0, 0.4]]
    assert pairwise_dominance((0.6, 0.3), (0.2, 0.3), G).as_pairs() == [[0.4, 1.0]]


def test_stacked_pair_lower_owns_middle():
    low = pairwise_dominance((0.5, 0.04), (0.5, 0.17), G)
    high = pairwise_dominance((0.5, 0.17), (0.5, 0.04), G)
    assert low.n_components == 1 and high.n_components == 2
    assert math.isclose(low.length + high.length, 1.0, abs_tol=1e-12)
    assert low.intervals[0].lo == pytest.approx(1 - high.intervals[1].lo, abs=1e-12)


def test_boundary_is_tie():
    pi, pj = (0.2, 0.1), (0.7, 0.5)
    r = pairwise_dominance(pi, pj, G)
    for x in r.breakpoints():
        if 0 < x < 1:
            assert constrained_time(pi, x, G) == pytest.approx(constrained_time(pj, x, G), abs=1e-12)


def test_coincident_rejected():
    with pytest.raises(CoincidentVehiclesError):
        pairwise_dominance((0.2, 0.1), (0.2, 0.1), G)
    with pytest.raises(CoincidentVehiclesError) as exc:
        dominance_partition([(0.1, 0.1), (0.3, 0.2), (0.1, 0.1)], G)
    assert exc.value.pair == (0, 2)


def test_quadratic_roots_cases():
    assert sorted(_quadratic_roots(1.0, -3.0, 2.0)) == pytest.approx([1.0, 2.0])
    assert _quadratic_roots(0.0, 2.0, -4.0) == [2.0]
    assert _quadratic_roots(0.0, 0.0, 1.0) is None
    assert _quadratic_roots(1.0, 2.0, 1.0 + 1e-15) == pytest.approx([-1.0, -1.0])
    with pytest.raises(InvariantViolation):
        _quadratic_roots(1.0, 0.0, 1.0)


def test_degenerate_leading_coefficient():
    # sin(theta) = v: the bisector direction makes the quadratic linear
    v = 0.5
    g = GameParams(1.0, v)
    pi = (0.3, 0.2)
    # direction (s, c) with s = (Xj - Xi)/d = v
    d = 0.4
    pj = (pi[0] + v * d, pi[1] + math.sqrt(1 - v * v) * d)
    r = pairwise_dominance(pi, pj, g)
    ref = dominance_boundary_scan(pi, pj, g, 1e-5)
    assert region_hausdorff(r, ref) <= 2e-5


def test_far_vehicle_has_empty_region():
    part = dominance_partition([(0.2, 0.1), (0.8, 0.1), (0.5, 5.0)], G)
    assert part[2].is_empty and part.empty_flags() == [False, False, True]


def test_partition_owner_and_json():
    part = dominance_partition([(0.2, 0.1), (0.8, 0.1)], G)
    assert part.owner(0.1) == 0 and part.owner(0.9) == 1 and part.owner(0.5) == 0
    assert part.to_json() == [{"vehicle": 0, "intervals": [[0.0, 0.5]]},
                              {"vehicle": 1, "intervals": [[0.5, 1.0]]}]
    with pytest.raises(InvariantViolation):
        Partition(1.0, [Region(1.0, [(0, 0.4)])]).owner(0.6)


def test_hausdorff():
    a = Region(1.0, [(0.1, 0.3)])
    assert region_hausdorff(a, a) == 0.0
    assert region_hausdorff(a, Region(1.0, [(0.1, 0.35)])) == pytest.approx(0.05)
    assert region_hausdorff(a, Region.empty(1.0)) == math.inf
    assert region_hausdorff(Region.empty(1.0), Region.empty(1.0)) == 0.0
    # a gap inside b that a covers
    b = Region(1.0, [(0.0, 0.4), (0.6, 1.0)])
    assert region_hausdorff(Region.full(1.0), b) == pytest.approx(0.1)


point = st.tuples(st.floats(0, 1), st.floats(0, 1))
speed = st.floats(0.05, 0.95)


@settings(max_examples=150, deadline=None)
@given(point, point, speed)
def test_pairwise_matches_scan(pi, pj, v):
    if math.dist(pi, pj) < 1e-3:
        return
    g = GameParams(1.0, v)
    r = pairwise_dominance(pi, pj, g)
    ref = dominance_boundary_scan(pi, pj, g, 1e-5)
    if r.length > 2e-5 or ref.length > 2e-5:
        assert region_hausdorff(r, ref) <= 2e-5
    x = np.linspace(0, 1, 1001)
    inside = np.array([r.contains(t) for t in x])
    gap = constrained_time(pi, x[inside], g) - constrained_time(pj, x[inside], g)
    assert np.all(gap <= 1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(point, min_size=2, max_size=5, unique=True), speed, st.integers(0, 2 ** 32 - 1))
def test_partition_tiles_and_is_optimal(ps, v, seed):
    g = GameParams(1.0, v)
    part = dominance_partition(ps, g)
    assert abs(sum(r.length for r in part.regions) - 1.0) <= 1e-9
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            assert part[i].intersect(part[j]).length <= 1e-9
    x = np.random.default_rng(seed).uniform(0, 1, 2000)
    T = np.array([constrained_time(p, x, g) for p in ps])
    own = np.array([part.owner(t) for t in x])
    assert np.all(T[own, np.arange(x.size)] <= T.min(axis=0) + 1e-9)


def test_continuity_shrinks_with_perturbation():
    ps = [(0.2, 0.1), (0.5, 0.3), (0.8, 0.15)]
    base = dominance_partition(ps, G)
    dists = []
    for delta in (1e-2, 1e-3, 1e-4):
        moved = [(x + delta, y + delta / 2) for x, y in ps[:1]] + ps[1:]
        part = dominance_partition(moved, G)
        dists.append(max(region_hausdorff(a, b) for a, b in zip(base.regions, part.regions)))
    assert dists[0] > dists[1] > dists[2]
