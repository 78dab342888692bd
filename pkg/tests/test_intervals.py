import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lineintercept.errors import DomainError
from lineintercept.intervals import Interval, Region, as_region


def test_canonical_merges_and_sorts():
    r = Region(1.0, [(0.6, 0.8), (0.1, 0.3), (0.25, 0.4)])
    assert r.as_pairs() == [[0.1, 0.4], [0.6, 0.8]]
    assert r.n_components == 2
    assert math.isclose(r.length, 0.5)


def test_clips_to_segment_and_drops_points():
    r = Region(1.0, [(-1.0, 0.2), (0.5, 0.5), (0.9, 3.0)])
    assert r.as_pairs() == [[0.0, 0.2], [0.9, 1.0]]


def test_snap_pins_near_ends():
    r = Region(1.0, [(1e-14, 1 - 1e-14)])
    assert r == Region.full(1.0)


def test_reversed_interval_rejected():
    with pytest.raises(DomainError):
        Region(1.0, [(0.5, 0.2)])
    with pytest.raises(DomainError):
        Interval(0.5, 0.2)


def test_complement_and_intersect():
    r = Region(1.0, [(0.2, 0.4), (0.7, 0.9)])
    c = r.complement()
    assert c.as_pairs() == [[0.0, 0.2], [0.4, 0.7], [0.9, 1.0]]
    assert r.intersect(c).is_empty
    assert math.isclose(r.union(c).length, 1.0)
    assert Region.empty(1.0).complement() == Region.full(1.0)


def test_distance_and_contains():
    r = Region(1.0, [(0.2, 0.4)])
    assert r.distance_to(0.3) == 0.0
    assert math.isclose(r.distance_to(0.5), 0.1)
    assert Region.empty(1.0).distance_to(0.3) == math.inf
    assert r.contains(0.4) and not r.contains(0.41)
    assert r.contains(0.41, tol=0.02)


def test_as_region_coercions():
    assert as_region(1.0, None) == Region.full(1.0)
    assert as_region(1.0, (0.1, 0.2)).as_pairs() == [[0.1, 0.2]]
    assert as_region(1.0, Interval(0.1, 0.2)).as_pairs() == [[0.1, 0.2]]


pairs = st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)).map(lambda t: tuple(sorted(t))),
                 max_size=6)


@given(pairs, pairs)
def test_set_algebra_lengths(a, b):
    ra, rb = Region(1.0, a), Region(1.0, b)
    assert abs(ra.length + ra.complement().length - 1.0) < 1e-9
    inter, uni = ra.intersect(rb), ra.union(rb)
    assert abs(uni.length + inter.length - ra.length - rb.length) < 1e-9
    assert inter.length <= min(ra.length, rb.length) + 1e-12


@given(pairs)
def test_canonical_form_is_disjoint_and_sorted(a):
    r = Region(1.0, a)
    ivs = list(r)
    assert all(iv.length > 0 for iv in ivs)
    assert all(x.hi < y.lo for x, y in zip(ivs, ivs[1:]))
