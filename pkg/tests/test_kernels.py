import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lineintercept import _kernels_py, kernels
from lineintercept import density as dens
from lineintercept.single_vehicle import time_coeffs

from oracles import closed_form_uniform_cost


def _panels(region=None):
    return dens.uniform(1.0).panels(region)


@pytest.mark.parametrize("X, Y", [(0.5, 0.3), (0.0, 1.0), (0.3, 1e-9), (0.7, 0.0), (1.5, 0.2)])
def test_cost_matches_closed_form(backend, X, Y):
    k = time_coeffs(0.5)
    f, _, _ = kernels.cost_and_gradient(X, Y, k.a, k.b, k.c, *_panels())
    assert f == pytest.approx(closed_form_uniform_cost(X, Y, k.a, k.b, k.c), abs=1e-14)


def test_moments_mass(backend):
    mass, *_ = kernels.region_moments(0.3, 0.2, 0.75, *_panels((0.1, 0.6)))
    assert mass == pytest.approx(0.5, abs=1e-15)


def test_empty_panels(backend):
    e = np.empty(0)
    assert tuple(kernels.region_moments(0.3, 0.2, 1.0, e, e, e, e)) == (0.0, 0.0, 0.0, 0.0)


def test_flow_round_stays_put_at_optimum(backend):
    from lineintercept.single_vehicle import optimize_single
    k = time_coeffs(0.5)
    opt = optimize_single((0.2, 0.5), k, dens.uniform(1.0), tol=1e-12).optimum
    x, y = kernels.flow_round(opt.X, opt.Y, k.a, k.b, k.c, *_panels(), 64)
    assert abs(x - opt.X) < 1e-10 and abs(y - opt.Y) < 1e-10


def test_flow_round_is_saturated(backend):
    k = time_coeffs(0.5)
    x, y = kernels.flow_round(0.0, 3.0, k.a, k.b, k.c, *_panels(), 64)
    assert np.hypot(x, y - 3.0) <= 1 + 1e-12


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def test_backend_context_restores():
    before = kernels.backend_name()
    with kernels.backend("python"):
        assert kernels.backend_name() == "python"
    assert kernels.backend_name() == before


@pytest.mark.skipif("compiled" not in kernels.available(), reason="extension not built")
@settings(max_examples=100, deadline=None)
@given(st.floats(-0.2, 1.2), st.floats(0, 2), st.floats(0.0, 0.95), st.integers(0, 3))
def test_backends_agree(X, Y, v, which):
    d = [dens.uniform(1.0), dens.ramp_density(1.0), dens.triangle(1.0, 0.4, 0.2),
         dens.Density(1.0, [(0, 1), (0.3, 0.2), (1, 2)])][which]
    k = time_coeffs(v)
    lo, hi, s0, s1 = d.panels((0.1, 0.8))
    from lineintercept import _kernels
    a = np.array(_kernels.cost_and_gradient(X, Y, k.a, k.b, k.c, lo, hi, s0, s1))
    b = np.array(_kernels_py.cost_and_gradient(X, Y, k.a, k.b, k.c, lo, hi, s0, s1))
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)
    if Y > 0.01:
        fa = np.array(_kernels.flow_round(X, Y, k.a, k.b, k.c, lo, hi, s0, s1, 16, 1.0))
        fb = np.array(_kernels_py.flow_round(X, Y, k.a, k.b, k.c, lo, hi, s0, s1, 16, 1.0))
        assert np.allclose(fa, fb, rtol=1e-11, atol=1e-11)
