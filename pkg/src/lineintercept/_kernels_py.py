"""Pure-numpy implementation of the quadrature kernels.

Every function here has a twin with the same signature in ``_kernels.pyx``.
Both integrate against a density given as linear panels ``s0 + s1*x`` on
``[lo[k], hi[k]]``.

Near the vehicle abscissa ``X`` the integrand ``sqrt(b*(X-x)**2 + Y**2)``
has complex singularities at distance ~``Y`` from the real axis, so each
panel is cut at ``X`` and at ``X +/- Y*4**k``; with Gauss-Legendre on every
piece this keeps the error near machine precision for all ``Y >= 0``.
"""
import math

import numpy as np

GL_ORDER = 20
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)
GRADE_RATIO = 4.0
MAX_GRADES = 60


def _cuts(a, b, X, Y):
    cuts = [a, b]
    if a < X < b:
        cuts.append(X)
    if Y > 0.0:
        span = b - a
        g = Y
        for _ in range(MAX_GRADES):
            if g >= span + abs(X - 0.5 * (a + b)):
                break
            for c in (X - g, X + g):
                if a < c < b:
                    cuts.append(c)
            g *= GRADE_RATIO
    cuts.sort()
    return cuts


def _pieces(X, Y, lo, hi, s0, s1):
    pa, pb, c0, c1 = [], [], [], []
    for a, b, u0, u1 in zip(lo, hi, s0, s1):
        cuts = _cuts(a, b, X, Y)
        for p, q in zip(cuts[:-1], cuts[1:]):
            if q > p:
                pa.append(p)
                pb.append(q)
                c0.append(u0)
                c1.append(u1)
    return np.array(pa), np.array(pb), np.array(c0), np.array(c1)


def region_moments(X, Y, b, lo, hi, s0, s1):
    """Return ``(mass, I_r, I_dx, I_inv)`` over the panels.

    ``mass = int phi``, ``I_r = int r*phi``, ``I_dx = int (X-x)/r*phi``,
    ``I_inv = int phi/r`` with ``r = sqrt(b*(X-x)**2 + Y**2)``. Nodes with
    ``r == 0`` contribute zero to ``I_dx`` and ``I_inv``.
    """
    pa, pb, c0, c1 = _pieces(X, Y, lo, hi, s0, s1)
    if pa.size == 0:
        return 0.0, 0.0, 0.0, 0.0
    half = 0.5 * (pb - pa)
    x = (0.5 * (pa + pb))[:, None] + half[:, None] * GL_NODES[None, :]
    w = (half[:, None] * GL_WEIGHTS[None, :]) * (c0[:, None] + c1[:, None] * x)
    dx = X - x
    r = np.sqrt(b * dx * dx + Y * Y)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(r > 0.0, 1.0 / r, 0.0)
    return (float(w.sum()), float((w * r).sum()), float((w * dx * inv).sum()),
            float((w * inv).sum()))


def cost_and_gradient(X, Y, a, b, c, lo, hi, s0, s1):
    """Expected generic cost over the panels and its gradient."""
    mass, i_r, i_dx, i_inv = region_moments(X, Y, b, lo, hi, s0, s1)
    return a * i_r - c * Y * mass, a * b * i_dx, a * Y * i_inv - c * mass


def _field(X, Y, a, b, c, lo, hi, s0, s1):
    mass, _, i_dx, i_inv = region_moments(X, max(Y, 0.0), b, lo, hi, s0, s1)
    gx = a * b * i_dx
    gy = a * max(Y, 0.0) * i_inv - c * mass
    n = math.hypot(gx, gy)
    if n > 1.0:
        gx /= n
        gy /= n
    return -gx, -gy


def flow_round(X, Y, a, b, c, lo, hi, s0, s1, substeps, duration=1.0):
    """Integrate the saturated gradient flow over a frozen region with RK4.

    Returns the final ``(X, Y)``; ``Y`` is clamped at zero after each step.
    """
    h = duration / substeps
    for _ in range(substeps):
        k1 = _field(X, Y, a, b, c, lo, hi, s0, s1)
        k2 = _field(X + 0.5 * h * k1[0], Y + 0.5 * h * k1[1], a, b, c, lo, hi, s0, s1)
        k3 = _field(X + 0.5 * h * k2[0], Y + 0.5 * h * k2[1], a, b, c, lo, hi, s0, s1)
        k4 = _field(X + h * k3[0], Y + h * k3[1], a, b, c, lo, hi, s0, s1)
        X += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        Y += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        if Y < 0.0:
            Y = 0.0
    return X, Y
