"""Select the compiled kernels when available, else the numpy fallback.

``use_backend("python")`` forces the fallback (used by tests and the
benchmark); ``use_backend("compiled")`` raises if the extension is missing.
"""
from contextlib import contextmanager

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active = _compiled or _kernels_py


def available() -> list[str]:
    return ["compiled", "python"] if _compiled is not None else ["python"]


def backend_name() -> str:
    return "compiled" if _active is _compiled else "python"


def use_backend(name: str) -> None:
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


@contextmanager
def backend(name: str):
    """Temporarily switch backend; restores the previous one on exit."""
    global _active
    prev = _active
    use_backend(name)
    try:
        yield
    finally:
        _active = prev


def region_moments(X, Y, b, lo, hi, s0, s1):
    return _active.region_moments(X, Y, b, lo, hi, s0, s1)


def cost_and_gradient(X, Y, a, b, c, lo, hi, s0, s1):
    return _active.cost_and_gradient(X, Y, a, b, c, lo, hi, s0, s1)


def flow_round(X, Y, a, b, c, lo, hi, s0, s1, substeps, duration=1.0):
    return _active.flow_round(X, Y, a, b, c, lo, hi, s0, s1, int(substeps), duration)
