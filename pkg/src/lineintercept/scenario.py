"""Scenario files: UTF-8 JSON documents describing one run.

Example::

    {
      "mode": "multi-lloyd",
      "width": 1.0,
      "target_speed": 0.5,
      "density": {"type": "piecewise_linear", "points": [[0, 0], [0.25, 2], [1, 0]]},
      "positions": [[0.2, 0.2], [0.6, 0.1], [0.4, 2.5]],
      "solver": {"rounds": 500, "tol": 1e-7, "substeps": 64},
      "output": {"dir": "out", "svg_every": 10},
      "seed": 0
    }

``positions`` may instead be ``{"random": m, "max_y": 1.0}`` for ``m``
positions drawn uniformly from ``[0, W] x [0, max_y]`` with ``seed``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .density import Density, uniform

MODES = ("single-time", "single-height", "single-intercept-time", "multi-lloyd",
         "simulate-pursuit", "partition-only")

SOLVER_DEFAULTS = {
    "tol": None,
    "max_iter": 10000,
    "rounds": 500,
    "substeps": 64,
    "dt": 1e-4,
    "capture_radius": None,
    "csv_every": 1,
}


class SchemaError(ValueError):
    def __init__(self, field_name: str, msg: str):
        self.field = field_name
        super().__init__(f"{field_name}: {msg}")


@dataclass
class Scenario:
    mode: str
    width: float
    target_speed: float
    density: Density
    positions: list[tuple[float, float]]
    solver: dict
    output_dir: Path
    svg_every: int = 10
    seed: int = 0
    target: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)


def _number(doc, key, where=None):
    name = f"{where}.{key}" if where else key
    if key not in doc:
        raise SchemaError(name, "required field is missing")
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise SchemaError(name, f"expected a finite number, got {val!r}")
    return float(val)


def _density(spec, width) -> Density:
    if not isinstance(spec, dict) or "type" not in spec:
        raise SchemaError("density.type", "required field is missing")
    kind = spec["type"]
    if kind == "uniform":
        return uniform(width)
    if kind == "piecewise_linear":
        if "points" not in spec:
            raise SchemaError("density.points", "required field is missing")
        try:
            return Density(width, spec["points"])
        except ValueError as exc:
            raise SchemaError("density.points", str(exc)) from None
    raise SchemaError("density.type", f"unknown density type {kind!r}")


def _positions(spec, width, seed, mode):
    if isinstance(spec, dict):
        if "random" not in spec:
            raise SchemaError("positions.random", "required field is missing")
        m = spec["random"]
        if not isinstance(m, int) or m < 1:
            raise SchemaError("positions.random", "expected a positive integer")
        max_y = float(spec.get("max_y", width))
        rng = np.random.default_rng(seed)
        pts = rng.uniform([0.0, 0.0], [width, max_y], size=(m, 2))
        return [(float(x), float(y)) for x, y in pts]
    if not isinstance(spec, list):
        raise SchemaError("positions", "expected a list of [x, y] pairs")
    out = []
    for i, p in enumerate(spec):
        if (not isinstance(p, (list, tuple)) or len(p) != 2
                or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)):
            raise SchemaError(f"positions[{i}]", "expected an [x, y] pair of numbers")
        x, y = float(p[0]), float(p[1])
        if y < 0:
            raise SchemaError(f"positions[{i}]", f"Y={y} is below the generator")
        if mode != "simulate-pursuit" and not 0 <= x <= width:
            raise SchemaError(f"positions[{i}]", f"X={x} outside [0, {width}]")
        out.append((x, y))
    return out


def parse_scenario(doc: dict, seed: int | None = None, out_dir=None,
                   svg_every: int | None = None) -> Scenario:
    if not isinstance(doc, dict):
        raise SchemaError("<root>", "scenario must be a JSON object")
    if "mode" not in doc:
        raise SchemaError("mode", "required field is missing")
    mode = doc["mode"]
    if mode not in MODES:
        raise SchemaError("mode", f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    width = _number(doc, "width")
    if width <= 0:
        raise SchemaError("width", "must be positive")
    v = _number(doc, "target_speed")
    if not 0 < v < 1:
        raise SchemaError("target_speed", f"must lie in (0, 1), got {v}")
    wall = mode == "single-intercept-time" or (
        mode == "simulate-pursuit" and doc.get("target", {}).get("strategy") == "wall")
    if wall and v < 1e-9:
        raise SchemaError("target_speed", "intercept-time games need target_speed >= 1e-9")
    if "density" not in doc:
        raise SchemaError("density", "required field is missing")
    dens = _density(doc["density"], width)
    seed = int(doc.get("seed", 0)) if seed is None else int(seed)

    needs = {"single-time": (1, 1), "single-height": (1, 1), "simulate-pursuit": (1, 1),
             "multi-lloyd": (2, None), "partition-only": (1, None)}
    positions = []
    if mode in needs:
        if "positions" not in doc:
            raise SchemaError("positions", "required field is missing")
        positions = _positions(doc["positions"], width, seed, mode)
        lo, hi = needs[mode]
        if len(positions) < lo or (hi is not None and len(positions) > hi):
            want = f"exactly {lo}" if lo == hi else f"at least {lo}"
            raise SchemaError("positions", f"mode {mode} needs {want} position(s)")
    elif "positions" in doc:
        positions = _positions(doc["positions"], width, seed, mode)

    solver = dict(SOLVER_DEFAULTS)
    user_solver = doc.get("solver", {})
    if not isinstance(user_solver, dict):
        raise SchemaError("solver", "expected an object")
    for key, val in user_solver.items():
        if key not in SOLVER_DEFAULTS:
            raise SchemaError(f"solver.{key}", "unknown solver parameter")
        solver[key] = _number(user_solver, key, "solver")
    for key in ("max_iter", "rounds", "substeps", "csv_every"):
        solver[key] = int(solver[key])

    target = {}
    if mode == "simulate-pursuit":
        if "target" not in doc or not isinstance(doc["target"], dict):
            raise SchemaError("target", "required field is missing")
        target = {"x": _number(doc["target"], "x", "target"),
                  "strategy": doc["target"].get("strategy", "height")}
        if target["strategy"] not in ("height", "wall"):
            raise SchemaError("target.strategy", "expected 'height' or 'wall'")

    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise SchemaError("output", "expected an object")
    out = Path(out_dir if out_dir is not None else output.get("dir", "out"))
    every = int(svg_every if svg_every is not None else output.get("svg_every", 10))
    if every < 1:
        raise SchemaError("output.svg_every", "must be at least 1")
    return Scenario(mode, width, v, dens, positions, solver, out, every, seed, target, doc)


def load_scenario(path, **overrides) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError("<file>", f"invalid JSON: {exc}") from None
    return parse_scenario(doc, **overrides)
