"""CSV, JSON and SVG writers for traces and partitions.

Floats are written with ``repr`` so identical runs give identical bytes.
Vehicle indices are zero-based everywhere.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from .lloyd import LloydTrace
from .partition import Partition
from .pursuit import PursuitTrace

PURSUIT_COLUMNS = ("t", "px", "py", "ex", "ey")
LLOYD_COLUMNS = ("round", "vehicle", "x", "y", "grad_norm", "region_length", "expected_time")
DESCENT_COLUMNS = ("iteration", "x", "y", "cost")

SVG_W, SVG_H = 800, 400
PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
           "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(x) -> str:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


def _write_rows(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
    return path


def write_pursuit_csv(trace: PursuitTrace, path, every: int = 1) -> Path:
    rows = trace.rows()
    idx = list(range(0, len(rows), every))
    if idx and idx[-1] != len(rows) - 1:
        idx.append(len(rows) - 1)
    return _write_rows(path, PURSUIT_COLUMNS, (rows[i] for i in idx))


def write_descent_csv(trace, path) -> Path:
    return _write_rows(path, DESCENT_COLUMNS,
                       ((n, p.X, p.Y, f) for n, (p, f) in enumerate(trace)))


def lloyd_rows(trace: LloydTrace):
    for rec in trace.records:
        for i, p in enumerate(rec.positions):
            yield (rec.round, i, p.X, p.Y, rec.grad_norms[i], rec.partition[i].length,
                   rec.expected_time)


def write_lloyd_csv(trace: LloydTrace, path) -> Path:
    return _write_rows(path, LLOYD_COLUMNS, lloyd_rows(trace))


def partitions_json(trace: LloydTrace) -> list[dict]:
    return [{"round": rec.round, "partition": rec.partition.to_json()} for rec in trace.records]


def partition_svg(partition: Partition, positions, title: str = "", density=None) -> str:
    """Generator, vehicles and colour-coded dominance regions on an 800x400 canvas
    spanning ``[0, W] x [0, 1.2*maxY]``."""
    W = partition.width
    max_y = max([p[1] for p in positions] + [1e-9])
    top = 1.2 * max_y

    def sx(x):
        return SVG_W * x / W

    def sy(y):
        return SVG_H - SVG_H * y / top

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" '
           f'viewBox="0 0 {SVG_W} {SVG_H}">',
           f'<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="white"/>']
    if title:
        out.append(f'<text x="8" y="18" font-family="sans-serif" font-size="14">{title}</text>')
    if density is not None:
        peak = max(density.values)
        pts = " ".join(f"{sx(x):.3f},{SVG_H - 0.25 * SVG_H * v / peak:.3f}"
                       for x, v in density.breakpoints)
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1"/>')
    out.append(f'<line x1="0" y1="{SVG_H}" x2="{SVG_W}" y2="{SVG_H}" stroke="black" '
               f'stroke-width="2"/>')
    for i, region in enumerate(partition.regions):
        col = PALETTE[i % len(PALETTE)]
        for iv in region:
            out.append(f'<line x1="{sx(iv.lo):.3f}" y1="{SVG_H - 4}" x2="{sx(iv.hi):.3f}" '
                       f'y2="{SVG_H - 4}" stroke="{col}" stroke-width="8"/>')
    for i, p in enumerate(positions):
        col = PALETTE[i % len(PALETTE)]
        out.append(f'<circle cx="{sx(p[0]):.3f}" cy="{sy(p[1]):.3f}" r="6" fill="{col}">'
                   f'<title>vehicle {i}: ({p[0]!r}, {p[1]!r})</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
