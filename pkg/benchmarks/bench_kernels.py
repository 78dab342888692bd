"""Compiled vs pure-numpy kernels: per-call timings and an end-to-end descent.

    python benchmarks/bench_kernels.py [--repeat N] [--json PATH]
"""
import argparse
import json
import time

import numpy as np

from lineintercept import density as dens
from lineintercept import kernels
from lineintercept.lloyd import Configuration, lloyd_descend
from lineintercept.single_vehicle import GameParams, time_coeffs


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    d = dens.ramp_density(1.0)
    k = time_coeffs(0.5)
    lo, hi, s0, s1 = d.panels((0.1, 0.8))
    g = GameParams(1.0, 0.5)
    c0 = Configuration([(0.2, 0.2), (0.6, 0.1), (0.4, 2.5)], g)
    return {
        "cost_and_gradient x1000": lambda: [
            kernels.cost_and_gradient(0.4, 0.3, k.a, k.b, k.c, lo, hi, s0, s1) for _ in range(1000)],
        "flow_round x100": lambda: [
            kernels.flow_round(0.4, 0.3, k.a, k.b, k.c, lo, hi, s0, s1, 64) for _ in range(100)],
        "lloyd_descend (3 vehicles, 80 rounds)": lambda: lloyd_descend(c0, d, rounds=80),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)

    results = {}
    for name in kernels.available():
        with kernels.backend(name):
            results[name] = {case: _best_of(fn, args.repeat) for case, fn in cases().items()}

    width = max(len(c) for c in cases())
    print(f"{'case':<{width}}  " + "  ".join(f"{b:>10}" for b in results) + "   speedup")
    for case in cases():
        row = [results[b][case] for b in results]
        speed = row[-1] / row[0] if len(row) > 1 else np.nan
        print(f"{case:<{width}}  " + "  ".join(f"{t:9.4f}s" for t in row) + f"   {speed:6.1f}x")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
