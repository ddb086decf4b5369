"""Benchmark the compiled grid-propagation kernel against the numpy fallback.

Runs the N-1 -> N propagation step on identical inputs with both
backends, reports wall times and the speedup, and checks that the
outputs agree to floating-point accuracy.

Usage: python benchmarks/bench_propagate.py [--grid 400] [--phi 64] [--steps 4]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from sectorwalk.backends import numpy_backend
from sectorwalk.core import WalkConfig
from sectorwalk.recursion import compute_grid, default_grid_axes, _phi_rule

try:
    from sectorwalk.backends import _gridprop as compiled_backend
except ImportError:
    compiled_backend = None


def bench(impl, prev, radii, angles, max_angle, phi_nodes, phi_weights, repeats):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = impl.propagate_density(
            prev.density, prev.radii, prev.angles, radii, angles, max_angle, phi_nodes, phi_weights
        )
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=400, help="grid points per axis")
    ap.add_argument("--phi", type=int, default=64, help="quadrature nodes for the step angle")
    ap.add_argument("--steps", type=int, default=4, help="target step count N of the benchmarked hop")
    ap.add_argument("--a", type=float, default=0.5, help="step-angle half-width")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    prev = compute_grid(
        WalkConfig(n_steps=args.steps - 1, max_angle=args.a), args.grid, args.grid, args.phi
    )
    cfg = WalkConfig(n_steps=args.steps, max_angle=args.a)
    radii, angles = default_grid_axes(cfg, args.grid, args.grid)
    phi_nodes, phi_weights = _phi_rule(args.a, args.phi)

    print(f"propagation N={args.steps - 1} -> {args.steps}, grid {args.grid}x{args.grid}, "
          f"{args.phi} angle nodes, a={args.a}")
    t_np, out_np = bench(numpy_backend, prev, radii, angles, args.a, phi_nodes, phi_weights, args.repeats)
    print(f"numpy backend:    {t_np:8.3f} s")
    if compiled_backend is None:
        print("compiled backend: not built")
        return
    t_cy, out_cy = bench(compiled_backend, prev, radii, angles, args.a, phi_nodes, phi_weights, args.repeats)
    print(f"compiled backend: {t_cy:8.3f} s")
    print(f"speedup:          {t_np / t_cy:8.2f}x")
    err = float(np.max(np.abs(out_np - out_cy)))
    print(f"max |difference|: {err:.3e}")
    assert err < 1e-10, "backends disagree"


if __name__ == "__main__":
    main()
