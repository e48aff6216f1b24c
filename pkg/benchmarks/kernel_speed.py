#!/usr/bin/env python3
"""Compare the jitted kernels against their pure numpy/python fallbacks.

Runs each hot kernel through both dispatch paths on the same inputs and
prints a speedup table.  Results are also sanity-checked for agreement so a
regression in either path is caught here too.

Usage: python benchmarks/kernel_speed.py [--n 2000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from curvebench import _accel
from curvebench.delaunay import _triangulate_raw
from curvebench.geom import PointSet
from curvebench.graphs import gabriel, rng, sphere_of_influence
from curvebench.metrics import closest_point_maps
from curvebench.reconstruct import PolyCurve, alpha_disc, hnn_crust, nn_crust
from curvebench.sampler import (SamplingSpec, approx_medial_axis, compute_lfs,
                                dense_sample, epsilon_sample, random_blob_spec)


def timed(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def edge_set(x):
    if isinstance(x, PolyCurve) or hasattr(x, "edges"):
        return {tuple(e) for e in np.asarray(x.edges).tolist()}
    return None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2000, help="points for the graph kernels")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba unavailable; nothing to compare")

    gen = np.random.default_rng(1)
    pts = PointSet(gen.random((args.n, 2)))
    dense = dense_sample(random_blob_spec(3), 256)
    medial = approx_medial_axis(dense)
    sampled, gt = epsilon_sample(compute_lfs(dense, medial), SamplingSpec(0.3))

    curve_big = PolyCurve(
        PointSet(gen.random((400, 2))),
        np.array([[i, i + 1] for i in range(399)]))
    curve_big2 = PolyCurve(
        PointSet(gen.random((400, 2)) + 0.1),
        np.array([[i, i + 1] for i in range(399)]))

    jobs = [
        ("delaunay", lambda: _triangulate_raw(pts.points), None),
        ("rng filter", lambda: rng(pts), edge_set),
        ("gabriel filter", lambda: gabriel(pts), edge_set),
        ("sphere of influence", lambda: sphere_of_influence(pts), edge_set),
        ("nn-crust", lambda: nn_crust(pts), edge_set),
        ("hnn-crust", lambda: hnn_crust(pts), edge_set),
        ("alpha-disc", lambda: alpha_disc(pts, 2.0 / np.sqrt(args.n)), edge_set),
        ("medial axis probe", lambda: approx_medial_axis(dense), None),
        ("closest-point maps",
         lambda: closest_point_maps(curve_big, curve_big2, 0.002), None),
    ]

    print(f"{'kernel':24s} {'numba':>10s} {'fallback':>10s} {'speedup':>8s}")
    for name, fn, digest in jobs:
        _accel.set_enabled(True)
        fn()  # compile before timing
        t_jit, out_jit = timed(fn, args.repeat)
        _accel.set_enabled(False)
        t_py, out_py = timed(fn, args.repeat)
        _accel.set_enabled(True)
        if digest is not None and digest(out_jit) != digest(out_py):
            raise AssertionError(f"{name}: paths disagree")
        if name == "closest-point maps":
            same = all(np.array_equal(a.dist2, b.dist2)
                       for a, b in zip(out_jit, out_py))
            if not same:
                raise AssertionError("closest-point maps: paths disagree")
        print(f"{name:24s} {t_jit * 1e3:9.2f}ms {t_py * 1e3:9.2f}ms "
              f"{t_py / t_jit:7.1f}x")


if __name__ == "__main__":
    main()
