"""Compiled vs pure-Python kernels on realistic inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--instance PATH]

Column reduction runs on the boundary matrices of the staircase
triangulation of Sigma; the distance kernels run on an amoeba sample of the
planar instance.
"""

from __future__ import annotations

import argparse
import math
import time
from pathlib import Path

import numpy as np

from syzmodel import _kernels_py as pure
from syzmodel.amoeba import LaurentInstance, sample_amoeba, spine_net, spine_segments
from syzmodel.homology import _boundary_columns, close_downwards
from syzmodel.instance import load_instance
from syzmodel.sigma import build_sigma

try:
    from syzmodel import _kernels as compiled
except ImportError:
    compiled = None

ROOT = Path(__file__).resolve().parent.parent


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def reduction_cases(path: Path) -> list[tuple[str, list]]:
    inst = load_instance(path)
    sg = build_sigma(inst.S, inst.T)
    graded = close_downwards(sg.staircase_simplices())
    return [(f"{inst.name} d{k}", _boundary_columns(graded[k - 1], graded[k])) for k in range(1, len(graded))]


def distance_case(path: Path):
    inst = load_instance(path)
    li = LaurentInstance.from_heights(inst.lam, math.e**6)
    window = (-3, -3, 3, 3)
    sample = sample_amoeba(li, window, (300, 48), margin=1.0)
    segs = spine_segments(inst.lam, (-4, -4, 4, 4))
    net = spine_net(spine_segments(inst.lam, window), 0.02)
    return sample.points, segs, net


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--instance", action="append", default=None)
    args = ap.parse_args()
    if compiled is None:
        raise SystemExit("compiled extension not built; run pip install -e . --no-build-isolation")
    paths = [Path(p) for p in args.instance] if args.instance else [ROOT / "instances/pyramid_d3.json", ROOT / "instances/simplex_d4.json"]

    print(f"{'kernel':<34}{'size':>10}{'python s':>12}{'compiled s':>12}{'speedup':>9}")
    for path in paths:
        for name, cols in reduction_cases(path):
            assert pure.reduce_columns(cols) == compiled.reduce_columns(cols)
            tp = best_of(lambda: pure.reduce_columns(cols), args.repeat)
            tc = best_of(lambda: compiled.reduce_columns(cols), args.repeat)
            print(f"{'reduce ' + name:<34}{len(cols):>10}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}")

    pts, segs, net = distance_case(ROOT / "instances/cubic_d2.json")
    a, b = pure.point_segment_distances(pts, segs), compiled.point_segment_distances(pts, segs)
    assert np.allclose(a, b, atol=1e-12)
    tp = best_of(lambda: pure.point_segment_distances(pts, segs), args.repeat)
    tc = best_of(lambda: compiled.point_segment_distances(pts, segs), args.repeat)
    print(f"{'point-segment distances':<34}{len(pts):>10}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}")
    a, b = pure.point_cloud_distances(net, pts), compiled.point_cloud_distances(net, pts)
    assert np.allclose(a, b, atol=1e-12)
    tp = best_of(lambda: pure.point_cloud_distances(net, pts), args.repeat)
    tc = best_of(lambda: compiled.point_cloud_distances(net, pts), args.repeat)
    print(f"{'net-to-cloud distances':<34}{len(net):>10}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}")


if __name__ == "__main__":
    main()
