"""Pure-Python/numpy versions of the compiled kernels."""

from __future__ import annotations

from math import gcd

import numpy as np


def reduce_columns(cols: list[list[tuple[int, int]]]) -> tuple[int, bool]:
    """Rank of a sparse integer matrix by lowest-pivot column reduction.

    ``cols[j]`` lists ``(row, value)`` pairs. Returns ``(rank, unit)`` where
    ``unit`` is True when every pivot was +-1, in which case all column
    operations were unimodular and the elementary divisors are all 1.
    """
    owner: dict[int, dict[int, int]] = {}
    rank = 0
    unit = True
    for col in cols:
        c = {r: v for r, v in col if v}
        while c:
            low = max(c)
            other = owner.get(low)
            if other is None:
                break
            a = c[low]
            b = other[low]
            if a % b == 0:
                m = a // b
                for r, v in other.items():
                    nv = c.get(r, 0) - m * v
                    if nv:
                        c[r] = nv
                    else:
                        c.pop(r, None)
            else:
                unit = False
                for r in list(c):
                    c[r] *= b
                for r, v in other.items():
                    nv = c.get(r, 0) - a * v
                    if nv:
                        c[r] = nv
                    else:
                        c.pop(r, None)
                g = 0
                for v in c.values():
                    g = gcd(g, v)
                if g > 1:
                    c = {r: v // g for r, v in c.items()}
        if c:
            low = max(c)
            if abs(c[low]) != 1:
                unit = False
            owner[low] = c
            rank += 1
    return rank, unit


def point_segment_distances(points: np.ndarray, segments: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """For each point, Euclidean distance to the nearest segment ``(x0, y0, x1, y1)``."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    segments = np.ascontiguousarray(segments, dtype=np.float64)
    out = np.empty(len(points))
    a = segments[:, :2]
    ab = segments[:, 2:] - a
    denom = np.einsum("ij,ij->i", ab, ab)
    denom = np.where(denom > 0, denom, 1.0)
    for s in range(0, len(points), chunk):
        p = points[s : s + chunk, None, :]
        t = np.clip(np.einsum("nmj,mj->nm", p - a[None], ab) / denom[None], 0.0, 1.0)
        proj = a[None] + t[..., None] * ab[None]
        d2 = np.einsum("nmj,nmj->nm", p - proj, p - proj)
        out[s : s + chunk] = np.sqrt(d2.min(axis=1))
    return out


def point_cloud_distances(points: np.ndarray, cloud: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """For each point, Euclidean distance to the nearest point of ``cloud``."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    cloud = np.ascontiguousarray(cloud, dtype=np.float64)
    out = np.empty(len(points))
    for s in range(0, len(points), chunk):
        diff = points[s : s + chunk, None, :] - cloud[None]
        out[s : s + chunk] = np.sqrt(np.einsum("nmj,nmj->nm", diff, diff).min(axis=1))
    return out
