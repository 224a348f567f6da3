from __future__ import annotations

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from syzmodel import _kernels_py as pure
from syzmodel import kernels
from syzmodel.homology import graph_homology, homology

try:
    from syzmodel import _kernels as compiled
except ImportError:  # pragma: no cover - exercised only without the extension
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")

# 6-vertex real projective plane and 7-vertex torus
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 2, 4), (2, 3, 5), (1, 3, 4), (1, 3, 5), (2, 4, 5)]
TORUS = [tuple(sorted((i % 7, (i + 1) % 7, (i + 3) % 7))) for i in range(7)] + [
    tuple(sorted((i % 7, (i + 2) % 7, (i + 3) % 7))) for i in range(7)
]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_sphere_as_simplex_boundary(k):
    H = homology(itertools.combinations(range(k + 2), k + 1))
    assert H.betti == (1,) + (0,) * (k - 1) + (1,)
    assert H.torsion_free


def test_projective_plane_has_two_torsion():
    H = homology(RP2)
    assert H.betti == (1, 0, 0)
    assert H.torsion[1] == (2,)
    assert H.euler_characteristic == 1


def test_torus():
    H = homology(TORUS)
    assert H.betti == (1, 2, 1) and H.torsion_free


def test_graph_homology():
    H = graph_homology(range(5), [(i, (i + 1) % 5) for i in range(5)] + [(0, 2)])
    assert H.betti == (1, 2)
    assert graph_homology(["a", "b", "c"], [("a", "b")]).betti == (2, 0)


def _dense(cols, nrows):
    M = [[0] * len(cols) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, v in col:
            M[i][j] = v
    return M


sparse_cols = st.integers(1, 7).flatmap(
    lambda nrows: st.lists(
        st.dictionaries(st.integers(0, nrows - 1), st.integers(-4, 4), max_size=nrows).map(
            lambda d: sorted((r, v) for r, v in d.items() if v)
        ),
        min_size=1,
        max_size=8,
    ).map(lambda cols: (nrows, cols))
)


@given(sparse_cols)
@settings(max_examples=200, deadline=None)
def test_reduction_rank_matches_elimination(case):
    nrows, cols = case
    rank, unit = pure.reduce_columns(cols)
    M = _dense(cols, nrows)
    assert rank == oracles._rank(M)
    if unit and rank:
        assert all(x == 1 for x in oracles.determinantal_divisors(M))


@needs_compiled
@given(sparse_cols)
@settings(max_examples=200, deadline=None)
def test_compiled_reduction_agrees(case):
    _, cols = case
    assert compiled.reduce_columns(cols) == pure.reduce_columns(cols)


@needs_compiled
@given(st.integers(0, 2**31))
@settings(max_examples=30, deadline=None)
def test_compiled_distances_agree(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(int(rng.integers(1, 300)), 2))
    segs = rng.normal(size=(int(rng.integers(1, 20)), 4))
    cloud = rng.normal(size=(int(rng.integers(1, 200)), 2))
    a = pure.point_segment_distances(pts, segs)
    assert np.allclose(a, compiled.point_segment_distances(pts, segs), atol=1e-12)
    b = pure.point_cloud_distances(pts, cloud)
    assert np.allclose(b, compiled.point_cloud_distances(pts, cloud), atol=1e-12)
    brute = np.sqrt(((pts[:, None, :] - cloud[None]) ** 2).sum(-1)).min(1)
    assert np.allclose(b, brute, atol=1e-12)


def test_point_segment_distance_examples():
    segs = np.array([[0.0, 0.0, 1.0, 0.0]])
    pts = np.array([[0.5, 2.0], [-3.0, 4.0], [2.0, 0.0]])
    assert np.allclose(kernels.point_segment_distances(pts, segs), [2.0, 5.0, 1.0])


def test_large_entries_fall_back_to_python_ints():
    big = 2**62
    cols = [[(0, big), (1, 1)], [(0, big - 1), (1, 3)]]
    assert kernels.reduce_columns(cols) == pure.reduce_columns(cols) == (2, False)


def test_backend_selection_respects_env():
    code = "from syzmodel import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, SYZMODEL_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    if compiled is not None:
        assert kernels.BACKEND == "compiled"
