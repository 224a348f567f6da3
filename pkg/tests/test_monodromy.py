from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syzmodel.errors import InvalidLoop, NonPrimitive, NotAdjacent, NotDiscriminantVertex, PairingViolation
from syzmodel.intmat import IntegerMatrix, bareiss_det, elementary_divisors
from syzmodel.monodromy import (
    Atlas,
    chart,
    chart_u,
    chart_v,
    is_unipotent_square_zero,
    local_monodromy,
    mirror_transition,
    mirror_transition_check,
    monodromy,
    primary_formula,
    primary_loops,
    transition,
    transpose_inverse,
)
from syzmodel.polyhedra import _dot

I2 = IntegerMatrix.identity(2)
primitive3 = st.tuples(*[st.integers(-4, 4)] * 3).filter(lambda v: math.gcd(*v) == 1)


@pytest.mark.parametrize("v", [(1, 0), (0, -1), (1, 1, 1), (2, -1, 3), (1, 2, 3, 5)])
def test_charts_are_unimodular(v):
    U = chart_u(v)
    assert all(_dot(b, v) == 0 for b in U.basis)
    assert all(x == 1 for x in elementary_divisors([list(b) for b in U.basis]))
    V = chart_v(v)
    assert abs(bareiss_det([list(c) for c in V.basis] + [list(v)])) == 1
    assert chart(v, "U") == U and chart(v, "V") == V


def test_non_primitive_vertex():
    with pytest.raises(NonPrimitive):
        chart_u((2, 0))
    with pytest.raises(NonPrimitive):
        chart_v((2, 2, 0))
    with pytest.raises(ValueError):
        chart((1, 0), "W")


def test_planar_transition_is_trivial():
    assert transition((-1, -1), (0, -1)) == IntegerMatrix.of([[1]])


def test_transition_needs_adjacency():
    with pytest.raises(NotAdjacent):
        transition((1, 0, 0), (0, 1, 0))


@given(primitive3, primitive3)
@settings(max_examples=80, deadline=None)
def test_transition_det_one(v, w):
    if _dot(v, w) != 1:
        return
    assert transition(v, w).det() == 1


def test_constant_and_degenerate_loops(corpus):
    inst = corpus["pyramid_d3"]
    sg_edges = [(v, w) for v in set().union(*inst.S.cells) for w in set().union(*inst.T.cells) if _dot(v, w) == 1]
    v, w = sg_edges[0]
    assert monodromy([v]) == I2
    assert monodromy([v, w, v]) == I2
    # w1 = w0 collapses the primary loop
    assert monodromy([v, w, v, w, v]) == I2
    with pytest.raises(InvalidLoop):
        monodromy([v, w])
    with pytest.raises(PairingViolation):
        primary_formula(v, w, v, (0, 0, 0))


def _edges(inst):
    vs = sorted(set().union(*inst.S.cells))
    ws = sorted(set().union(*inst.T.cells))
    return [(v, w) for v in vs for w in ws if _dot(v, w) == 1]


def test_primary_loops_closed_form_d3(corpus):
    inst = corpus["pyramid_d3"]
    loops = primary_loops(_edges(inst))
    assert len(loops) == 192
    atlas = Atlas()
    for v0, w0, v1, w1 in loops:
        M = atlas.monodromy([v0, w0, v1, w1, v0])
        assert M == atlas.primary_formula(v0, w0, v1, w1)
        assert M.det() == 1 and is_unipotent_square_zero(M)


def test_loop_algebra(corpus):
    inst = corpus["pyramid_d3"]
    loops = primary_loops(_edges(inst))
    rng = random.Random(0)
    atlas = Atlas()
    for _ in range(30):
        v0, w0, v1, w1 = rng.choice(loops)
        a = [v0, w0, v1, w1, v0]
        # reversal inverts
        assert atlas.monodromy(a[::-1]) == atlas.monodromy(a).inverse()
        # concatenation composes right to left
        cands = [l for l in loops if l[0] == v0]
        u0, x0, u1, x1 = rng.choice(cands)
        b = [u0, x0, u1, x1, u0]
        assert atlas.monodromy(a + b[1:]) == atlas.monodromy(b) @ atlas.monodromy(a)


def test_base_point_change_conjugates(corpus):
    inst = corpus["pyramid_d3"]
    atlas = Atlas()
    for v0, w0, v1, w1 in primary_loops(_edges(inst))[:40]:
        # the same loop started at v1 is conjugate by the path v0 -> w0 -> v1
        M0 = atlas.monodromy([v0, w0, v1, w1, v0])
        M1 = atlas.monodromy([v1, w1, v0, w0, v1])
        P = atlas.transition(v1, w0).inverse() @ atlas.transition(v0, w0)
        assert M1 @ P == P @ M0


@pytest.mark.slow
def test_primary_loops_closed_form_d4(corpus):
    inst = corpus["simplex_d4"]
    loops = primary_loops(_edges(inst))
    assert len(loops) == 8400
    atlas = Atlas()
    assert all(atlas.monodromy([a, b, c, d, a]) == atlas.primary_formula(a, b, c, d) for a, b, c, d in loops)


def test_local_monodromy_d3(sigmas):
    sg = sigmas["pyramid_d3"]
    for s, t in sg.discriminant_vertices:
        lm = local_monodromy(s, t)
        k, l = lm.type
        assert len(lm.generators) == k * l
        assert lm.commute and lm.square_zero
        assert lm.index == lm.paper_index == lm.tensor_index
        assert lm.rank == 1


def test_local_monodromy_index_with_volume_two():
    # a lattice segment of length 2 against a unimodular segment in d = 3
    sigma = [(1, -1, 0), (1, 1, 0)]
    tau = [(1, 0, 0), (1, 0, 1)]
    lm = local_monodromy(sigma, tau)
    assert (lm.vol_sigma, lm.vol_tau) == (2, 1)
    assert lm.index == 2 == lm.paper_index == lm.tensor_index


def test_local_monodromy_index_type_one_two():
    # with k = 1, l = 2 the span of the generators has index vol(sigma)^l * vol(tau)^k
    sigma = [(1, -1, 0, 0), (1, 1, 0, 0)]
    tau = [(1, 0, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1)]
    lm = local_monodromy(sigma, tau)
    assert lm.type == (1, 2)
    assert lm.rank == 2 and lm.commute and lm.square_zero
    assert lm.index == lm.tensor_index == 4
    assert lm.paper_index == 2


def test_local_monodromy_rejects_non_discriminant():
    with pytest.raises(NotDiscriminantVertex):
        local_monodromy([(1, 0, 0)], [(1, 0, 0), (1, 1, 0)])
    with pytest.raises(NotDiscriminantVertex):
        local_monodromy([(1, 0, 0), (0, 1, 0)], [(1, 0, 0), (1, 1, 0)])


@pytest.mark.slow
def test_local_monodromy_d4(sigmas):
    sg = sigmas["simplex_d4"]
    atlas = Atlas()
    for s, t in sg.discriminant_vertices:
        lm = local_monodromy(s, t, atlas)
        k, l = lm.type
        assert len(lm.generators) == k * l and lm.rank == k * l
        assert lm.commute and lm.square_zero
        assert lm.index == lm.paper_index == 1


def test_mirror_transitions(corpus):
    for name in ("cubic_d2", "pyramid_d3"):
        assert mirror_transition_check(_edges(corpus[name]))
    f = transition((1, 0, 0), (1, 1, 0))
    assert transpose_inverse(transpose_inverse(f)) == f
    assert mirror_transition((1, 0, 0), (1, 1, 0)) == f.T
