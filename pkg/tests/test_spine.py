from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import INSTANCES, RUNNING
from syzmodel.errors import EmptyOrLowerDim, NotGenericHeights, ValidationError
from syzmodel.instance import load_instance
from syzmodel.polyhedra import Polyhedron, height_dual, lattice_points
from syzmodel.spine import (
    check_qe_item1,
    check_qe_item2,
    check_qe_item3,
    combinatorial_equivalence,
    corner_locus_segments,
    equivalence_threshold,
    legendre_eval,
    q_IJ_polyhedron,
    qe_report,
    spine,
    truncate,
    verify_qcell_minkowski,
    w_perp,
)
from syzmodel.subdivision import HeightFunction

CENTRAL_VERTICES = {(-1, -1), (-1, 0), (Fraction(-1, 3), Fraction(-5, 3)), (1, 1)}


@pytest.fixture(scope="module")
def running_spine(cubic, running_lambda):
    return spine(cubic, running_lambda)


@pytest.fixture(scope="module")
def pyramid_spine(corpus):
    inst = corpus["pyramid_d3"]
    return spine(inst.delta, inst.lam)


@pytest.mark.parametrize(
    "n, value, arg",
    [
        ((0, 0), 2, {(0, 0)}),
        ((-3, -3), 6, {(-1, -1)}),
        ((-1, -1), 2, {(0, 0), (-1, -1), (-1, 0)}),
        ((5, 0), 11, {(2, -1)}),
    ],
)
def test_legendre_examples(running_lambda, n, value, arg):
    v, a = legendre_eval(running_lambda, n)
    assert (v, set(a)) == (value, arg)


@given(st.tuples(st.fractions(-10, 10, max_denominator=7), st.fractions(-10, 10, max_denominator=7)))
@settings(max_examples=200, deadline=None)
def test_legendre_matches_oracle(n):
    assert legendre_eval(HeightFunction(RUNNING), n) == oracles.legendre(RUNNING, n)


def test_zero_heights_give_the_normal_fan(cubic):
    lam = HeightFunction({p: 0 for p in lattice_points(cubic)})
    for n in [(1, 0), (-2, 3), (0, 0)]:
        _, arg = legendre_eval(lam, n)
        best = max(sum(a * b for a, b in zip(m, n)) for m in lattice_points(cubic))
        assert arg == {m for m in lattice_points(cubic) if sum(a * b for a, b in zip(m, n)) == best}


def test_running_spine_counts(running_spine):
    dims = [c.dim for c in running_spine.cells]
    assert (dims.count(0), dims.count(1), dims.count(2)) == (4, 8, 5)
    top = [c for c in running_spine.cells if c.dim == 2]
    assert sum(c.bounded for c in top) == 1
    central = running_spine.cell([(0, 0)])
    assert {tuple(v) for v in central.polyhedron.points} == CENTRAL_VERTICES
    assert central.polyhedron.same_set(height_dual(running_spine.delta, running_spine.lam))


def test_cell_dimension_and_order_reversal(running_spine, pyramid_spine):
    for sp in (running_spine, pyramid_spine):
        d = sp.delta.d
        cells = {c.label: c for c in sp.cells}
        for c in sp.cells:
            assert c.dim == d - (len(c.label) - 1)
            assert c.bounded == ((0,) * d in c.label)
        for a, b in itertools.combinations(sp.cells, 2):
            if set(a.label) < set(b.label):
                assert a.polyhedron.contains_polyhedron(b.polyhedron)
                F = a.polyhedron.face_containing([b.polyhedron.relative_interior_point()])
                assert a.polyhedron.face_polyhedron(F).same_set(b.polyhedron)
        assert len(cells) == len(sp.cells)


def test_open_cells_partition_the_plane(running_spine):
    rng = random.Random(20261015)
    opens = {c.label: q_IJ_polyhedron(running_spine.lam, c.label) for c in running_spine.cells}
    for _ in range(10_000):
        n = (Fraction(rng.randint(-40, 40), rng.randint(1, 4)), Fraction(rng.randint(-40, 40), rng.randint(1, 4)))
        hits = [lab for lab, Q in opens.items() if Q.contains(n)]
        assert hits == [running_spine.locate(n).label]


def test_minkowski_description(running_spine, pyramid_spine):
    for sp in (running_spine, pyramid_spine):
        assert all(verify_qcell_minkowski(sp, c) for c in sp.cells)


def test_qe_items_on_running_instance(running_spine, corpus):
    inst = corpus["cubic_d2"]
    rep = qe_report(running_spine, inst.delta_dual.vertices)
    assert rep.ok


def test_qe_item1_rejects_non_labels(running_spine):
    assert q_IJ_polyhedron(running_spine.lam, [(-1, 2), (2, -1), (-1, -1)]).is_empty
    assert check_qe_item1(running_spine, max_size=3)


def test_qe_item2_on_pyramid(pyramid_spine):
    vs = sorted({m for lab in pyramid_spine.labels for m in lab if any(m)})
    assert all(check_qe_item2(pyramid_spine, v) for v in vs)


def test_w_perp_and_truncation(cubic):
    assert w_perp((-1, 0), lattice_points(cubic)) == [(-1, -1), (-1, 0), (-1, 1), (-1, 2)]
    tr = truncate(cubic, (-1, 0))
    assert tr.hull.contains((0, 0)) and not tr.hull.relint_contains((0, 0))
    with pytest.raises(EmptyOrLowerDim):
        truncate(cubic, (5, 5), [(0, 0)])


def _separates(y, p, twisted, rays) -> bool:
    """Exact certificate that ``p`` lies outside ``twisted + cone(rays)``."""
    dot = lambda a, b: sum(Fraction(x) * Fraction(z) for x, z in zip(a, b))  # noqa: E731
    return all(dot(y, r) <= 0 for r in rays) and dot(y, p) > max(dot(y, q) for q in twisted.points)


def test_item3_counterexample_on_pyramid(corpus, pyramid_spine):
    """For these generic heights the truncated cell is strictly larger than the predicted sum."""
    inst = corpus["pyramid_d3"]
    twisted = height_dual(inst.delta, inst.lam)
    failing = []
    for w in inst.delta_dual.vertices:
        r = check_qe_item3(pyramid_spine, w)
        assert r.superset and r.contains_cone and r.origin_on_boundary and r.w_in_normal_cone
        if r.equal:
            continue
        failing.append(w)
        tr = truncate(inst.delta, w, inst.lam.domain)
        NC_rays = [a for i, (a, _) in enumerate(tr.hull.inequalities) if i in tr.hull.tight_facets((0, 0, 0))]
        for p in r.extra_vertices:
            # the extra vertex is in Q(0) but a separating functional keeps it out of the sum
            assert q_IJ_polyhedron(inst.lam, [(0, 0, 0)], tr.removed).closure.contains(p)
            assert any(_separates(a, p, twisted, NC_rays) for a, _ in _sum_facets(twisted, NC_rays))
    assert sorted(failing) == [(-1, -1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, 1)]


def _sum_facets(twisted, rays):
    S = Polyhedron.from_vrep(twisted.points, rays, d=twisted.d)
    return S.inequalities


def test_item3_depends_on_the_heights():
    inst = load_instance(INSTANCES / "pyramid_d3.json", seed=2)
    sp = spine(inst.delta, inst.lam)
    assert all(check_qe_item3(sp, w).equal for w in inst.delta_dual.vertices)


def test_combinatorial_equivalence(running_lambda):
    I = [(0, 0)]
    assert combinatorial_equivalence(running_lambda, 0, Fraction(1, 2), I)
    assert not combinatorial_equivalence(running_lambda, 0, 1, I)
    t = equivalence_threshold(running_lambda, I)
    assert abs(t - Fraction(2, 3)) < Fraction(1, 10**9)


def test_non_generic_heights(cubic):
    lam = HeightFunction({**{p: 0 for p in cubic.vertices}, (0, 0): 1, (0, -1): 1})
    with pytest.raises(NotGenericHeights):
        spine(cubic, lam)


def test_q_ij_arguments(running_lambda):
    with pytest.raises(ValidationError):
        q_IJ_polyhedron(running_lambda, [])
    with pytest.raises(ValidationError):
        q_IJ_polyhedron(running_lambda, [(0, 0)], [(0, 0)])


def test_corner_locus_segments(running_lambda):
    segs = corner_locus_segments(running_lambda, (-5, -5, 5, 5))
    assert len(segs) == 8
    for a, b in segs:
        mid = tuple((x + y) / 2 for x, y in zip(a, b))
        assert len(legendre_eval(running_lambda, mid)[1]) >= 2
