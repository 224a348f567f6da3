from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import CUBIC, PYRAMID, RUNNING
from syzmodel.errors import EmptyOrLowerDim, NotProperFace, OriginNotInterior, Unbounded
from syzmodel.polyhedra import (
    LatticePolytope,
    Polyhedron,
    boundary_lattice_points,
    dual_face,
    euclidean_volume,
    f_vector,
    height_dual,
    interior_lattice_points,
    is_reflexive,
    lattice_points,
    minkowski_sum,
    normal_cone,
    polar_dual,
)

SQUARE = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
DIAMOND = [(1, 0), (-1, 0), (0, 1), (0, -1)]


def verts(P):
    return sorted(tuple(Fraction(x) for x in v) for v in P.vertices)


@pytest.mark.parametrize(
    "points, dual",
    [
        (SQUARE, DIAMOND),
        (DIAMOND, SQUARE),
        (CUBIC, [(-1, 0), (0, -1), (1, 1)]),
        (PYRAMID, [(0, 0, -1), (1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)]),
    ],
)
def test_polar_examples(points, dual):
    P = LatticePolytope.from_points(points)
    assert verts(polar_dual(P)) == sorted(tuple(map(Fraction, v)) for v in dual)
    assert is_reflexive(P)


def test_not_reflexive():
    P = LatticePolytope.from_points([(1, 0), (-1, 0), (0, 2), (0, -2)])
    assert not is_reflexive(P)
    assert Fraction(1, 2) in {abs(x) for v in polar_dual(P).vertices for x in v}


def test_polar_needs_interior_origin():
    with pytest.raises(OriginNotInterior):
        polar_dual(LatticePolytope.from_points([(0, 0), (1, 0), (0, 1)]))


def test_unbounded_polytope_rejected():
    with pytest.raises(Unbounded):
        LatticePolytope.from_inequalities([((1, 0), 1), ((0, 1), 1)], d=2)


@pytest.mark.parametrize(
    "points, total, interior",
    [
        ([(0,), (3,)], 4, 2),
        (CUBIC, 10, 1),
        (PYRAMID, 19, 1),
        ([(-1, 0, 0), (1, 0, 0), (0, -1, 0), (0, 1, 0), (0, 0, -1), (0, 0, 1)], 7, 1),
    ],
)
def test_lattice_point_counts(points, total, interior):
    P = LatticePolytope.from_points(points)
    assert len(lattice_points(P)) == total
    assert len(interior_lattice_points(P)) == interior
    assert len(boundary_lattice_points(P)) == total - interior


def test_pyramid_dual_boundary_has_ten_points(pyramid):
    dual = polar_dual(pyramid)
    assert len(boundary_lattice_points(dual)) == 10
    assert lattice_points(dual) == oracles.box_points(dual.vertices)


@pytest.mark.parametrize(
    "points, fv",
    [
        (CUBIC, (3, 3)),
        (PYRAMID, (5, 8, 5)),
        ([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)], (8, 12, 6)),
    ],
)
def test_f_vector_against_facet_intersections(points, fv):
    P = LatticePolytope.from_points(points)
    assert f_vector(P) == fv
    brute = oracles.polytope_faces(points)
    assert tuple(len(brute[k]) for k in range(P.d)) == fv
    mine = {F.points for F in P.faces() if 0 <= F.dim}
    theirs = {frozenset(tuple(int(x) for x in v) for v in S) for k in brute for S in brute[k]}
    assert mine == theirs


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_cube_face_count(d):
    cube = list(itertools.product((-1, 1), repeat=d))
    P = LatticePolytope.from_points(cube)
    # nonempty faces 3^d, plus the empty face
    assert len(P.faces()) == 3**d + 1


@pytest.mark.parametrize("points", [CUBIC, PYRAMID, SQUARE])
def test_dual_face_involution(points):
    P = LatticePolytope.from_points(points)
    Q = polar_dual(P)
    for F in P.faces():
        if not 0 <= F.dim < P.dim:
            continue
        G = dual_face(P, F, Q)
        assert F.dim + G.dim == P.d - 1
        assert dual_face(Q, G, P).points == F.points


def test_dual_face_rejects_improper(pyramid):
    whole = next(F for F in pyramid.faces() if F.dim == 3)
    with pytest.raises(NotProperFace):
        dual_face(pyramid, whole)


def test_normal_cones_of_square():
    P = LatticePolytope.from_points(SQUARE)
    C = normal_cone(P, [(1, 1)])
    assert sorted(C.rays) == [(0, 1), (1, 0)]
    E = normal_cone(P, [(1, 1), (1, -1)])
    assert E.rays == ((1, 0),) and E.dim == 1
    assert normal_cone(P, SQUARE).dim == 0


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_normal_fan_covers_space(extra):
    P = LatticePolytope.from_points(DIAMOND + extra)
    for n in [(1, 0), (0, 1), (-1, 0), (0, -1), (2, 3), (-5, 1)]:
        best = max(sum(a * b for a, b in zip(v, n)) for v in P.vertices)
        arg = [v for v in P.vertices if sum(a * b for a, b in zip(v, n)) == best]
        assert normal_cone(P, arg).contains(n)


def test_minkowski_sum_of_segment_and_ray():
    seg = Polyhedron.from_vrep([(0, 0), (1, 0)])
    ray = Polyhedron.from_vrep([(0, 0)], [(0, 1)])
    S = minkowski_sum(seg, ray)
    assert S.rays == ((0, 1),)
    assert sorted(S.points) == [(0, 0), (1, 0)]
    assert S.contains((Fraction(1, 2), 100)) and not S.contains((2, 0))


def test_height_dual_of_running_heights(cubic):
    Q = height_dual(cubic, RUNNING)
    expected = {(-1, -1), (-1, 0), (Fraction(-1, 3), Fraction(-5, 3)), (1, 1)}
    assert {tuple(v) for v in Q.vertices} == expected
    assert oracles.height_dual_vertices(RUNNING) == {tuple(map(Fraction, v)) for v in expected}


def test_height_dual_degenerate_and_polar(cubic):
    zero = {p: 0 for p in lattice_points(cubic)}
    # with all heights equal the twisted dual is {<m, n> <= 0}, which is just the origin
    with pytest.raises(EmptyOrLowerDim):
        height_dual(cubic, zero)
    ones = {p: (1 if not any(p) else 0) for p in cubic.vertices + ((0, 0),)}
    assert verts(height_dual(cubic, ones)) == verts(polar_dual(cubic))


def test_volume_of_triangle(cubic):
    assert euclidean_volume(cubic) == Fraction(9, 2)


points2 = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=0, max_size=5)
points3 = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)), min_size=0, max_size=4)


@given(points2)
@settings(max_examples=80, deadline=None)
def test_polar_is_involution_2d(extra):
    P = LatticePolytope.from_points(DIAMOND + extra)
    assert verts(polar_dual(polar_dual(P))) == verts(P)
    assert lattice_points(P) == oracles.box_points(P.vertices)
    assert {tuple(map(Fraction, v)) for v in P.vertices} == oracles.hull_vertices(DIAMOND + extra)


@given(points3)
@settings(max_examples=40, deadline=None)
def test_polar_is_involution_3d(extra):
    octa = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    P = LatticePolytope.from_points(octa + extra)
    assert verts(polar_dual(polar_dual(P))) == verts(P)
    assert {(tuple(a), b) for a, b in P.facets} == oracles.facets(P.vertices)
