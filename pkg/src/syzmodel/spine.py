"""Legendre transform of a height function and the cells of its corner locus.

For heights ``lam`` on lattice points ``m`` the Legendre transform is
``L(n) = max_m <m, n> + lam(m)``. Its domains of linearity and their faces
are labeled by simplices of the central triangulation; the cell of a label
``I`` is where exactly the affine functions of ``I`` attain the maximum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EmptyOrLowerDim, NotGenericHeights, ValidationError
from .polyhedra import (
    HPolyhedron,
    LatticePolytope,
    Polyhedron,
    _clean,
    _dot,
    height_dual,
    lattice_points,
    minkowski_sum,
    normal_cone,
)
from .subdivision import HeightFunction, central_subdivision


def legendre_eval(lam: HeightFunction, n) -> tuple[Fraction, frozenset]:
    """Exact value and the full argmax set of ``max_m <m,n> + lam(m)``."""
    vals = {m: _dot(m, n) + lam(m) for m in lam.domain}
    best = max(vals.values())
    return best, frozenset(m for m, v in vals.items() if v == best)


def q_IJ_polyhedron(lam: HeightFunction, I: Iterable, J: Iterable = (), eps=0) -> HPolyhedron:
    """``Q_(I|J)(eps)``: equal values across ``I``; every ``m`` outside ``I u J`` beats by more than ``eps``.

    With ``eps=0`` and ``J`` empty its closure is the cell where ``I``
    saturates the maximum.
    """
    I = sorted(tuple(m) for m in I)
    J = {tuple(m) for m in J}
    if not I:
        raise ValidationError("I must be nonempty")
    if J & set(I):
        raise ValidationError("I and J must be disjoint")
    eps = Fraction(eps)
    m0 = I[0]
    d = len(m0)
    eqs = []
    for m in I[1:]:
        # <m - m0, n> = lam(m0) - lam(m)
        eqs.append((tuple(a - b for a, b in zip(m, m0)), Fraction(lam(m0) - lam(m))))
    ineqs = []
    for m in lam.domain:
        if m in J or m in I:
            continue
        # <m - m0, n> < lam(m0) - lam(m) - eps
        ineqs.append((tuple(a - b for a, b in zip(m, m0)), Fraction(lam(m0) - lam(m)) - eps, True))
    return HPolyhedron(d, tuple(eqs), tuple(ineqs))


def cell_hrep(lam: HeightFunction, label: Iterable) -> HPolyhedron:
    """Closed cell of a label: ``I`` saturates, everything else is ``<=``."""
    Q = q_IJ_polyhedron(lam, label)
    return HPolyhedron(Q.d, Q.equalities, tuple((a, b, False) for a, b, _ in Q.inequalities))


@dataclass(frozen=True)
class SpineCell:
    label: tuple  # sorted vertex tuple of a simplex of the central triangulation
    hrep: HPolyhedron
    bounded: bool

    @property
    def polyhedron(self) -> Polyhedron:
        return self.hrep.closure

    @property
    def dim(self) -> int:
        return self.polyhedron.dim


@dataclass(frozen=True)
class Spine:
    lam: HeightFunction
    delta: LatticePolytope
    cells: tuple  # SpineCell, sorted by label size then label

    def cell(self, label) -> SpineCell:
        label = tuple(sorted(tuple(m) for m in label))
        for c in self.cells:
            if c.label == label:
                return c
        raise KeyError(label)

    @property
    def labels(self) -> list[tuple]:
        return [c.label for c in self.cells]

    def locate(self, n) -> SpineCell:
        """The unique cell whose relative interior contains ``n``."""
        _, arg = legendre_eval(self.lam, n)
        return self.cell(arg)


def spine(delta: LatticePolytope, lam: HeightFunction) -> Spine:
    sub = central_subdivision(delta, lam)
    if not sub.simplicial or not sub.central:
        raise NotGenericHeights("heights do not give a central triangulation")
    origin = (0,) * delta.d
    cells = []
    for F in sub.faces:
        label = tuple(sorted(F))
        H = cell_hrep(lam, label)
        P = H.closure
        if P.is_empty:
            raise NotGenericHeights(f"empty cell for label {label}")
        cells.append(SpineCell(label, H, P.is_bounded))
        if P.is_bounded != (origin in label):
            raise NotGenericHeights("boundedness does not match the label")
    cells.sort(key=lambda c: (len(c.label), c.label))
    return Spine(lam, delta, tuple(cells))


def dual_face_of_twisted(twisted: Polyhedron, sigma: Sequence) -> Polyhedron:
    """Face of the height-twisted dual maximizing a relative-interior point of ``cone(sigma)``."""
    d = twisted.d
    if not sigma:
        return twisted
    u = tuple(sum(m[i] for m in sigma) for i in range(d))
    best = max(_dot(u, p) for p in twisted.points)
    return Polyhedron.from_vrep([p for p in twisted.points if _dot(u, p) == best], d=d)


def carrier_normal_cone(delta: Polyhedron, pts: Sequence) -> Polyhedron:
    """Normal cone of the smallest face of ``delta`` containing ``pts``."""
    return normal_cone(delta, delta.face_containing(pts))


def verify_qcell_minkowski(sp: Spine, cell: SpineCell) -> bool:
    """Check ``cell = F_sigma + NC(carrier of the label)`` by mutual inclusion."""
    origin = (0,) * sp.delta.d
    twisted = height_dual(sp.delta, sp.lam)
    sigma = [m for m in cell.label if m != origin]
    F = dual_face_of_twisted(twisted, sigma)
    NC = carrier_normal_cone(sp.delta, list(cell.label))
    return minkowski_sum(F, NC).same_set(cell.polyhedron)


def w_perp(w: Sequence[int], points: Iterable) -> list[tuple]:
    """Points pairing to 1 with ``w``."""
    return sorted(tuple(m) for m in points if _dot(m, w) == 1)


@dataclass(frozen=True)
class TruncatedPolytope:
    base: LatticePolytope
    removed: tuple
    hull: Polyhedron


def truncate(delta: LatticePolytope, w: Sequence[int], points: Iterable | None = None) -> TruncatedPolytope:
    """Hull of the points of ``delta`` not in ``w_perp``; defaults to all lattice points."""
    pts = lattice_points(delta) if points is None else [tuple(p) for p in points]
    removed = w_perp(w, pts)
    if not removed:
        raise EmptyOrLowerDim(f"{tuple(w)} pairs to 1 with no point")
    keep = [m for m in pts if m not in set(removed)]
    return TruncatedPolytope(delta, tuple(removed), Polyhedron.from_vrep(keep, d=delta.d))


@dataclass(frozen=True)
class Item3Result:
    """How ``Q_({0}|w_perp)(0)`` relates to ``twisted dual + NC`` for one ``w``."""

    w: tuple
    equal: bool
    superset: bool  # closure contains twisted dual + NC
    contains_cone: bool  # closure contains twisted dual + cone(w)
    origin_on_boundary: bool
    w_in_normal_cone: bool
    extra_vertices: tuple  # closure vertices outside the twisted dual


@dataclass(frozen=True)
class QeReport:
    item1: bool
    item2: bool
    item3: tuple  # Item3Result per vertex of T

    @property
    def item3_equal(self) -> bool:
        return all(r.equal for r in self.item3)

    @property
    def item3_weak(self) -> bool:
        """Everything in item (3) except the equality."""
        return all(r.superset and r.contains_cone and r.origin_on_boundary and r.w_in_normal_cone for r in self.item3)

    @property
    def ok(self) -> bool:
        return self.item1 and self.item2 and self.item3_equal and self.item3_weak


def check_qe_item1(sp: Spine, max_size: int | None = None, subsets: Iterable | None = None) -> bool:
    """``Q_I(0)`` is nonempty exactly for labels, and then its closure is the cell."""
    labels = set(sp.labels)
    dom = sp.lam.domain
    if subsets is None:
        k = (sp.delta.d + 1) if max_size is None else max_size
        subsets = (c for r in range(1, k + 1) for c in itertools.combinations(dom, r))
    for I in subsets:
        I = tuple(sorted(I))
        Q = q_IJ_polyhedron(sp.lam, I)
        if Q.is_empty == (I in labels):
            return False
        if I in labels and not Q.closure.same_set(sp.cell(I).polyhedron):
            return False
    return True


def check_qe_item2(sp: Spine, v) -> bool:
    """``Q_({0}|v)(0)`` contains the relative interior of the facet ``G_v``."""
    d = sp.delta.d
    origin = (0,) * d
    twisted = height_dual(sp.delta, sp.lam)
    rhs = sp.lam(origin) - sp.lam(v)
    G = Polyhedron.from_vrep([p for p in twisted.points if _dot(v, p) == rhs], d=d)
    if G.dim != d - 1:
        return False
    Q = q_IJ_polyhedron(sp.lam, [origin], [v])
    if not all(Q.closure.contains(p) for p in G.points):
        return False
    return Q.contains(G.relative_interior_point())


def check_qe_item3(sp: Spine, w) -> Item3Result:
    """Compare ``Q_({0}|w_perp)(0)`` with the twisted dual plus the truncation's normal cone.

    The closure always contains the sum; equality holds exactly when no
    vertex of the closure violates a dropped ``w_perp`` constraint.
    """
    d = sp.delta.d
    origin = (0,) * d
    w = tuple(w)
    tr = truncate(sp.delta, w, sp.lam.domain)
    Q = q_IJ_polyhedron(sp.lam, [origin], tr.removed)
    twisted = height_dual(sp.delta, sp.lam)
    NC = normal_cone(tr.hull, tr.hull.face_containing([origin]))
    rhs = minkowski_sum(twisted, NC)
    closure = Q.closure
    superset = not Q.is_empty and closure.contains_polyhedron(rhs)
    equal = superset and rhs.contains_polyhedron(closure)
    cone_w = Polyhedron.from_vrep([origin], [w], d=d)
    contains = closure.contains_polyhedron(minkowski_sum(twisted, cone_w))
    on_boundary = tr.hull.contains(origin) and not tr.hull.relint_contains(origin) or tr.hull.dim < d
    extra = tuple(p for p in closure.points if not twisted.contains(p))
    return Item3Result(w, equal, superset, contains, on_boundary, NC.contains(w), extra)


def qe_report(sp: Spine, T_vertices: Iterable, item1_subsets: Iterable | None = None) -> QeReport:
    origin = (0,) * sp.delta.d
    S_vertices = sorted({m for c in sp.labels for m in c if m != origin})
    return QeReport(
        check_qe_item1(sp, subsets=item1_subsets),
        all(check_qe_item2(sp, v) for v in S_vertices),
        tuple(check_qe_item3(sp, w) for w in T_vertices),
    )


def combinatorial_equivalence(lam: HeightFunction, eps1, eps2, I, J=()) -> bool:
    """Same face lattice of the closures, matched by active constraint sets."""
    Q1 = q_IJ_polyhedron(lam, I, J, eps1)
    Q2 = q_IJ_polyhedron(lam, I, J, eps2)
    if Q1.is_empty or Q2.is_empty:
        return False
    return Q1.active_sets() == Q2.active_sets()


def equivalence_threshold(
    lam: HeightFunction, I, J=(), hi=Fraction(1), steps: int = 40, cap=Fraction(2) ** 40
) -> Fraction | None:
    """Bisect for the supremum of ``eps`` keeping ``Q(eps)`` equivalent to ``Q(0)``.

    ``hi`` is doubled until equivalence breaks; ``None`` if it never does below ``cap``.
    """
    lo = Fraction(0)
    hi = Fraction(hi)
    while combinatorial_equivalence(lam, 0, hi, I, J):
        lo, hi = hi, 2 * hi
        if hi > cap:
            return None
    for _ in range(steps):
        mid = (lo + hi) / 2
        if combinatorial_equivalence(lam, 0, mid, I, J):
            lo = mid
        else:
            hi = mid
    return lo


def corner_locus_segments(lam: HeightFunction, window: Sequence) -> list[tuple]:
    """Planar corner locus clipped to ``(x0, y0, x1, y1)``: list of exact segments.

    Works for any finite support (no genericity needed): for each pair of
    affine functions, the set where both attain the maximum.
    """
    x0, y0, x1, y1 = (Fraction(x) for x in window)
    dom = lam.domain
    if len(dom[0]) != 2:
        raise ValidationError("corner locus segments are planar")
    box = [((1, 0), x1), ((-1, 0), -x0), ((0, 1), y1), ((0, -1), -y0)]
    out = set()
    for m, mp in itertools.combinations(dom, 2):
        H = cell_hrep(lam, [m, mp])
        P = Polyhedron.from_hrep(H.equalities, [(a, b) for a, b, _ in H.inequalities] + box, d=2)
        if P.is_empty or P.dim != 1:
            continue
        a, b = P.points
        out.add((a, b))
    return sorted(out)
