"""Exact polyhedra: double description, V/H conversion, faces, normal cones.

All arithmetic is over Python ints and :class:`fractions.Fraction`. A
:class:`Polyhedron` stores both representations; whichever one it was built
from is converted with the double description method and then converted
back, so both sides are irredundant and have been cross-checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from operator import mul
from typing import Iterable, Sequence

from .errors import EmptyOrLowerDim, InternalCheckError, NotProperFace, OriginNotInterior, Unbounded
from .intmat import rational_rank, row_echelon

Vec = tuple


def _dot(u, v):
    return sum(map(mul, u, v))


def _prim(v) -> tuple[int, ...]:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return tuple(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _int_row(coeffs: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (positive multiple)."""
    den = 1
    for x in coeffs:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    return _prim(tuple(int(x * den) for x in coeffs))


def dd_cone(
    ineqs: Sequence[Sequence[int]], eqs: Sequence[Sequence[int]], n: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]], list[int]]:
    """Generators of ``{x in Q^n : A x >= 0, E x = 0}``.

    Returns ``(lines, rays, zero_sets)`` where ``lines`` spans the lineality
    space, ``rays`` are the extreme rays (modulo lineality) and ``zero_sets[i]``
    is a bitmask over ``ineqs`` of the constraints tight on ``rays[i]``.
    """
    cons = [(tuple(e), True) for e in eqs] + [(tuple(a), False) for a in ineqs]
    n_eq = len(eqs)
    lines: list[tuple[int, ...]] = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays: list[tuple[int, ...]] = []
    zs: list[int] = []  # bitmask over processed constraint positions in `cons`

    for k, (a, is_eq) in enumerate(cons):
        bit = 1 << k
        piv = None
        for i, l in enumerate(lines):
            v = _dot(a, l)
            if v:
                piv = i
                break
        if piv is not None:
            l = lines.pop(piv)
            v = _dot(a, l)
            if v < 0:
                l = tuple(-x for x in l)
                v = -v
            new_lines = []
            for l2 in lines:
                c = _dot(a, l2)
                new_lines.append(_prim(tuple(v * x - c * y for x, y in zip(l2, l))) if c else l2)
            lines = new_lines
            new_rays = []
            for r in rays:
                c = _dot(a, r)
                new_rays.append(_prim(tuple(v * x - c * y for x, y in zip(r, l))) if c else r)
            rays = new_rays
            zs = [z | bit for z in zs]
            if not is_eq:
                rays.append(l)
                zs.append(bit - 1)  # tight on every earlier constraint
            continue

        vals = [_dot(a, r) for r in rays]
        pos = [i for i, x in enumerate(vals) if x > 0]
        neg = [i for i, x in enumerate(vals) if x < 0]
        zero = [i for i, x in enumerate(vals) if x == 0]
        need = n - len(lines) - 2  # rank of tight set for adjacent rays
        new_rays = []
        new_zs = []
        keep = zero if is_eq else pos + zero
        for i in keep:
            new_rays.append(rays[i])
            new_zs.append(zs[i] | bit if vals[i] == 0 else zs[i])
        if pos and neg:
            for i in pos:
                zi = zs[i]
                ri = rays[i]
                vi = vals[i]
                for j in neg:
                    common = zi & zs[j]
                    if need > 0 and common.bit_count() < need:
                        continue
                    adjacent = True
                    for t, zt in enumerate(zs):
                        if t != i and t != j and (zt & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    vj = -vals[j]
                    rj = rays[j]
                    new_rays.append(_prim(tuple(vi * y + vj * x for x, y in zip(ri, rj))))
                    new_zs.append(common | bit)
        rays = new_rays
        zs = new_zs

    # re-index zero sets onto the inequality list
    out_zs = [z >> n_eq for z in zs]
    return lines, rays, out_zs


def _as_fraction_vec(v) -> tuple[Fraction, ...]:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in v)


def _clean(v) -> tuple:
    """Canonical coordinates: ints where integral, Fractions otherwise."""
    out = []
    for x in v:
        if isinstance(x, Fraction) and x.denominator == 1:
            out.append(int(x))
        else:
            out.append(x)
    return tuple(out)


def _canon_constraint(row: tuple[int, ...]) -> tuple[tuple[int, ...], Fraction]:
    """Split a dual-cone vector ``(b, a)`` into primitive ``a`` and rational ``b``."""
    b = row[0]
    a = tuple(row[1:])
    g = 0
    for x in a:
        g = gcd(g, x)
    if g == 0:
        return a, Fraction(b)
    return tuple(x // g for x in a), Fraction(b, g)


def _hrep_rows(eqs, ineqs, d):
    """Homogenized integer rows (b, -a) for constraints <a,x> (<=|=) b."""
    E = [_int_row((Fraction(b),) + tuple(-Fraction(x) for x in a)) for a, b in eqs]
    A = [_int_row((Fraction(b),) + tuple(-Fraction(x) for x in a)) for a, b in ineqs]
    return E, A


def hrep_to_vrep(eqs, ineqs, d):
    """Return (points, rays, lines) of ``{x : <a,x> = b (eqs), <a,x> <= b (ineqs)}``."""
    E, A = _hrep_rows(eqs, ineqs, d)
    A.append(tuple(int(i == 0) for i in range(d + 1)))  # t >= 0
    lines, rays, _ = dd_cone(A, E, d + 1)
    points, rs = [], []
    for r in rays:
        t = r[0]
        if t > 0:
            points.append(_clean(tuple(Fraction(x, t) for x in r[1:])))
        elif t == 0:
            rs.append(_prim(r[1:]))
        else:
            raise InternalCheckError("negative homogenizing coordinate")
    ls = []
    for l in lines:
        if l[0] != 0:
            raise InternalCheckError("line with nonzero homogenizing coordinate")
        ls.append(_canon_line(l[1:]))
    if not points:
        return [], [], []
    return points, rs, ls


def _canon_line(v):
    v = _prim(tuple(v))
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def vrep_to_hrep(points, rays, lines, d):
    """Return (eqs, ineqs) describing ``conv(points) + cone(rays) + lin(lines)``.

    Inequalities are facet-defining and irredundant; each is (primitive normal,
    rational rhs) meaning ``<normal, x> <= rhs``.
    """
    if not points:
        raise EmptyOrLowerDim("empty V-representation")
    A = []
    for p in points:
        A.append(_int_row((Fraction(1),) + tuple(-Fraction(x) for x in p)))
    for r in rays:
        A.append((0,) + tuple(-int(x) for x in r))
    E = [(0,) + tuple(int(x) for x in l) for l in lines]
    c_lines, c_rays, zs = dd_cone(A, E, d + 1)
    npts = len(points)
    ptmask = (1 << npts) - 1
    eqs = []
    for l in c_lines:
        a, b = _canon_constraint(l)
        if any(a):
            eqs.append((a, b))
    ineqs = []
    for r, z in zip(c_rays, zs):
        if z & ptmask == 0:
            continue  # the trivial inequality 0 <= 1
        a, b = _canon_constraint(r)
        if not any(a):
            continue
        ineqs.append((a, b))
    eqs = _canon_equalities(eqs, d)
    return eqs, ineqs


def _canon_equalities(eqs, d):
    """Equality system in reduced echelon form, each row scaled to primitive ints."""
    if not eqs:
        return []
    rows = [[Fraction(x) for x in a] + [Fraction(b)] for a, b in eqs]
    R, _ = row_echelon(rows)
    out = []
    for row in R:
        v = _int_row(row)
        a = v[:d]
        out.append((tuple(a), Fraction(v[d])))
    return out


@dataclass(frozen=True)
class Face:
    """A face recorded by its generators and the facets that contain it."""

    points: frozenset
    rays: frozenset
    facets: frozenset  # indices into Polyhedron.inequalities
    dim: int

    @property
    def vertices(self) -> frozenset:
        return self.points


class Polyhedron:
    """A rational polyhedron in Q^d with both representations.

    ``equalities`` and ``inequalities`` hold pairs ``(a, b)`` with ``a`` a
    primitive integer vector, meaning ``<a, x> = b`` resp. ``<a, x> <= b``.
    ``points`` are the minimal-face representatives (the vertices when the
    polyhedron is pointed), ``rays`` and ``lines`` primitive integer vectors.
    """

    def __init__(self, d, equalities, inequalities, points, rays, lines):
        self.d = d
        self.equalities = tuple(equalities)
        self.inequalities = tuple(inequalities)
        self.points = tuple(sorted(_clean(p) for p in points))
        self.rays = tuple(sorted(rays))
        self.lines = tuple(sorted(lines))

    # -- construction -------------------------------------------------
    @classmethod
    def from_hrep(cls, eqs: Iterable = (), ineqs: Iterable = (), d: int | None = None) -> "Polyhedron":
        eqs = [(tuple(a), Fraction(b)) for a, b in eqs]
        ineqs = [(tuple(a), Fraction(b)) for a, b in ineqs]
        if d is None:
            d = len((eqs or ineqs)[0][0])
        pts, rays, lines = hrep_to_vrep(eqs, ineqs, d)
        if not pts:
            return cls.empty(d)
        return cls.from_vrep(pts, rays, lines, d=d)

    @classmethod
    def from_vrep(cls, points: Iterable, rays: Iterable = (), lines: Iterable = (), d: int | None = None) -> "Polyhedron":
        points = [tuple(p) for p in points]
        rays = [_prim(tuple(int(x) for x in r)) for r in rays if any(r)]
        lines = [_canon_line(tuple(int(x) for x in l)) for l in lines if any(l)]
        if d is None:
            d = len(points[0])
        if not points:
            return cls.empty(d)
        eqs, ineqs = vrep_to_hrep(points, rays, lines, d)
        # irredundant generators from the H-side
        pts2, rays2, lines2 = hrep_to_vrep(eqs, ineqs, d)
        P = cls(d, eqs, ineqs, pts2, rays2, lines2)
        for p in points:
            if not P.contains(p):
                raise InternalCheckError(f"V/H mismatch: {p} not in its own hull")
        return P

    @classmethod
    def empty(cls, d: int) -> "Polyhedron":
        return cls(d, [], [], [], [], [])

    @property
    def is_empty(self) -> bool:
        return not self.points

    # -- basic queries --------------------------------------------------
    @cached_property
    def dim(self) -> int:
        if self.is_empty:
            return -1
        return self.d - len(self.equalities)

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.d

    def contains(self, x) -> bool:
        if self.is_empty:
            return False
        for a, b in self.equalities:
            if _dot(a, x) != b:
                return False
        for a, b in self.inequalities:
            if _dot(a, x) > b:
                return False
        return True

    def relint_contains(self, x) -> bool:
        if self.is_empty:
            return False
        for a, b in self.equalities:
            if _dot(a, x) != b:
                return False
        for a, b in self.inequalities:
            if _dot(a, x) >= b:
                return False
        return True

    def contains_direction(self, r) -> bool:
        """True if ``r`` lies in the recession cone."""
        return all(_dot(a, r) == 0 for a, _ in self.equalities) and all(
            _dot(a, r) <= 0 for a, _ in self.inequalities
        )

    def contains_polyhedron(self, other: "Polyhedron") -> bool:
        if other.is_empty:
            return True
        return (
            all(self.contains(p) for p in other.points)
            and all(self.contains_direction(r) for r in other.rays)
            and all(self.contains_direction(l) and self.contains_direction(tuple(-x for x in l)) for l in other.lines)
        )

    def same_set(self, other: "Polyhedron") -> bool:
        return self.contains_polyhedron(other) and other.contains_polyhedron(self)

    def tight_facets(self, x) -> frozenset:
        return frozenset(i for i, (a, b) in enumerate(self.inequalities) if _dot(a, x) == b)

    def ray_tight_facets(self, r) -> frozenset:
        return frozenset(i for i, (a, _) in enumerate(self.inequalities) if _dot(a, r) == 0)

    def relative_interior_point(self) -> tuple:
        """Barycenter of the points plus the sum of the rays."""
        if self.is_empty:
            raise EmptyOrLowerDim("empty polyhedron")
        k = len(self.points)
        c = [sum(Fraction(p[i]) for p in self.points) / k for i in range(self.d)]
        for r in self.rays:
            c = [x + y for x, y in zip(c, r)]
        return _clean(tuple(c))

    def recession_cone(self) -> "Polyhedron":
        return Polyhedron.from_vrep([(0,) * self.d], self.rays, self.lines, d=self.d)

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if self.is_empty or other.is_empty:
            return Polyhedron.empty(self.d)
        return Polyhedron.from_hrep(
            self.equalities + other.equalities, self.inequalities + other.inequalities, d=self.d
        )

    def translate(self, v) -> "Polyhedron":
        return Polyhedron.from_vrep(
            [tuple(Fraction(a) + b for a, b in zip(p, v)) for p in self.points], self.rays, self.lines, d=self.d
        )

    def scale(self, s) -> "Polyhedron":
        s = Fraction(s)
        return Polyhedron.from_vrep([tuple(s * x for x in p) for p in self.points], self.rays, self.lines, d=self.d)

    # -- faces ----------------------------------------------------------
    def faces(self) -> list[Face]:
        """All faces including the empty face and the polyhedron itself.

        Faces are closed under intersection and sorted by dimension, then by
        their sorted generators.
        """
        if self.is_empty:
            return [Face(frozenset(), frozenset(), frozenset(), -1)]
        pts = self.points
        rays = self.rays
        fac_pts = [frozenset(p for p in pts if _dot(a, p) == b) for a, b in self.inequalities]
        fac_rays = [frozenset(r for r in rays if _dot(a, r) == 0) for a, _ in self.inequalities]
        top = (frozenset(pts), frozenset(rays))
        seen = {top}
        frontier = [top]
        while frontier:
            nxt = []
            for fp, fr in frontier:
                for i in range(len(fac_pts)):
                    g = (fp & fac_pts[i], fr & fac_rays[i])
                    if not g[0]:
                        g = (frozenset(), frozenset())
                    if g not in seen:
                        seen.add(g)
                        nxt.append(g)
            frontier = nxt
        seen.add((frozenset(), frozenset()))
        out = []
        for fp, fr in seen:
            if not fp:
                out.append(Face(frozenset(), frozenset(), frozenset(range(len(fac_pts))), -1))
                continue
            facets = frozenset(
                i for i in range(len(fac_pts)) if fp <= fac_pts[i] and fr <= fac_rays[i]
            )
            out.append(Face(fp, fr, facets, self._gen_dim(fp, fr)))
        out.sort(key=lambda f: (f.dim, sorted(f.points), sorted(f.rays)))
        return out

    def _gen_dim(self, pts, rays) -> int:
        pts = list(pts)
        p0 = pts[0]
        vecs = [[Fraction(a) - Fraction(b) for a, b in zip(p, p0)] for p in pts[1:]]
        vecs += [list(map(Fraction, r)) for r in rays]
        vecs += [list(map(Fraction, l)) for l in self.lines]
        return rational_rank(vecs) if vecs else 0

    def face_containing(self, subset: Iterable) -> Face:
        """Smallest face containing the given points of the polyhedron."""
        subset = [tuple(p) for p in subset]
        for p in subset:
            if not self.contains(p):
                raise NotProperFace(f"{p} is not in the polyhedron")
        facets = frozenset(
            i for i, (a, b) in enumerate(self.inequalities) if all(_dot(a, p) == b for p in subset)
        )
        pts = frozenset(p for p in self.points if all(_dot(self.inequalities[i][0], p) == self.inequalities[i][1] for i in facets))
        rays = frozenset(r for r in self.rays if all(_dot(self.inequalities[i][0], r) == 0 for i in facets))
        return Face(pts, rays, facets, self._gen_dim(pts, rays) if pts else -1)

    def face_polyhedron(self, face: Face) -> "Polyhedron":
        return Polyhedron.from_vrep(sorted(face.points), sorted(face.rays), self.lines, d=self.d)

    def __repr__(self) -> str:
        kind = "bounded" if self.is_bounded else "unbounded"
        return f"<Polyhedron d={self.d} dim={self.dim} {kind} {len(self.points)} pts {len(self.rays)} rays {len(self.inequalities)} facets>"


class LatticePolytope(Polyhedron):
    """Bounded polyhedron; vertices may be rational (e.g. height-twisted duals)."""

    @classmethod
    def from_points(cls, points: Iterable) -> "LatticePolytope":
        P = Polyhedron.from_vrep(list(points))
        return cls._wrap(P)

    @classmethod
    def from_inequalities(cls, ineqs: Iterable, d: int | None = None) -> "LatticePolytope":
        P = Polyhedron.from_hrep((), ineqs, d=d)
        if P.is_empty:
            raise EmptyOrLowerDim("empty polytope")
        if not P.is_bounded:
            raise Unbounded("inequalities describe an unbounded polyhedron")
        return cls._wrap(P)

    @classmethod
    def _wrap(cls, P: Polyhedron) -> "LatticePolytope":
        if not P.is_bounded:
            raise Unbounded("polytope must be bounded")
        Q = cls.__new__(cls)
        Polyhedron.__init__(Q, P.d, P.equalities, P.inequalities, P.points, P.rays, P.lines)
        return Q

    @property
    def vertices(self) -> tuple:
        return self.points

    @property
    def facets(self) -> tuple:
        return self.inequalities

    def __eq__(self, other) -> bool:
        return isinstance(other, Polyhedron) and self.points == other.points and self.is_bounded == other.is_bounded

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"LatticePolytope({[list(v) for v in self.vertices]})"


# ---------------------------------------------------------------------------
# lattice-geometry operations


def _require_origin_interior(P: Polyhedron) -> None:
    if not P.is_full_dimensional or not P.relint_contains((0,) * P.d):
        raise OriginNotInterior("the origin is not an interior point")


def polar_dual(P: LatticePolytope) -> LatticePolytope:
    """``{m : <m, n> <= 1 for all n in P}``."""
    _require_origin_interior(P)
    rows = []
    for v in P.vertices:
        fv = tuple(Fraction(x) for x in v)
        den = 1
        for x in fv:
            den = lcm(den, x.denominator)
        a = tuple(int(x * den) for x in fv)
        rows.append((a, Fraction(den)))
    Q = LatticePolytope.from_inequalities(rows, d=P.d)
    # cross-check: vertices of the polar are the facet normals scaled by rhs
    expected = sorted(_clean(tuple(Fraction(x) / b for x in a)) for a, b in P.facets)
    if list(Q.vertices) != expected:
        raise InternalCheckError("polar vertices disagree with facet normals")
    return Q


def is_integral_point(p) -> bool:
    return all(Fraction(x).denominator == 1 for x in p)


def is_reflexive(P: LatticePolytope) -> bool:
    if not all(is_integral_point(v) for v in P.vertices):
        raise ValueError("polytope must have integral vertices")
    return all(is_integral_point(v) for v in polar_dual(P).vertices)


def fractional_dual_vertices(P: LatticePolytope) -> list[tuple]:
    return [v for v in polar_dual(P).vertices if not is_integral_point(v)]


def lattice_points(P: Polyhedron, tagged: bool = False):
    """All integral points of a bounded polyhedron, sorted lexicographically.

    With ``tagged=True`` returns ``(point, on_boundary)`` pairs; boundary means
    relative boundary.
    """
    if not P.is_bounded:
        raise Unbounded("lattice point enumeration needs a bounded polyhedron")
    if P.is_empty:
        return []
    lo = [min(Fraction(p[i]) for p in P.points) for i in range(P.d)]
    hi = [max(Fraction(p[i]) for p in P.points) for i in range(P.d)]
    ranges = [range(-((-x.numerator) // x.denominator), (y.numerator // y.denominator) + 1) for x, y in zip(lo, hi)]
    out = []
    for q in itertools.product(*ranges):
        if P.contains(q):
            if tagged:
                out.append((q, not P.relint_contains(q)))
            else:
                out.append(q)
    return out


def interior_lattice_points(P: Polyhedron) -> list[tuple]:
    return [p for p, b in lattice_points(P, tagged=True) if not b]


def boundary_lattice_points(P: Polyhedron) -> list[tuple]:
    return [p for p, b in lattice_points(P, tagged=True) if b]


def face_lattice(P: Polyhedron) -> list[Face]:
    """Graded list of faces (empty face first, P last); rank = dim + 1."""
    return P.faces()


def f_vector(P: Polyhedron) -> tuple[int, ...]:
    counts: dict[int, int] = {}
    for f in P.faces():
        if 0 <= f.dim < P.dim:
            counts[f.dim] = counts.get(f.dim, 0) + 1
    return tuple(counts.get(k, 0) for k in range(P.dim))


def dual_face(P: LatticePolytope, F: Face | Iterable, polar: LatticePolytope | None = None) -> Face:
    """Face of the polar dual where every vertex of ``F`` pairs to 1."""
    if not isinstance(F, Face):
        F = P.face_containing(F)
    if F.dim < 0 or F.dim >= P.dim:
        raise NotProperFace("dual_face needs a proper nonempty face")
    if polar is None:
        polar = polar_dual(P)
    pts = [n for n in polar.vertices if all(_dot(m, n) == 1 for m in F.points)]
    G = polar.face_containing(pts)
    if F.dim + G.dim != P.d - 1:
        raise InternalCheckError("dual face dimension mismatch")
    return G


def normal_cone(P: Polyhedron, F: Face | Iterable) -> Polyhedron:
    """Cone of linear functionals maximized over ``P`` on (at least) ``F``.

    ``F`` may be a :class:`Face` or any subset of ``P``; a subset is replaced by
    its carrier face. The cone is generated by the normals of the facets
    containing the face, plus the equality normals as lines.
    """
    if not isinstance(F, Face):
        F = P.face_containing(F)
    elif not F.facets <= frozenset(range(len(P.inequalities))):
        raise NotProperFace("face does not belong to this polyhedron")
    rays = [P.inequalities[i][0] for i in sorted(F.facets)]
    lines = [a for a, _ in P.equalities]
    return Polyhedron.from_vrep([(0,) * P.d], rays, lines, d=P.d)


def minkowski_sum(P: Polyhedron, C: Polyhedron) -> Polyhedron:
    """``P + C`` for a polyhedron ``P`` and a polyhedral cone (or polytope) ``C``."""
    pts = [tuple(Fraction(a) + Fraction(b) for a, b in zip(p, q)) for p in P.points for q in C.points]
    return Polyhedron.from_vrep(pts, P.rays + C.rays, P.lines + C.lines, d=P.d)


def height_dual(Pdual: Polyhedron, h) -> LatticePolytope:
    """``{x : <x, n> <= h(0) - h(n) for all n in the domain of h}``.

    ``h`` is a :class:`~syzmodel.subdivision.HeightFunction` (or a mapping from
    lattice points to numbers containing the origin).
    """
    values = h.values if hasattr(h, "values") and not callable(h.values) else h
    d = Pdual.d
    origin = (0,) * d
    h0 = Fraction(values[origin])
    ineqs = [(n, h0 - Fraction(v)) for n, v in values.items() if n != origin]
    Q = Polyhedron.from_hrep((), ineqs, d=d)
    if Q.is_empty or not Q.is_full_dimensional:
        raise EmptyOrLowerDim("height-twisted dual is empty or lower dimensional")
    if not Q.is_bounded:
        raise EmptyOrLowerDim("height-twisted dual is unbounded")
    return LatticePolytope._wrap(Q)


def affine_hull_basis(points: Sequence) -> tuple[tuple, list[tuple]]:
    """Return (origin point, rational basis of the direction space)."""
    p0 = tuple(Fraction(x) for x in points[0])
    vecs = [[Fraction(a) - b for a, b in zip(p, p0)] for p in points[1:]]
    if not vecs:
        return p0, []
    basis = []
    for v in vecs:
        trial = basis + [v]
        if rational_rank(trial) == len(trial):
            basis.append(v)
    return p0, [tuple(b) for b in basis]


def pulling_triangulation(P: Polyhedron) -> list[tuple]:
    """Triangulate a bounded polyhedron by recursively coning from its least vertex."""
    if not P.is_bounded:
        raise Unbounded("triangulation needs a bounded polyhedron")
    faces = P.faces()
    by_pts = {f.points: f for f in faces}

    def tri(face: Face) -> list[tuple]:
        if face.dim == 0:
            return [tuple(face.points)]
        v0 = min(face.points)
        out = []
        for g in faces:
            if g.dim == face.dim - 1 and g.points < face.points and v0 not in g.points:
                out.extend(s + (v0,) for s in tri(g))
        return out

    return tri(by_pts[frozenset(P.points)])


def euclidean_volume(P: Polyhedron) -> Fraction:
    """Exact Euclidean volume of a full-dimensional bounded polyhedron."""
    from .intmat import bareiss_det

    if P.dim < P.d:
        return Fraction(0)
    total = Fraction(0)
    for s in pulling_triangulation(P):
        p0 = s[-1]
        rows = [[Fraction(a) - Fraction(b) for a, b in zip(q, p0)] for q in s[:-1]]
        den = 1
        for r in rows:
            for x in r:
                den = lcm(den, x.denominator)
        det = bareiss_det([[int(x * den) for x in r] for r in rows])
        total += Fraction(abs(det), den ** P.d)
    f = 1
    for k in range(2, P.d + 1):
        f *= k
    return total / f


@dataclass(frozen=True)
class HPolyhedron:
    """``<a,x> = b`` equalities and ``<a,x> <= b`` / ``< b`` inequalities.

    Face-lattice questions go to :meth:`closure`; :meth:`contains` honors
    strictness. The set is empty iff the closure is empty or some strict
    inequality is tight at a relative interior point of the closure.
    """

    d: int
    equalities: tuple  # (a, b)
    inequalities: tuple  # (a, b, strict)

    @cached_property
    def closure(self) -> Polyhedron:
        return Polyhedron.from_hrep(
            [(a, b) for a, b in self.equalities], [(a, b) for a, b, _ in self.inequalities], d=self.d
        )

    @cached_property
    def is_empty(self) -> bool:
        C = self.closure
        if C.is_empty:
            return True
        return not self.contains(C.relative_interior_point())

    def contains(self, x) -> bool:
        for a, b in self.equalities:
            if _dot(a, x) != b:
                return False
        for a, b, strict in self.inequalities:
            v = _dot(a, x)
            if v > b or (strict and v == b):
                return False
        return True

    def recession_cone(self) -> Polyhedron:
        return self.closure.recession_cone()

    def active_sets(self) -> set[frozenset]:
        """For each nonempty face of the closure, the indices of inequalities tight on it."""
        C = self.closure
        out = set()
        for F in C.faces():
            if F.dim < 0:
                continue
            out.add(
                frozenset(
                    i
                    for i, (a, b, _) in enumerate(self.inequalities)
                    if all(_dot(a, p) == b for p in F.points) and all(_dot(a, r) == 0 for r in F.rays)
                    and all(_dot(a, l) == 0 for l in C.lines)
                )
            )
        return out
