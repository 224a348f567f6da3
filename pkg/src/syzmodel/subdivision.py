"""Regular subdivisions, pulling, generalized barycentric subdivisions.

Cells are stored as frozensets of configuration points (integer or rational
tuples). A cell of a regular subdivision contains every configuration point
whose lift lies on the corresponding upper facet, so a non-simplicial cell is
detected by counting points.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    EpsTooLarge,
    ExhaustedAttempts,
    NotCentral,
    NotGenericHeights,
    NotInRelativeInterior,
    NotOrderPreserving,
    NotSummand,
    ValidationError,
)
from .intmat import rational_rank, row_echelon, solve_rational
from .polyhedra import (
    Face,
    LatticePolytope,
    Polyhedron,
    _clean,
    _dot,
    lattice_points,
    normal_cone,
    vrep_to_hrep,
)
from .posets import Poset


# ---------------------------------------------------------------------------
# heights


class HeightFunction:
    """Heights on a finite set of lattice points.

    Values are integers in the public API; rational values appear only for
    internal perturbations such as :meth:`shifted`.
    """

    def __init__(self, values: Mapping):
        self._values = {tuple(k): _clean((Fraction(v),))[0] for k, v in sorted(values.items())}

    @property
    def values(self) -> dict:
        return dict(self._values)

    @property
    def domain(self) -> tuple:
        return tuple(self._values)

    def __call__(self, p) -> Fraction | int:
        return self._values[tuple(p)]

    __getitem__ = __call__

    def __contains__(self, p) -> bool:
        return tuple(p) in self._values

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other) -> bool:
        return isinstance(other, HeightFunction) and self._values == other._values

    def __hash__(self) -> int:
        return hash(tuple(self._values.items()))

    def __repr__(self) -> str:
        return f"HeightFunction({self._values})"

    def shifted(self, eps) -> "HeightFunction":
        """Add ``eps`` at every point except the origin."""
        eps = Fraction(eps)
        return HeightFunction({p: (v if not any(p) else v + eps) for p, v in self._values.items()})

    def restricted(self, points: Iterable) -> "HeightFunction":
        return HeightFunction({tuple(p): self._values[tuple(p)] for p in points})


# ---------------------------------------------------------------------------
# subdivisions


def _pivot_coordinates(points: Sequence) -> list[int]:
    """Coordinate indices whose projection is injective on the affine hull."""
    p0 = points[0]
    vecs = [[Fraction(a) - Fraction(b) for a, b in zip(p, p0)] for p in points[1:]]
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return []
    _, piv = row_echelon(vecs)
    return list(piv)


def _project(p, piv) -> tuple:
    return tuple(p[i] for i in piv)


@dataclass(frozen=True)
class Subdivision:
    """A polyhedral subdivision of a point configuration by maximal cells."""

    points: tuple
    cells: tuple  # maximal cells, each a frozenset of points
    simplicial: bool
    central: bool = False
    coherent: bool = True
    heights: HeightFunction | None = None
    labels: Mapping | None = field(default=None, compare=False)

    @cached_property
    def dim(self) -> int:
        return max(self._cell_dim(c) for c in self.cells)

    def _cell_dim(self, cell) -> int:
        pts = sorted(cell)
        return len(_pivot_coordinates(pts))

    @cached_property
    def vertices(self) -> tuple:
        """Configuration points used by some cell."""
        return tuple(sorted(set().union(*self.cells)))

    @cached_property
    def _pivots(self) -> list[int]:
        return _pivot_coordinates(list(self.points))

    def cell_polyhedron(self, cell) -> Polyhedron:
        return Polyhedron.from_vrep(sorted(cell))

    @cached_property
    def faces(self) -> tuple:
        """All nonempty faces of all cells, sorted by size then points."""
        out: set[frozenset] = set()
        for c in self.cells:
            if self.simplicial or len(c) == self._cell_dim(c) + 1:
                pts = sorted(c)
                for k in range(1, len(pts) + 1):
                    out.update(frozenset(s) for s in itertools.combinations(pts, k))
                continue
            P = self.cell_polyhedron(c)
            for F in P.faces():
                if F.dim < 0:
                    continue
                out.add(
                    frozenset(
                        q for q in c if all(_dot(P.inequalities[i][0], q) == P.inequalities[i][1] for i in F.facets)
                    )
                )
        return tuple(sorted(out, key=lambda s: (len(s), sorted(s))))

    def face_poset(self) -> Poset:
        if self.simplicial:
            return Poset.from_sets(self.faces)
        return Poset.from_sets(self.faces, rank=lambda s: len(_pivot_coordinates(sorted(s))))

    def f_vector(self) -> tuple[int, ...]:
        counts: dict[int, int] = {}
        for f in self.faces:
            k = len(f) - 1 if self.simplicial else len(_pivot_coordinates(sorted(f)))
            counts[k] = counts.get(k, 0) + 1
        return tuple(counts.get(k, 0) for k in range(self.dim + 1))

    def uses_all(self, points: Iterable) -> bool:
        used = set(self.vertices)
        return all(tuple(p) in used for p in points)

    # -- heights / envelope ---------------------------------------------
    @cached_property
    def _planes(self) -> list:
        """Affine functions (in pivot coordinates) interpolating the heights on each cell."""
        if self.heights is None:
            raise ValidationError("subdivision carries no heights")
        piv = self._pivots
        planes = []
        for c in self.cells:
            pts = sorted(c)
            A = [list(_project(p, piv)) + [1] for p in pts]
            b = [self.heights(p) for p in pts]
            sol = solve_rational(A, b)
            if sol is None:
                raise NotGenericHeights("cell heights are not affine")
            planes.append(sol)
        return planes

    def plane_value(self, i: int, p) -> Fraction:
        sol = self._planes[i]
        q = _project(p, self._pivots)
        return _dot(sol[:-1], q) + sol[-1]

    def envelope(self, p) -> Fraction:
        """Value at ``p`` of the concave piecewise-linear envelope."""
        return min(self.plane_value(i, p) for i in range(len(self.cells)))


def regular_subdivision(points: Iterable, heights: Mapping | HeightFunction) -> Subdivision:
    """Cells of linearity of the upper concave envelope of ``(p, h(p))``."""
    if not isinstance(heights, HeightFunction):
        heights = HeightFunction(heights)
    pts = sorted({tuple(p) for p in points})
    piv = _pivot_coordinates(pts)
    k = len(piv)
    if k == 0:
        return Subdivision(tuple(pts), (frozenset(pts),), True, heights=heights)
    lifted = [_project(p, piv) + (heights(p),) for p in pts]
    eqs, ineqs = vrep_to_hrep(lifted, [], [], k + 1)
    if eqs:
        cells = [frozenset(pts)]
    else:
        cells = []
        for a, b in ineqs:
            if a[-1] > 0:
                cells.append(frozenset(p for p, l in zip(pts, lifted) if _dot(a, l) == b))
    cells.sort(key=sorted)
    simplicial = all(len(c) == k + 1 for c in cells)
    return Subdivision(tuple(pts), tuple(cells), simplicial, heights=heights)


def central_subdivision(P: LatticePolytope, h: HeightFunction) -> Subdivision:
    """Regular subdivision of the domain of ``h`` (points of ``P``, origin included)."""
    origin = (0,) * P.d
    if origin not in h:
        raise ValidationError("height function must be defined at the origin")
    for p in h.domain:
        if not P.contains(p):
            raise ValidationError(f"height domain point {p} lies outside the polytope")
    sub = regular_subdivision(h.domain, h)
    central = all(origin in c for c in sub.cells)
    return Subdivision(sub.points, sub.cells, sub.simplicial, central, True, h)


def boundary_restriction(sub: Subdivision) -> Subdivision:
    """The triangulation ``{c - {0} : c maximal}`` of the boundary."""
    if not sub.central or not sub.simplicial:
        raise NotCentral("boundary restriction needs a central triangulation")
    origin = (0,) * len(sub.points[0])
    cells = tuple(sorted((c - {origin} for c in sub.cells), key=sorted))
    pts = tuple(p for p in sub.points if p != origin and any(p in c for c in cells))
    return Subdivision(pts, cells, True, False, True, None)


def require_generic(P: LatticePolytope, h: HeightFunction) -> Subdivision:
    sub = central_subdivision(P, h)
    if not sub.simplicial:
        raise NotGenericHeights("heights induce a non-simplicial subdivision")
    if not sub.central:
        raise NotGenericHeights("heights induce a non-central subdivision")
    return sub


def same_secondary_cone(h1: HeightFunction, h2: HeightFunction, P: LatticePolytope) -> bool:
    return require_generic(P, h1).cells == require_generic(P, h2).cells


def perturbation_threshold(P: LatticePolytope, h: HeightFunction, start=Fraction(1), max_halvings: int = 64) -> Fraction:
    """Largest ``start / 2^k`` such that ``h.shifted(eps)`` keeps the triangulation."""
    eps = Fraction(start)
    base = require_generic(P, h).cells
    for _ in range(max_halvings):
        sub = central_subdivision(P, h.shifted(eps))
        if sub.simplicial and sub.central and sub.cells == base:
            return eps
        eps /= 2
    raise ExhaustedAttempts("no admissible perturbation found")


def generic_heights(
    P: LatticePolytope, seed: int, points: str = "all", max_attempts: int = 40
) -> HeightFunction:
    """Seeded integer heights giving a central triangulation.

    ``points="all"`` demands every boundary lattice point be a vertex;
    ``points="vertices"`` pushes non-vertex boundary points below the envelope.
    """
    if points not in ("all", "vertices"):
        raise ValidationError(f"unknown points mode {points!r}")
    rng = random.Random(seed)
    pts = lattice_points(P)
    origin = (0,) * P.d
    boundary = [p for p in pts if p != origin]
    verts = set(P.vertices)
    need = boundary if points == "all" else [p for p in boundary if p in verts]
    # -K - C|m|^2 + jitter: the quadratic keeps every boundary point in convex
    # position, the jitter breaks ties, K makes the origin see everything
    norm2 = max(sum(x * x for x in p) for p in boundary)
    R = 16 * len(boundary)
    C = 4 * R
    for _ in range(max_attempts):
        K = (C * norm2 + R) * (P.d + 1)
        vals = {origin: 0}
        for p in boundary:
            if points == "vertices" and p not in verts:
                vals[p] = -K - C * norm2 - R - 1
            else:
                vals[p] = -K - C * sum(x * x for x in p) + rng.randint(0, R)
        h = HeightFunction(vals)
        sub = central_subdivision(P, h)
        if sub.simplicial and sub.central and sub.uses_all(need):
            return h
        R *= 2
        C *= 4
    raise ExhaustedAttempts(f"no generic heights after {max_attempts} attempts")


# ---------------------------------------------------------------------------
# pulling


def carrier_face(sub: Subdivision, pts: Sequence) -> frozenset:
    """Smallest face of the complex containing ``pts`` in its relative interior."""
    pts = [tuple(p) for p in pts]
    for c in sub.cells:
        C = sub.cell_polyhedron(c)
        if not all(C.contains(p) for p in pts):
            continue
        F = C.face_containing(pts)
        FP = C.face_polyhedron(F)
        if not all(FP.relint_contains(p) for p in pts):
            raise NotInRelativeInterior("polytope meets the boundary of its carrier face")
        return frozenset(q for q in c if FP.contains(q))
    raise NotInRelativeInterior("polytope is not inside a single face of the complex")


def pull(complex: Subdivision, P: Polyhedron | Iterable) -> Subdivision:
    """Pull a polytope lying in the relative interior of a face of a coherent complex.

    The new vertices are lifted slightly above the concave envelope; the lift
    is smaller than every gap to the planes of cells not containing the
    carrier face, so only the star of that face is refined.
    """
    if complex.heights is None:
        raise ValidationError("pull needs a coherent complex with heights")
    verts = list(P.points) if isinstance(P, Polyhedron) else [tuple(p) for p in P]
    verts = [tuple(p) for p in verts]
    carrier_face(complex, verts)
    gaps = []
    for p in verts:
        g = complex.envelope(p)
        for i in range(len(complex.cells)):
            gap = complex.plane_value(i, p) - g
            if gap > 0:
                gaps.append(gap)
    eps = min(gaps) / 2 if gaps else Fraction(1)
    vals = complex.heights.values
    for p in verts:
        vals[p] = complex.envelope(p) + eps
    sub = regular_subdivision(list(complex.points) + verts, vals)
    return Subdivision(sub.points, sub.cells, sub.simplicial, complex.central, True, sub.heights)


def trivial_subdivision(points: Iterable) -> Subdivision:
    """One cell with zero heights on the vertices of ``conv(points)``."""
    P = Polyhedron.from_vrep(list(points))
    return regular_subdivision(P.points, {p: 0 for p in P.points})


# ---------------------------------------------------------------------------
# barycentric subdivisions


@dataclass(frozen=True)
class PosetChainComplex:
    """Elements ``(p, chain)`` of the generalized barycentric subdivision."""

    elements: tuple
    source: Poset
    target: Poset

    def leq(self, a, b) -> bool:
        return self.target.leq(a[0], b[0]) and set(a[1]) <= set(b[1])

    def poset(self) -> Poset:
        return Poset.from_relation(
            self.elements, self.leq, lambda e: self.target.rank[e[0]] + len(e[1]) - 1
        )

    def __len__(self) -> int:
        return len(self.elements)


def combinatorial_bsd(Q: Poset, kappa: Mapping, Pp: Poset) -> PosetChainComplex:
    """Pairs ``(p, q_0 < ... < q_r)`` with ``p <= kappa(q_0)``."""
    if not Q.is_order_preserving(kappa, Pp):
        raise NotOrderPreserving("kappa is not order preserving")
    if any(Pp.rank[kappa[q]] > Q.rank[q] for q in Q):
        raise NotOrderPreserving("kappa increases rank")
    els = []
    for chain in Q.chains():
        top = kappa[chain[0]]
        for p in Pp.elements:
            if Pp.leq(p, top):
                els.append((p, chain))
    return PosetChainComplex(tuple(els), Q, Pp)


def nonempty_face_poset(P: Polyhedron) -> tuple[Poset, dict]:
    """Poset of nonempty faces keyed by vertex sets, plus the Face objects."""
    faces = {F.points: F for F in P.faces() if F.dim >= 0}
    poset = Poset.from_relation(faces, lambda a, b: a <= b, lambda s: faces[s].dim)
    return poset, faces


def is_minkowski_summand(P: Polyhedron, Q: Polyhedron) -> bool:
    """True iff the normal fan of ``Q`` refines that of ``P``."""
    if P.d != Q.d:
        return False
    for q in Q.points:
        nc = normal_cone(Q, [q])
        n = nc.relative_interior_point()
        best = max(_dot(n, p) for p in P.points)
        arg = [p for p in P.points if _dot(n, p) == best]
        if len(arg) != 1 and not all(_dot(l, a) == _dot(l, arg[0]) for l in nc.lines for a in arg):
            return False
        if not normal_cone(P, arg).contains_polyhedron(nc):
            return False
    return True


def _barycenter(pts) -> tuple:
    pts = list(pts)
    k = len(pts)
    return _clean(tuple(sum(Fraction(p[i]) for p in pts) / k for i in range(len(pts[0]))))


def summand_map(Q: Polyhedron, P: Polyhedron) -> dict:
    """kappa: nonempty faces of Q -> faces of P (argmax of a relint normal)."""
    out = {}
    for F in Q.faces():
        if F.dim < 0:
            continue
        n = normal_cone(Q, F).relative_interior_point()
        best = max(_dot(n, p) for p in P.points)
        out[F.points] = frozenset(p for p in P.points if _dot(n, p) == best)
    return out


def geometric_bsd(Q: Polyhedron, P: Polyhedron, eps=None) -> Subdivision:
    """Generalized barycentric subdivision of ``Q`` with respect to a summand ``P``.

    Pulls ``eps*(kappa(F) - barycenter(kappa(F))) + barycenter(F)`` for every
    face ``F`` of positive dimension, in order of decreasing dimension. The
    returned subdivision carries ``labels``: point -> (vertex of P, face of Q).
    """
    if not is_minkowski_summand(P, Q):
        raise NotSummand("P is not a Minkowski summand of Q")
    kappa = summand_map(Q, P)
    faces = [F for F in Q.faces() if F.dim >= 0]

    def translates(e):
        out = {}
        for F in faces:
            K = sorted(kappa[F.points])
            kb = _barycenter(K)
            fb = _barycenter(F.points)
            for g in K:
                out[(g, F.points)] = _clean(
                    tuple(e * (Fraction(a) - b) + c for a, b, c in zip(g, kb, fb))
                )
        return out

    by_pts = {F.points: F for F in faces}

    def admissible(pts):
        for (g, Fp), x in pts.items():
            F = by_pts[Fp]
            if F.dim > 0 and (not Q.contains(x) or Q.tight_facets(x) != F.facets):
                return False
        return True

    if eps is None:
        span = max(
            (max(abs(Fraction(a) - Fraction(b)) for a, b in zip(p, q)) for p in P.points for q in P.points),
            default=Fraction(0),
        )
        e = Fraction(1, 2 * max(1, int(span) + 1))
        for _ in range(64):
            pts = translates(e)
            if admissible(pts):
                break
            e /= 2
        else:
            raise EpsTooLarge("could not find an admissible eps")
    else:
        e = Fraction(eps)
        if not 0 < e:
            raise EpsTooLarge("eps must be positive")
        pts = translates(e)
        if not admissible(pts):
            raise EpsTooLarge(f"eps={e} pushes a translate out of its face")

    piv = _pivot_coordinates(list(Q.points))
    back = {}
    labels = {}
    for (g, Fp), x in pts.items():
        y = _project(x, piv)
        if y in back and back[y] != x:
            raise EpsTooLarge("translates collide")
        back[y] = x
        labels.setdefault(x, set()).add((g, Fp))
    if any(len(labs) != 1 for labs in labels.values()):
        raise EpsTooLarge("translates of different faces collide")
    labels = {x: next(iter(labs)) for x, labs in labels.items()}

    cx = trivial_subdivision([_project(v, piv) for v in Q.points])
    for F in sorted(faces, key=lambda f: (-f.dim, sorted(f.points))):
        if F.dim <= 0:
            continue
        T = [_project(pts[(g, F.points)], piv) for g in sorted(kappa[F.points])]
        cx = pull(cx, T)
    cells = tuple(sorted((frozenset(back[y] for y in c) for c in cx.cells), key=sorted))
    hv = HeightFunction({back[y]: v for y, v in cx.heights.values.items()})
    return Subdivision(
        tuple(sorted(back[y] for y in cx.points)), cells, cx.simplicial, False, True, hv, labels
    )


def bsd_face_labels(sub: Subdivision) -> set:
    """Label sets of all faces of a geometric bsd."""
    return {frozenset(sub.labels[x] for x in F) for F in sub.faces}


def bsd_element_labels(bsd: PosetChainComplex) -> set:
    """Label sets ``vert(p) x chain`` of the elements of a combinatorial bsd."""
    out = set()
    for p, chain in bsd.elements:
        out.add(frozenset((g, q) for g in p for q in chain))
    return out


# ---------------------------------------------------------------------------
# delta realization


@dataclass(frozen=True)
class DeltaRealization:
    """Geometric realization of bsd(T, T) with faces ``delta*tau + (1-delta)*conv(barycenters)``."""

    delta: Fraction
    complex: PosetChainComplex
    coords: Mapping  # (u, sigma) -> point

    def cell_vertices(self, element) -> list:
        p, chain = element
        return sorted(self.coords[(u, s)] for u in p for s in chain)

    def cell_polyhedron(self, element) -> Polyhedron:
        return Polyhedron.from_vrep(self.cell_vertices(element))

    def d_delta(self, element) -> frozenset:
        """The cellular map sends the face labeled ``(tau, chain)`` to ``tau``."""
        return element[0]

    def map_point(self, element, weights: Mapping) -> tuple:
        """Image of the point ``sum w[(u,s)] * coords[(u,s)]`` (weights summing to 1)."""
        p, chain = element
        d = len(next(iter(p)))
        out = [Fraction(0)] * d
        for (u, s), w in weights.items():
            if u not in p or s not in chain:
                raise ValidationError("weight outside the cell")
            for i in range(d):
                out[i] += Fraction(w) * u[i]
        return _clean(tuple(out))

    def top_cells(self) -> list:
        dmax = max(len(_pivot_coordinates(self.cell_vertices(e))) for e in self.complex.elements)
        return [e for e in self.complex.elements if len(_pivot_coordinates(self.cell_vertices(e))) == dmax]


def simplicial_face_poset(T: Subdivision | Iterable) -> Poset:
    cells = T.cells if isinstance(T, Subdivision) else [frozenset(c) for c in T]
    faces = set()
    for c in cells:
        pts = sorted(c)
        for k in range(1, len(pts) + 1):
            faces.update(frozenset(s) for s in itertools.combinations(pts, k))
    return Poset.from_sets(faces)


def delta_realization(T: Subdivision | Iterable, delta) -> DeltaRealization:
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValidationError("delta must lie strictly between 0 and 1")
    F = simplicial_face_poset(T)
    bsd = combinatorial_bsd(F, {s: s for s in F}, F)
    coords = {}
    for s in F:
        sb = _barycenter(sorted(s))
        for u in s:
            coords[(u, s)] = _clean(tuple(delta * Fraction(a) + (1 - delta) * b for a, b in zip(u, sb)))
    return DeltaRealization(delta, bsd, coords)
