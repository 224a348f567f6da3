"""The sphere model: chain-pair complex, discriminant, bipartite graph, covers."""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import InternalCheckError, NotDiscriminantVertex, NotDualPair
from .homology import HomologyResult, graph_homology, homology
from .polyhedra import _clean, _dot
from .subdivision import Subdivision

Simplex = tuple  # sorted tuple of points
Chain = tuple  # tuple of simplices, strictly increasing
Cell = tuple  # (s_chain, t_chain)


def simplex_faces(cells: Iterable) -> list[Simplex]:
    out = set()
    for c in cells:
        pts = sorted(c)
        for k in range(1, len(pts) + 1):
            out.update(itertools.combinations(pts, k))
    return sorted(out, key=lambda s: (len(s), s))


def _chains_ending_at(faces: list[Simplex]) -> dict[Simplex, list[Chain]]:
    out: dict[Simplex, list[Chain]] = {}
    for s in faces:  # sorted by size, so proper faces come first
        chains = [(s,)]
        for k in range(1, len(s)):
            for sub in itertools.combinations(s, k):
                chains.extend(c + (s,) for c in out[sub])
        out[s] = chains
    return out


def _barycenter(s: Simplex) -> tuple:
    k = len(s)
    return _clean(tuple(sum(Fraction(p[i]) for p in s) / k for i in range(len(s[0]))))


@dataclass(frozen=True)
class GammaGraph:
    left: tuple
    right: tuple
    edges: tuple  # (v, w) pairs

    @cached_property
    def is_connected(self) -> bool:
        adj = defaultdict(set)
        for v, w in self.edges:
            adj[("L", v)].add(("R", w))
            adj[("R", w)].add(("L", v))
        nodes = [("L", v) for v in self.left] + [("R", w) for w in self.right]
        if not nodes:
            return True
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(nodes)

    @property
    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.left) - len(self.right) + 1

    def homology(self) -> HomologyResult:
        return graph_homology(
            [("L", v) for v in self.left] + [("R", w) for w in self.right],
            [(("L", v), ("R", w)) for v, w in self.edges],
        )


def gamma_graph(S: Subdivision, T: Subdivision) -> GammaGraph:
    left = tuple(sorted(set().union(*S.cells)))
    right = tuple(sorted(set().union(*T.cells)))
    edges = tuple((v, w) for v in left for w in right if _dot(v, w) == 1)
    return GammaGraph(left, right, edges)


class SigmaComplex:
    """Cells are pairs of chains ``(sigma_0 < ... < sigma_r, tau_0 < ... < tau_t)``.

    A vertex is a pair ``(sigma, tau)`` with every vertex pairing equal to 1.
    """

    def __init__(self, S: Subdivision, T: Subdivision):
        self.S = S
        self.T = T
        self.d = len(next(iter(S.cells[0])))
        vs = sorted(set().union(*S.cells))
        ws = sorted(set().union(*T.cells))
        for v in vs:
            for w in ws:
                if _dot(v, w) > 1:
                    raise NotDualPair(f"pairing <{v},{w}> exceeds 1")
        self.s_faces = simplex_faces(S.cells)
        self.t_faces = simplex_faces(T.cells)
        ones = {v: frozenset(w for w in ws if _dot(v, w) == 1) for v in vs}
        pairs = []
        for s in self.s_faces:
            W = frozenset.intersection(*(ones[v] for v in s))
            pairs.extend((s, t) for t in self.t_faces if W.issuperset(t))
        self.vertices: tuple = tuple(sorted(pairs, key=lambda p: (len(p[0]), len(p[1]), p)))
        cs = _chains_ending_at(self.s_faces)
        ct = _chains_ending_at(self.t_faces)
        cells = [(a, b) for s, t in self.vertices for a in cs[s] for b in ct[t]]
        cells.sort(key=lambda c: (len(c[0]) + len(c[1]), c))
        self.cells: tuple = tuple(cells)

    # -- basic structure ------------------------------------------------
    @staticmethod
    def cell_dim(c: Cell) -> int:
        return len(c[0]) + len(c[1]) - 2

    @staticmethod
    def cell_vertices(c: Cell) -> list:
        return [(s, t) for s in c[0] for t in c[1]]

    @staticmethod
    def cell_facets(c: Cell) -> list[Cell]:
        a, b = c
        out = []
        if len(a) > 1:
            out.extend((a[:i] + a[i + 1 :], b) for i in range(len(a)))
        if len(b) > 1:
            out.extend((a, b[:i] + b[i + 1 :]) for i in range(len(b)))
        return out

    @cached_property
    def dim(self) -> int:
        return max(self.cell_dim(c) for c in self.cells)

    @cached_property
    def top_cells(self) -> list[Cell]:
        return [c for c in self.cells if self.cell_dim(c) == self.dim]

    def f_vector(self) -> tuple[int, ...]:
        cnt = Counter(self.cell_dim(c) for c in self.cells)
        return tuple(cnt[k] for k in range(self.dim + 1))

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def is_pure(self) -> bool:
        seen = set(self.top_cells)
        frontier = list(seen)
        while frontier:
            nxt = []
            for c in frontier:
                for f in self.cell_facets(c):
                    if f not in seen:
                        seen.add(f)
                        nxt.append(f)
            frontier = nxt
        return len(seen) == len(self.cells)

    def is_pseudomanifold(self) -> bool:
        cnt = Counter(f for c in self.top_cells for f in self.cell_facets(c))
        ridges = [c for c in self.cells if self.cell_dim(c) == self.dim - 1]
        return self.is_pure() and all(cnt[r] == 2 for r in ridges) and len(cnt) == len(ridges)

    def is_connected(self) -> bool:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in self.cells:
            if self.cell_dim(c) == 1:
                a, b = self.cell_vertices(c)[0], self.cell_vertices(c)[-1]
                parent[find(a)] = find(b)
        return len({find(v) for v in self.vertices}) == 1

    # -- simplicial refinement -----------------------------------------
    def staircase_simplices(self, cells: Iterable[Cell] | None = None) -> list[tuple[int, ...]]:
        """Maximal simplices of the staircase triangulation (vertex ids)."""
        vid = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for a, b in self.top_cells if cells is None else cells:
            r, t = len(a) - 1, len(b) - 1
            for steps in itertools.combinations(range(r + t), r):
                i = j = 0
                path = [vid[(a[0], b[0])]]
                moves = set(steps)
                for k in range(r + t):
                    if k in moves:
                        i += 1
                    else:
                        j += 1
                    path.append(vid[(a[i], b[j])])
                out.append(tuple(sorted(path)))
        return out

    def homology(self) -> HomologyResult:
        return homology(self.staircase_simplices())

    # -- discriminant, covers -------------------------------------------
    @staticmethod
    def in_discriminant(c: Cell) -> bool:
        return len(c[0][0]) >= 2 and len(c[1][0]) >= 2

    @cached_property
    def discriminant_cells(self) -> tuple:
        D = tuple(c for c in self.cells if self.in_discriminant(c))
        Dset = set(D)
        for c in D:
            for f in self.cell_facets(c):
                if f not in Dset:
                    raise InternalCheckError("discriminant is not a subcomplex")
        return D

    @property
    def discriminant_vertices(self) -> list:
        return [(c[0][0], c[1][0]) for c in self.discriminant_cells if self.cell_dim(c) == 0]

    def vertex_type(self, vertex) -> tuple[int, int]:
        s, t = vertex
        if vertex not in set(self.vertices) or len(s) < 2 or len(t) < 2:
            raise NotDiscriminantVertex(f"{vertex} is not a vertex of the discriminant")
        return (len(s) - 1, len(t) - 1)

    def discriminant_graph_degrees(self) -> dict:
        """Degree of each discriminant vertex in the 1-skeleton of D."""
        deg = Counter()
        for c in self.discriminant_cells:
            if self.cell_dim(c) == 1:
                vs = self.cell_vertices(c)
                deg[vs[0]] += 1
                deg[vs[-1]] += 1
        return {v: deg[v] for v in self.discriminant_vertices}

    def gamma(self) -> GammaGraph:
        return gamma_graph(self.S, self.T)

    @cached_property
    def covers(self) -> tuple[dict, dict]:
        U: dict = defaultdict(set)
        V: dict = defaultdict(set)
        for i, (a, b) in enumerate(self.cells):
            if len(a[0]) == 1:
                U[a[0][0]].add(i)
            if len(b[0]) == 1:
                V[b[0][0]].add(i)
        return dict(U), dict(V)

    def star(self, vertex) -> set[int]:
        s, t = vertex
        return {i for i, (a, b) in enumerate(self.cells) if s in a and t in b}

    def nerve(self) -> list[tuple]:
        """Simplices of the nerve of the cover U + V (labels ('U', v) / ('V', w))."""
        members = defaultdict(set)
        U, V = self.covers
        for v, cs in U.items():
            for i in cs:
                members[i].add(("U", v))
        for w, cs in V.items():
            for i in cs:
                members[i].add(("V", w))
        simplices = {tuple(sorted(m)) for m in members.values() if m}
        return sorted(simplices)


def build_sigma(S: Subdivision, T: Subdivision) -> SigmaComplex:
    return SigmaComplex(S, T)


def discriminant(sigma: SigmaComplex) -> tuple:
    return sigma.discriminant_cells


@dataclass(frozen=True)
class NerveReport:
    ok: bool
    intersections_match_gamma: bool
    intersections_are_stars: bool
    union_is_complement: bool
    nerve_b1: int
    gamma_cycle_rank: int
    star_sizes: dict


def nerve_check(sigma: SigmaComplex) -> NerveReport:
    U, V = sigma.covers
    G = sigma.gamma()
    edges = set(G.edges)
    match = True
    stars = True
    sizes = {}
    for v in G.left:
        for w in G.right:
            inter = U.get(v, set()) & V.get(w, set())
            if bool(inter) != ((v, w) in edges):
                match = False
            if inter:
                st = sigma.star(((v,), (w,)))
                sizes[(v, w)] = len(inter)
                if inter != st:
                    stars = False
    covered = set().union(*U.values(), *V.values())
    omitted = {i for i in range(len(sigma.cells)) if i not in covered}
    D = {i for i, c in enumerate(sigma.cells) if sigma.in_discriminant(c)}
    union_ok = omitted == D
    nerve = sigma.nerve()
    labels = sorted({x for s in nerve for x in s})
    ids = {x: i for i, x in enumerate(labels)}
    H = homology([tuple(ids[x] for x in s) for s in nerve])
    b1 = H.betti[1] if len(H.betti) > 1 else 0
    ok = match and stars and union_ok and b1 == G.cycle_rank and len(H.betti) <= 2
    return NerveReport(ok, match, stars, union_ok, b1, G.cycle_rank, sizes)


@dataclass(frozen=True)
class MirrorReport:
    ok: bool
    cells_match: bool
    discriminant_match: bool
    types_swapped: bool
    covers_swapped: bool


def mirror_model(sigma: SigmaComplex) -> tuple[SigmaComplex, MirrorReport]:
    """Rebuild from the swapped data and verify the swap is an isomorphism."""
    mirror = SigmaComplex(sigma.T, sigma.S)
    swap = {c: (c[1], c[0]) for c in sigma.cells}
    cells_ok = set(swap.values()) == set(mirror.cells) and len(swap) == len(mirror.cells)
    D1 = {swap[c] for c in sigma.discriminant_cells}
    D2 = set(mirror.discriminant_cells)
    types_ok = all(
        mirror.vertex_type((t, s)) == tuple(reversed(sigma.vertex_type((s, t))))
        for s, t in sigma.discriminant_vertices
    )
    U, V = sigma.covers
    MU, MV = mirror.covers
    idx = {c: i for i, c in enumerate(mirror.cells)}
    to_m = [idx[swap[c]] for c in sigma.cells]
    covers_ok = all({to_m[i] for i in cs} == MV.get(v, set()) for v, cs in U.items()) and all(
        {to_m[i] for i in cs} == MU.get(w, set()) for w, cs in V.items()
    )
    ok = cells_ok and D1 == D2 and types_ok and covers_ok
    return mirror, MirrorReport(ok, cells_ok, D1 == D2, types_ok, covers_ok)


def vertex_coordinates(vertex) -> tuple:
    """Barycenter model in Delta x Delta-dual: concatenated barycenters."""
    s, t = vertex
    return _barycenter(s) + _barycenter(t)
