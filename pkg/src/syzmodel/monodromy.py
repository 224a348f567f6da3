"""Integral affine structure: chart lattices, transitions, loop monodromy.

Charts:

* ``U(v)`` for a vertex ``v`` of S: a basis ``b`` of ``{n : <v, n> = 0}``,
  oriented so that ``det[b | u] = +1`` whenever ``<v, u> = 1``.
* ``V(w)`` for a vertex ``w`` of T: vectors ``c`` with ``[w | c]`` unimodular,
  oriented so that ``det[c | w] = +1``; their classes are a basis of ``Z^d / w``.

With these orientations every transition has determinant +1. Monodromy
matrices compose right-to-left along the loop, in the basis of ``U(v_0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    InternalCheckError,
    InvalidLoop,
    NonPrimitive,
    NotAdjacent,
    NotDiscriminantVertex,
    PairingViolation,
)
from .intmat import (
    IntegerMatrix,
    bareiss_det,
    content,
    elementary_divisors,
    hermite_normal_form,
    inverse_rational,
    kernel_basis,
    normalized_volume,
    transpose,
)
from .polyhedra import _dot


@dataclass(frozen=True)
class Chart:
    kind: str  # "U" or "V"
    vertex: tuple
    basis: tuple  # d-1 integer vectors

    def matrix(self) -> list[list[int]]:
        """Basis vectors as columns."""
        return transpose([list(b) for b in self.basis])


def _completion(v: Sequence[int]) -> list[int]:
    """Some ``u`` with ``<v, u> = 1``."""
    H, U = hermite_normal_form([[x] for x in v])
    # U v = (1, 0, ..., 0)^T, so the first row of U pairs to 1 with v
    return list(U[0])


def _flip_last(basis: list[list[int]]) -> list[list[int]]:
    return basis[:-1] + [[-x for x in basis[-1]]]


def chart_u(v: Sequence[int]) -> Chart:
    v = tuple(v)
    if content(v) != 1:
        raise NonPrimitive(f"{v} is not primitive")
    B = kernel_basis([list(v)], len(v))
    if len(B) != len(v) - 1:
        raise InternalCheckError("kernel has the wrong rank")
    if [x for x in elementary_divisors(B) if x != 1]:
        raise InternalCheckError("kernel basis is not saturated")
    u = _completion(v)
    if bareiss_det(transpose(B + [u])) < 0:
        B = _flip_last(B)
    return Chart("U", v, tuple(tuple(b) for b in B))


def chart_v(w: Sequence[int]) -> Chart:
    w = tuple(w)
    if content(w) != 1:
        raise NonPrimitive(f"{w} is not primitive; no unimodular completion exists")
    H, U = hermite_normal_form([[x] for x in w])
    Uinv = IntegerMatrix.of(inverse_rational(U))  # first column is w
    cols = [list(Uinv.column(j)) for j in range(1, len(w))]
    if list(Uinv.column(0)) != list(w):
        raise InternalCheckError("completion does not start with w")
    if bareiss_det(transpose(cols + [list(w)])) < 0:
        cols = _flip_last(cols)
    return Chart("V", w, tuple(tuple(c) for c in cols))


def chart(vertex: Sequence[int], kind: str) -> Chart:
    """``kind='U'`` for vertices of S, ``'V'`` for vertices of T."""
    if kind == "U":
        return chart_u(vertex)
    if kind == "V":
        return chart_v(vertex)
    raise ValueError(f"unknown chart kind {kind!r}")


class Atlas:
    """Cached charts and transitions for one pair of vertex sets."""

    def __init__(self):
        self._u: dict = {}
        self._v: dict = {}
        self._f: dict = {}

    def U(self, v) -> Chart:
        v = tuple(v)
        if v not in self._u:
            self._u[v] = chart_u(v)
        return self._u[v]

    def V(self, w) -> Chart:
        w = tuple(w)
        if w not in self._v:
            self._v[w] = chart_v(w)
        return self._v[w]

    def transition(self, v, w) -> IntegerMatrix:
        """Matrix of the projection ``Z^d_v -> Z^d / w`` in the chart bases."""
        v, w = tuple(v), tuple(w)
        key = (v, w)
        if key not in self._f:
            if _dot(v, w) != 1:
                raise NotAdjacent(f"<{v},{w}> != 1")
            b = self.U(v).basis
            c = self.V(w).basis
            Winv = inverse_rational(transpose([list(w)] + [list(x) for x in c]))
            cols = []
            for bi in b:
                coords = [sum(r[k] * bi[k] for k in range(len(bi))) for r in Winv]
                cols.append(coords[1:])
            f = IntegerMatrix.of(transpose(cols))
            if f.det() != 1:
                raise InternalCheckError(f"transition {v}->{w} has determinant {f.det()}")
            self._f[key] = f
        return self._f[key]

    def monodromy(self, loop: Sequence) -> IntegerMatrix:
        """Compose transitions along ``v0, w0, v1, w1, ..., v0`` (right-to-left)."""
        loop = [tuple(x) for x in loop]
        if len(loop) < 1 or loop[0] != loop[-1] or len(loop) % 2 != 1:
            raise InvalidLoop("a loop alternates v, w, ... and returns to its first vertex")
        d = len(loop[0])
        M = IntegerMatrix.identity(d - 1)
        for i in range(len(loop) - 1):
            a, b = loop[i], loop[i + 1]
            if _dot(a, b) != 1:
                raise InvalidLoop(f"{a} and {b} are not joined in the graph")
            if i % 2 == 0:
                M = self.transition(a, b) @ M
            else:
                M = self.transition(b, a).inverse() @ M
        return M

    def primary_formula(self, v0, w0, v1, w1) -> IntegerMatrix:
        """``n -> n + <v1, n>(w1 - w0)`` on ``Z^d_{v0}`` in the ``U(v0)`` basis."""
        for v in (v0, v1):
            for w in (w0, w1):
                if _dot(v, w) != 1:
                    raise PairingViolation(f"<{v},{w}> != 1")
        b = self.U(v0).basis
        d = len(v0)
        B = transpose([list(x) for x in b])
        shift = [a - c for a, c in zip(w1, w0)]
        images = []
        for n in b:
            s = _dot(v1, n)
            images.append([n[k] + s * shift[k] for k in range(d)])
        coords = _solve_in_basis(B, images)
        return IntegerMatrix.of(transpose(coords))


def _solve_in_basis(B: list[list[int]], vectors: list[list[int]]) -> list[list[int]]:
    """Integer coordinates of each vector in the column basis ``B`` (d x (d-1))."""
    from .intmat import solve_rational

    out = []
    for x in vectors:
        sol = solve_rational(B, x)
        if sol is None:
            raise InternalCheckError("vector outside the chart lattice")
        if any(s.denominator != 1 for s in sol):
            raise InternalCheckError("non-integral chart coordinates")
        if [sum(B[i][j] * sol[j] for j in range(len(sol))) for i in range(len(B))] != list(x):
            raise InternalCheckError("vector outside the chart lattice")
        out.append([int(s) for s in sol])
    return out


_DEFAULT = Atlas()


def transition(v, w) -> IntegerMatrix:
    return _DEFAULT.transition(v, w)


def monodromy(loop: Sequence) -> IntegerMatrix:
    return _DEFAULT.monodromy(loop)


def primary_formula(v0, w0, v1, w1) -> IntegerMatrix:
    return _DEFAULT.primary_formula(v0, w0, v1, w1)


def is_unipotent_square_zero(M: IntegerMatrix) -> bool:
    N = M - IntegerMatrix.identity(M.shape[0])
    return (N @ N).is_zero()


@dataclass(frozen=True)
class LocalMonodromy:
    sigma: tuple
    tau: tuple
    type: tuple[int, int]
    base: tuple  # (v0, w0)
    generators: tuple  # IntegerMatrix, ordered by (i, j)
    index: int
    rank: int
    commute: bool
    square_zero: bool
    vol_sigma: int
    vol_tau: int

    @property
    def paper_index(self) -> int:
        return self.vol_sigma * self.vol_tau

    @property
    def tensor_index(self) -> int:
        """Index of the span of rank-one maps ``(w_j - w_0) (x) <v_i - v_0, .>``."""
        k, l = self.type
        return self.vol_sigma ** l * self.vol_tau ** k


def local_monodromy(sigma: Sequence, tau: Sequence, atlas: Atlas | None = None) -> LocalMonodromy:
    """Generators ``T(v0 w0 vi wj)`` at the discriminant vertex ``(sigma, tau)``."""
    atlas = atlas or _DEFAULT
    vs = sorted(tuple(v) for v in sigma)
    ws = sorted(tuple(w) for w in tau)
    k, l = len(vs) - 1, len(ws) - 1
    if k < 1 or l < 1:
        raise NotDiscriminantVertex("both simplices must be positive dimensional")
    if any(_dot(v, w) != 1 for v in vs for w in ws):
        raise NotDiscriminantVertex("simplices do not pair to 1")
    v0, w0 = vs[0], ws[0]
    gens = []
    for v in vs[1:]:
        for w in ws[1:]:
            M = atlas.monodromy([v0, w0, v, w, v0])
            if M != atlas.primary_formula(v0, w0, v, w):
                raise InternalCheckError("composed monodromy differs from the closed formula")
            gens.append(M)
    commute = all((A @ B) == (B @ A) for A in gens for B in gens)
    sq = all(is_unipotent_square_zero(M) for M in gens)
    I = IntegerMatrix.identity(len(v0) - 1)
    flat = [list((M - I).flatten()) for M in gens]
    divs = [x for x in elementary_divisors(flat) if x != 0]
    index = 1
    for x in divs:
        index *= x
    return LocalMonodromy(
        tuple(vs), tuple(ws), (k, l), (v0, w0), tuple(gens), index, len(divs), commute, sq,
        normalized_volume(vs), normalized_volume(ws),
    )


# ---------------------------------------------------------------------------
# mirror duality


def mirror_charts(v, w, atlas: Atlas | None = None) -> tuple[list[list[int]], list[list[int]]]:
    """Dual bases: mirror U(w) basis (dual to V(w)) and mirror V(v) basis (dual to U(v))."""
    atlas = atlas or _DEFAULT
    c = [list(x) for x in atlas.V(w).basis]
    Cinv = inverse_rational(transpose(c + [list(w)]))
    mu = [[int(x) for x in Cinv[i]] for i in range(len(c))]
    b = [list(x) for x in atlas.U(v).basis]
    u = _completion(v)
    Binv = inverse_rational(transpose(b + [u]))
    mv = [[int(x) for x in Binv[i]] for i in range(len(b))]
    return mu, mv


def mirror_transition(v, w, atlas: Atlas | None = None) -> IntegerMatrix:
    """Projection ``M_w -> M / v`` (mirror roles swapped) in the dual bases."""
    mu, mv = mirror_charts(v, w, atlas)
    Vinv = inverse_rational(transpose([list(v)] + mv))
    cols = []
    for r in mu:
        if _dot(r, w) != 0:
            raise InternalCheckError("mirror chart vector not orthogonal to w")
        coords = [sum(row[k] * r[k] for k in range(len(r))) for row in Vinv]
        cols.append(coords[1:])
    return IntegerMatrix.of(transpose(cols))


def transpose_inverse(M: IntegerMatrix) -> IntegerMatrix:
    return M.T.inverse()


def mirror_transition_check(edges: Sequence[tuple], atlas: Atlas | None = None) -> bool:
    """For every edge ``(v, w)``: mirror ``w -> v`` transition equals ``f_vw`` transposed.

    Equivalently the map between the same two charts, read from the ``v``
    side, is the transpose inverse ``(f_vw^t)^{-1}``.
    """
    atlas = atlas or _DEFAULT
    for v, w in edges:
        f = atlas.transition(v, w)
        g = mirror_transition(v, w, atlas)
        if g != f.T:
            return False
        if g.inverse() != transpose_inverse(f):
            return False
        if transpose_inverse(transpose_inverse(f)) != f:
            return False
    return True


def primary_loops(edges: Sequence[tuple]) -> list[tuple]:
    """All 4-cycles ``(v0, w0, v1, w1)`` in the bipartite graph with ``v0 != v1``, ``w0 != w1``."""
    adj: dict = {}
    for v, w in edges:
        adj.setdefault(tuple(v), set()).add(tuple(w))
    out = []
    for v0 in sorted(adj):
        for v1 in sorted(adj):
            if v1 == v0:
                continue
            common = sorted(adj[v0] & adj[v1])
            out.extend((v0, w0, v1, w1) for w0 in common for w1 in common if w0 != w1)
    return out
