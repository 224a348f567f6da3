"""Exact integer linear algebra: Hermite and Smith normal forms, kernels, volumes.

Matrices are plain row lists of Python ints; :class:`IntegerMatrix` wraps them
where a value type with arithmetic is more convenient (monodromy, charts).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Sequence

from .errors import Degenerate

Matrix = list[list[int]]


def _copy(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in M]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g.

    When ``a`` divides ``b`` the trivial combination ``(a, 1, 0)`` is returned;
    elimination loops rely on this to avoid cycling.
    """
    if a and b % a == 0:
        return a, 1, 0
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style HNF.

    Returns ``(H, U)`` with ``U`` unimodular and ``H = U @ M``. ``H`` is in row
    echelon form, pivots are positive and the entries above a pivot lie in
    ``[0, pivot)``. Zero rows are at the bottom.
    """
    H = _copy(M)
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-combine all rows below r into row r
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, s, t = _xgcd(a, b)
            p, q = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [s * x + t * y for x, y in zip(Hr, Hi)]
            H[i] = [-q * x + p * y for x, y in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [s * x + t * y for x, y in zip(Ur, Ui)]
            U[i] = [-q * x + p * y for x, y in zip(Ur, Ui)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            f = H[i][c] // piv
            if f:
                H[i] = [x - f * y for x, y in zip(H[i], H[r])]
                U[i] = [x - f * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(S, U, V)`` with ``S = U @ M @ V`` diagonal, divisibility chain,
    nonnegative entries, and ``U``, ``V`` unimodular."""
    S = _copy(M)
    m = len(S)
    n = len(S[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry in the trailing block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = S[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            # clear column t
            for i in range(t + 1, m):
                if S[i][t]:
                    a, b = S[t][t], S[i][t]
                    g, s, u = _xgcd(a, b)
                    p, q = a // g, b // g
                    St, Si = S[t], S[i]
                    S[t] = [s * x + u * y for x, y in zip(St, Si)]
                    S[i] = [-q * x + p * y for x, y in zip(St, Si)]
                    Ut, Ui = U[t], U[i]
                    U[t] = [s * x + u * y for x, y in zip(Ut, Ui)]
                    U[i] = [-q * x + p * y for x, y in zip(Ut, Ui)]
            # clear row t
            for j in range(t + 1, n):
                if S[t][j]:
                    done = False
                    a, b = S[t][t], S[t][j]
                    g, s, u = _xgcd(a, b)
                    p, q = a // g, b // g
                    for row in S:
                        x, y = row[t], row[j]
                        row[t], row[j] = s * x + u * y, -q * x + p * y
                    for row in V:
                        x, y = row[t], row[j]
                        row[t], row[j] = s * x + u * y, -q * x + p * y
            if done and all(S[i][t] == 0 for i in range(t + 1, m)):
                # enforce divisibility against the trailing block
                piv = S[t][t]
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if S[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                S[t] = [x + y for x, y in zip(S[t], S[bad])]
                U[t] = [x + y for x, y in zip(U[t], U[bad])]
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return S, U, V


def elementary_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form."""
    if not M or not M[0]:
        return []
    S, _, _ = smith_normal_form(M)
    return [S[i][i] for i in range(min(len(S), len(S[0]))) if S[i][i]]


def kernel_basis(M: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Integer basis (rows) of the saturated lattice ``{x : M x = 0}``.

    The basis is returned in Hermite normal form so it is canonical.
    """
    n = len(M[0]) if M else ncols
    if n is None:
        raise ValueError("ncols required for an empty matrix")
    if not M:
        return identity(n)
    H, U = hermite_normal_form(transpose(M))
    K = [U[i] for i in range(len(H)) if not any(H[i])]
    if not K:
        return []
    Hk, _ = hermite_normal_form(K)
    return [row for row in Hk if any(row)]


def bareiss_det(M: Sequence[Sequence]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    A = _copy(M)
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rational_rank(M: Sequence[Sequence]) -> int:
    return len(row_echelon([list(map(Fraction, r)) for r in M])[1])


def row_echelon(A: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / Fraction(A[r][c])
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def solve_rational(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` over Q, or None if inconsistent."""
    n = len(A[0]) if A else 0
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    R, piv = row_echelon(aug)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(R, piv):
        x[c] = row[n]
    return x


def inverse_rational(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, piv = row_echelon(aug)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise Degenerate("matrix is singular")
    return [row[n:] for row in R]


def normalized_volume(points: Sequence[Sequence[int]]) -> int:
    """Lattice-normalized volume of a lattice simplex inside its affine lattice.

    Equals the index of the lattice spanned by the edge vectors in its
    saturation; 1 exactly for unimodular simplices.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    if len(pts) <= 1:
        return 1
    p0 = pts[0]
    E = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    divs = elementary_divisors(E)
    if len(divs) < len(E):
        raise Degenerate(f"points {pts} are affinely dependent")
    return prod(divs)


@dataclass(frozen=True)
class NormalForms:
    hnf: Matrix
    hnf_transform: Matrix
    snf: Matrix
    snf_left: Matrix
    snf_right: Matrix
    kernel: Matrix
    index: int

    @property
    def elementary_divisors(self) -> list[int]:
        S = self.snf
        return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def smith_hermite(M: Sequence[Sequence[int]]) -> NormalForms:
    """HNF, SNF (with transforms), kernel basis and image index of ``M``."""
    H, Uh = hermite_normal_form(M)
    S, U, V = smith_normal_form(M)
    ncols = len(M[0]) if M else 0
    K = kernel_basis(M, ncols) if M else identity(ncols)
    divs = [S[i][i] for i in range(min(len(S), ncols)) if S[i][i]]
    return NormalForms(H, Uh, S, U, V, K, prod(divs))


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix with exact arithmetic."""

    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, rows: Iterable[Iterable]) -> "IntegerMatrix":
        out = []
        for row in rows:
            r = []
            for x in row:
                if isinstance(x, Fraction):
                    if x.denominator != 1:
                        raise ValueError(f"non-integral entry {x}")
                    x = x.numerator
                r.append(int(x))
            out.append(tuple(r))
        return cls(tuple(out))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls.of(identity(n))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return IntegerMatrix.of(matmul(self.rows, other.rows))

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return IntegerMatrix.of([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return IntegerMatrix.of([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    @property
    def T(self) -> "IntegerMatrix":
        return IntegerMatrix.of(transpose(self.rows))

    def det(self) -> int:
        return bareiss_det(self.rows)

    def inverse(self) -> "IntegerMatrix":
        """Inverse of a unimodular matrix (raises if not integral)."""
        return IntegerMatrix.of(inverse_rational(self.rows))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def flatten(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.tolist()})"
