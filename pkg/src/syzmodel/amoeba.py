"""Numeric amoebas of ``sum_m a_m s^lam(m) x^m`` in the plane.

Everything here is double precision. Points are sampled by fixing one
coordinate on a grid in ``(Log_s|x|, arg x)`` and solving the remaining
univariate polynomial; distances to the spine use the exact corner-locus
segments converted to floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateSlice, EmptySample, ValidationError
from .kernels import point_cloud_distances, point_segment_distances
from .spine import Spine, corner_locus_segments
from .subdivision import HeightFunction

RESIDUAL_TOL = 1e-9
DIST_FLOOR = 1e-12
DEFAULT_LADDER = (math.e**2, math.e**4, math.e**6, math.e**8)
VARIABLES = ("x", "y", "z", "u", "v", "w")


@dataclass(frozen=True)
class LaurentInstance:
    monomials: tuple  # ((m, lam_m, a_m), ...) sorted by m
    s: float

    @classmethod
    def from_heights(cls, lam: HeightFunction | Mapping, s: float, coeffs: Mapping | None = None) -> "LaurentInstance":
        vals = lam.values if isinstance(lam, HeightFunction) else lam
        coeffs = coeffs or {}
        if not s > 1:
            raise ValidationError("s must exceed 1")
        mons = []
        for m in sorted(vals):
            h = Fraction(vals[m])
            if h.denominator != 1:
                raise ValidationError(f"height at {m} is not an integer")
            mons.append((tuple(m), int(h), complex(coeffs.get(tuple(m), 1))))
        return cls(tuple(mons), float(s))

    @property
    def d(self) -> int:
        return len(self.monomials[0][0])

    def with_s(self, s: float) -> "LaurentInstance":
        return LaurentInstance(self.monomials, float(s))

    def evaluate_terms(self, point: Sequence[complex]) -> np.ndarray:
        out = []
        for m, h, a in self.monomials:
            t = a * self.s**h
            for xi, e in zip(point, m):
                t *= complex(xi) ** e
            out.append(t)
        return np.array(out)


def laurent_string(inst: LaurentInstance | HeightFunction, variables: Sequence[str] = VARIABLES) -> str:
    """Human-readable polynomial, e.g. ``s^2 + x^-1*y^-1 + s*x^-1``.

    Monomials are ordered by decreasing height, then by exponent vector.
    """
    if isinstance(inst, HeightFunction):
        inst = LaurentInstance.from_heights(inst, 2.0)
    terms = []
    for m, h, a in sorted(inst.monomials, key=lambda t: (-t[1], t[0])):
        factors = []
        if a != 1:
            factors.append(f"({a.real:g}{a.imag:+g}j)" if a.imag else f"{a.real:g}")
        if h:
            factors.append("s" if h == 1 else f"s^{h}")
        for var, e in zip(variables, m):
            if e:
                factors.append(var if e == 1 else f"{var}^{e}")
        terms.append("*".join(factors) if factors else "1")
    return " + ".join(terms)


@dataclass
class AmoebaSample:
    points: np.ndarray  # (N, 2) Log_s images, sorted lexicographically
    s: float
    window: tuple
    degenerate_slices: int = 0
    rejected_roots: int = 0
    max_residual: float = 0.0
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.points)


def _slice_coefficients(inst: LaurentInstance, axis: int, fixed: np.ndarray):
    """Coefficients (highest degree first) of the polynomial in the free variable.

    ``fixed`` holds complex values of the sliced coordinate; returns an array of
    shape (len(fixed), deg+1) and the minimal exponent that was factored out.
    """
    free = 1 - axis
    exps = [m[free] for m, _, _ in inst.monomials]
    lo, hi = min(exps), max(exps)
    C = np.zeros((len(fixed), hi - lo + 1), dtype=complex)
    logs = math.log(inst.s)
    for m, h, a in inst.monomials:
        C[:, hi - m[free]] += a * np.exp(h * logs) * fixed ** m[axis]
    return C, lo


def _slice_roots(C: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Roots of every row at once via companion-matrix eigenvalues.

    Rows whose leading coefficient vanishes are handled one by one with
    ``numpy.roots``. Returns (row index, root) pairs and the number of
    identically zero rows.
    """
    deg = C.shape[1] - 1
    if deg == 0:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=complex), int(np.sum(C[:, 0] == 0))
    lead = C[:, 0]
    ok = lead != 0
    rows_out, roots_out = [], []
    if ok.any():
        n = int(ok.sum())
        comp = np.zeros((n, deg, deg), dtype=complex)
        comp[:, 0, :] = -C[ok, 1:] / lead[ok, None]
        if deg > 1:
            comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1
        ev = np.linalg.eigvals(comp)
        rows_out.append(np.repeat(np.flatnonzero(ok), deg))
        roots_out.append(ev.ravel())
    degenerate = 0
    for k in np.flatnonzero(~ok):
        nz = np.flatnonzero(C[k] != 0)
        if len(nz) == 0:
            degenerate += 1
            continue
        r = np.roots(C[k, nz[0] :])
        rows_out.append(np.full(len(r), k))
        roots_out.append(r)
    if not rows_out:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=complex), degenerate
    return np.concatenate(rows_out), np.concatenate(roots_out).astype(complex), degenerate


def _polish(C: np.ndarray, rows: np.ndarray, r: np.ndarray, steps: int = 3) -> np.ndarray:
    """Newton steps on each root against its own row, vectorized."""
    deg = C.shape[1] - 1
    for _ in range(steps):
        p = np.zeros_like(r)
        dp = np.zeros_like(r)
        for j in range(deg + 1):
            dp = dp * r + p
            p = p * r + C[rows, j]
        safe = dp != 0
        r = np.where(safe, r - np.where(safe, p / np.where(safe, dp, 1), 0), r)
    return r


def _relative_residuals(inst: LaurentInstance, xy: np.ndarray) -> np.ndarray:
    """``|sum of terms| / max |term|`` at each complex point (N, 2)."""
    logs = math.log(inst.s)
    total = np.zeros(len(xy), dtype=complex)
    biggest = np.zeros(len(xy))
    for m, h, a in inst.monomials:
        t = a * math.exp(h * logs) * xy[:, 0] ** m[0] * xy[:, 1] ** m[1]
        total += t
        biggest = np.maximum(biggest, np.abs(t))
    return np.abs(total) / biggest


def sample_amoeba(
    inst: LaurentInstance,
    window: Sequence[float],
    grid: tuple[int, int] = (200, 48),
    axes: Sequence[int] = (0, 1),
    margin: float = 0.0,
) -> AmoebaSample:
    """Sample ``Log_s`` of the zero set inside ``window = (x0, y0, x1, y1)``.

    For every slicing axis, the sliced coordinate runs over ``n_r`` values of
    ``Log_s|.|`` spanning the window and ``n_phi`` arguments. A root is kept
    when the polynomial's magnitude is below ``1e-9`` times the largest
    monomial magnitude there. ``margin`` widens the window on all sides.
    """
    if inst.d != 2:
        raise ValidationError("amoeba sampling is planar")
    x0, y0, x1, y1 = (float(v) for v in window)
    x0, y0, x1, y1 = x0 - margin, y0 - margin, x1 + margin, y1 + margin
    if not (x0 < x1 and y0 < y1):
        raise ValidationError("empty window")
    n_r, n_phi = grid
    logs = math.log(inst.s)
    phis = 2 * math.pi * (np.arange(n_phi) + 0.5) / n_phi
    chunks = []
    degenerate = rejected = 0
    worst = 0.0
    lo_hi = ((x0, x1), (y0, y1))
    with np.errstate(all="ignore"):
        for axis in axes:
            a0, a1 = lo_hi[axis]
            us = np.linspace(a0, a1, n_r)
            fixed = (np.exp(us * logs)[:, None] * np.exp(1j * phis)[None, :]).ravel()
            fixed_u = np.repeat(us, n_phi)
            C, _ = _slice_coefficients(inst, axis, fixed)
            rows, roots, deg0 = _slice_roots(C)
            degenerate += deg0
            good = np.isfinite(roots) & (roots != 0)
            rows, roots = rows[good], roots[good]
            roots = _polish(C, rows, roots)
            xy = np.empty((len(roots), 2), dtype=complex)
            xy[:, axis] = fixed[rows]
            xy[:, 1 - axis] = roots
            res = _relative_residuals(inst, xy)
            keep = res < RESIDUAL_TOL
            rejected += int(np.sum(~keep))
            if keep.any():
                worst = max(worst, float(res[keep].max()))
            pts = np.empty((int(keep.sum()), 2))
            pts[:, axis] = fixed_u[rows[keep]]
            pts[:, 1 - axis] = np.log(np.abs(roots[keep])) / logs
            chunks.append(pts)
    arr = np.vstack(chunks) if chunks else np.zeros((0, 2))
    arr = arr[_inside(arr, (x0, y0, x1, y1))]
    if len(arr):
        arr = arr[np.lexsort((arr[:, 1], arr[:, 0]))]
    return AmoebaSample(arr, inst.s, (x0, y0, x1, y1), degenerate, rejected, worst)


def check_slice(inst: LaurentInstance, axis: int, value: complex) -> np.ndarray:
    """Coefficients of one slice; raises :class:`DegenerateSlice` if they all vanish."""
    C, _ = _slice_coefficients(inst, axis, np.array([complex(value)]))
    if np.max(np.abs(C[0])) <= DIST_FLOOR * max(1.0, np.max(np.abs(C))):
        raise DegenerateSlice(f"slice {value} along axis {axis} is identically zero")
    return C[0]


def spine_segments(spine_or_lam: Spine | HeightFunction, window: Sequence) -> np.ndarray:
    """Float array (K, 4) of corner-locus segments clipped to ``window``."""
    lam = spine_or_lam.lam if isinstance(spine_or_lam, Spine) else spine_or_lam
    segs = corner_locus_segments(lam, window)
    return np.array([[float(a[0]), float(a[1]), float(b[0]), float(b[1])] for a, b in segs], dtype=float).reshape(-1, 4)


def spine_net(segments: np.ndarray, step: float) -> np.ndarray:
    """Points along each segment at spacing at most ``step``, endpoints included."""
    out = []
    for ax, ay, bx, by in segments:
        n = max(1, int(math.ceil(math.hypot(bx - ax, by - ay) / step)))
        t = np.linspace(0.0, 1.0, n + 1)
        out.append(np.column_stack((ax + t * (bx - ax), ay + t * (by - ay))))
    return np.vstack(out) if out else np.zeros((0, 2))


def _inside(points: np.ndarray, window: Sequence[float]) -> np.ndarray:
    x0, y0, x1, y1 = window
    return (points[:, 0] >= x0) & (points[:, 0] <= x1) & (points[:, 1] >= y0) & (points[:, 1] <= y1)


def distance_to_spine(
    sample: AmoebaSample,
    spine_or_lam: Spine | HeightFunction,
    window: Sequence[float],
    margin: float = 1.0,
    net_step: float = 0.02,
) -> tuple[float, float]:
    """Two one-sided distances between the cloud and the spine on ``window``.

    ``sup_dist`` runs over sample points inside the window, measured to the
    spine clipped to the window widened by ``margin``. ``spine_cover_dist``
    runs over a net of the spine inside the window, measured to the whole
    cloud (which may extend into the margin).
    """
    if len(sample.points) == 0:
        raise EmptySample("no amoeba points")
    x0, y0, x1, y1 = (float(v) for v in window)
    wide = (x0 - margin, y0 - margin, x1 + margin, y1 + margin)
    inner = sample.points[_inside(sample.points, (x0, y0, x1, y1))]
    if len(inner) == 0:
        raise EmptySample("no amoeba points inside the window")
    segs_wide = spine_segments(spine_or_lam, [Fraction(v).limit_denominator(10**6) for v in wide])
    segs = spine_segments(spine_or_lam, [Fraction(v).limit_denominator(10**6) for v in (x0, y0, x1, y1)])
    sup = float(np.max(point_segment_distances(inner, segs_wide)))
    net = spine_net(segs, net_step)
    cover = float(np.max(point_cloud_distances(net, sample.points))) if len(net) else 0.0
    return max(sup, 0.0) if sup > DIST_FLOOR else 0.0, cover if cover > DIST_FLOOR else 0.0


@dataclass(frozen=True)
class ConvergenceRow:
    s: float
    log_s: float
    n_points: int
    sup_dist: float
    spine_cover_dist: float

    @property
    def hausdorff(self) -> float:
        return max(self.sup_dist, self.spine_cover_dist)


def convergence_experiment(
    inst: LaurentInstance,
    s_list: Sequence[float] = DEFAULT_LADDER,
    window: Sequence[float] = (-3, -3, 3, 3),
    grid: tuple[int, int] = (300, 48),
    margin: float = 1.0,
    slack: float = 0.10,
    check: bool = True,
) -> list[ConvergenceRow]:
    """Distance table along an increasing ladder of ``s``.

    With ``check`` set, asserts that ``sup_dist`` never grows by more than
    ``slack`` (relative) from one rung to the next.
    """
    s_list = [float(s) for s in s_list]
    if any(b <= a for a, b in zip(s_list, s_list[1:])):
        raise ValidationError("s ladder must be strictly increasing")
    lam = HeightFunction({m: h for m, h, _ in inst.monomials})
    rows = []
    for s in s_list:
        sample = sample_amoeba(inst.with_s(s), window, grid, margin=margin)
        sup, cover = distance_to_spine(sample, lam, window, margin)
        rows.append(ConvergenceRow(s, math.log(s), len(sample), sup, cover))
    if check:
        for a, b in zip(rows, rows[1:]):
            if b.sup_dist > a.sup_dist * (1 + slack) + DIST_FLOOR:
                raise AssertionError(f"sup_dist grew from {a.sup_dist} to {b.sup_dist}")
    return rows


def dominance_gaps(sample: AmoebaSample, inst: LaurentInstance) -> np.ndarray:
    """For each point, how far the top affine function beats the runner-up."""
    M = np.array([m for m, _, _ in inst.monomials], dtype=float)
    H = np.array([h for _, h, _ in inst.monomials], dtype=float)
    vals = sample.points @ M.T + H
    vals.sort(axis=1)
    return vals[:, -1] - vals[:, -2]


def dominance_bound(inst: LaurentInstance) -> float:
    """A zero needs ``|top term| <= sum of the others``, so the gap is at most ``log_s(N-1)``."""
    n = len(inst.monomials)
    amax = max(abs(a) for _, _, a in inst.monomials)
    amin = min(abs(a) for _, _, a in inst.monomials)
    return math.log((n - 1) * amax / amin) / math.log(inst.s)


def dominance_check(sample: AmoebaSample, inst: LaurentInstance) -> bool:
    """No sampled zero lies where one monomial dominates by more than :func:`dominance_bound`."""
    if len(sample) == 0:
        return True
    return bool(np.all(dominance_gaps(sample, inst) <= dominance_bound(inst) + 1e-9))
