"""Integral simplicial homology via sparse boundary reduction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .intmat import elementary_divisors
from .kernels import reduce_columns


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]  # nontrivial elementary divisors per degree

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


def close_downwards(simplices: Iterable[Sequence[Hashable]]) -> list[list[tuple]]:
    """All faces of the given simplices, graded by dimension, sorted within each grade."""
    seen: set[tuple] = set()
    stack = [tuple(sorted(s)) for s in simplices]
    while stack:
        s = stack.pop()
        if s in seen or not s:
            continue
        seen.add(s)
        if len(s) > 1:
            stack.extend(s[:i] + s[i + 1 :] for i in range(len(s)))
    top = max((len(s) for s in seen), default=0)
    graded = [sorted(s for s in seen if len(s) == k + 1) for k in range(top)]
    return graded


def _boundary_columns(faces: list[tuple], cofaces: list[tuple]) -> list[list[tuple[int, int]]]:
    index = {f: i for i, f in enumerate(faces)}
    cols = []
    for s in cofaces:
        col = [(index[s[:i] + s[i + 1 :]], -1 if i % 2 else 1) for i in range(len(s))]
        col.sort()
        cols.append(col)
    return cols


def homology(simplices: Iterable[Sequence[Hashable]], closed: bool = False) -> HomologyResult:
    """Betti numbers and torsion of the simplicial complex generated by ``simplices``.

    Vertices must be mutually comparable; orientations follow sorted vertex order.
    """
    graded = [list(g) for g in simplices] if closed else close_downwards(simplices)
    n = [len(g) for g in graded]
    ranks = [0] * (len(graded) + 1)
    torsion: list[tuple[int, ...]] = [()] * len(graded)
    for k in range(1, len(graded)):
        cols = _boundary_columns(graded[k - 1], graded[k])
        r, unit = reduce_columns(cols)
        ranks[k] = r
        if not unit:
            dense = [[0] * len(cols) for _ in range(n[k - 1])]
            for j, col in enumerate(cols):
                for i, v in col:
                    dense[i][j] = v
            divs = [x for x in elementary_divisors(dense) if x > 1]
            torsion[k - 1] = tuple(divs)
    betti = tuple(n[k] - ranks[k] - ranks[k + 1] for k in range(len(graded)))
    return HomologyResult(betti, tuple(torsion))


def graph_homology(vertices: Iterable, edges: Iterable[tuple]) -> HomologyResult:
    simplices = [(v,) for v in vertices] + [tuple(sorted(e)) for e in edges]
    return homology(simplices)
