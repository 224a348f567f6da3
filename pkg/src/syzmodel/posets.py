"""Finite graded posets, chains and order complexes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence


def _sort_key(x):
    if isinstance(x, frozenset):
        return (len(x), sorted(x))
    return (0, x)


@dataclass(frozen=True)
class Poset:
    """A finite poset given by explicit down-sets.

    ``down[x]`` is the set of elements ``<= x`` (including ``x``); ``rank`` is
    any strictly monotone grading supplied by the caller.
    """

    elements: tuple
    down: Mapping[Hashable, frozenset]
    rank: Mapping[Hashable, int]

    @classmethod
    def from_relation(cls, elements: Iterable, leq: Callable, rank: Callable) -> "Poset":
        els = tuple(sorted(elements, key=lambda e: (rank(e), _sort_key(e))))
        down = {x: frozenset(y for y in els if leq(y, x)) for x in els}
        return cls(els, down, {x: rank(x) for x in els})

    @classmethod
    def from_sets(cls, sets: Iterable[frozenset], rank: Callable | None = None) -> "Poset":
        """Inclusion order on a family of sets; default rank is ``len - 1``."""
        sets = {frozenset(s) for s in sets}
        return cls.from_relation(sets, lambda a, b: a <= b, rank or (lambda s: len(s) - 1))

    def leq(self, a, b) -> bool:
        return a in self.down[b]

    def lt(self, a, b) -> bool:
        return a != b and a in self.down[b]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def up(self, x) -> frozenset:
        return frozenset(y for y in self.elements if x in self.down[y])

    def maximal(self) -> list:
        return [x for x in self.elements if len(self.up(x)) == 1]

    def chains(self) -> list[tuple]:
        """All nonempty chains, each listed bottom to top."""
        out: list[tuple] = []
        above = {x: [y for y in self.elements if self.lt(x, y)] for x in self.elements}

        def extend(chain):
            out.append(chain)
            for y in above[chain[-1]]:
                extend(chain + (y,))

        for x in self.elements:
            extend((x,))
        out.sort(key=lambda c: (len(c), [self.elements.index(e) for e in c]))
        return out

    def is_order_preserving(self, f: Mapping, target: "Poset") -> bool:
        return all(
            target.leq(f[a], f[b]) for b in self.elements for a in self.down[b]
        )

    def is_isomorphic_via(self, f: Mapping, target: "Poset") -> bool:
        """Check that ``f`` is an order isomorphism onto ``target``."""
        if len(set(f.values())) != len(self.elements) or set(f.values()) != set(target.elements):
            return False
        return all(
            (a in self.down[b]) == target.leq(f[a], f[b]) for a in self.elements for b in self.elements
        )


def order_complex(poset: Poset) -> list[tuple]:
    """Simplices of the order complex (same as :meth:`Poset.chains`)."""
    return poset.chains()


def product_poset(P: Poset, Q: Poset) -> Poset:
    els = [(p, q) for p in P.elements for q in Q.elements]
    return Poset.from_relation(
        els, lambda a, b: P.leq(a[0], b[0]) and Q.leq(a[1], b[1]), lambda a: P.rank[a[0]] + Q.rank[a[1]]
    )


def euler_characteristic(simplices: Sequence[Sequence]) -> int:
    return sum((-1) ** (len(s) - 1) for s in simplices)
