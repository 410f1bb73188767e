"""Indexed set families: a canonical bijection between a finite family and 0..N-1.

Orders are fixed globally so that every operator matrix built from them is
reproducible entry for entry:

* independent sets: by cardinality, then by the sorted vertex tuple
  (``itertools.combinations`` order); index 0 is always the empty set;
* tuples over ``range(n)``: odometer (row-major) order;
* multisets: sorted tuples in lexicographic order
  (``itertools.combinations_with_replacement``);
* set pairs with base ``(S, T, Q)``: ``Q`` outermost over ``I_{k-2}``, then
  unordered ``S <= T`` over ``I_1`` by index.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .graphs import Graph, VertexSet, mask_of, popcount

MAX_TUPLES = 2_000_000


class FamilyTooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class IndexedFamily:
    kind: str
    params: tuple
    elements: tuple
    _index: dict = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __contains__(self, element):
        return element in self._index

    def __eq__(self, other):
        return (isinstance(other, IndexedFamily) and self.kind == other.kind
                and self.params == other.params)

    def __hash__(self):
        return hash((self.kind, self.params))

    def index(self, element) -> int:
        return self._index[element]

    def get(self, element, default=None):
        return self._index.get(element, default)

    def describe(self) -> str:
        return f"{self.kind}{self.params}"

    def size_of_rank(self, r: int) -> int:
        """|I_{=r}| for set families."""
        if self.kind != "IndependentSets":
            raise TypeError("rank sizes are defined for set families only")
        return sum(1 for e in self.elements if popcount(e) == r)


def _graph_key(G: Graph):
    return (G.n, tuple(sorted(G.edges)))


def independent_sets(G: Graph, k: int) -> IndexedFamily:
    if k < 0:
        raise ValueError("k must be nonnegative")
    elems: list[VertexSet] = [0]
    layer = [()]
    adj = G.adjacency
    for r in range(1, min(k, G.n) + 1):
        nxt = []
        for combo in layer:
            start = combo[-1] + 1 if combo else 0
            cmask = mask_of(combo)
            for v in range(start, G.n):
                if not adj[v] & cmask:
                    nxt.append(combo + (v,))
        if not nxt:
            break
        elems.extend(mask_of(c) for c in nxt)
        layer = nxt
    return IndexedFamily("IndependentSets", (_graph_key(G), k), tuple(elems))


def tuples(n: int, t: int) -> IndexedFamily:
    if n ** t > MAX_TUPLES:
        raise FamilyTooLarge(f"refusing to materialise {n}^{t} tuples")
    return IndexedFamily("Tuples", (n, t), tuple(itertools.product(range(n), repeat=t)))


def multisets(n: int, m: int) -> IndexedFamily:
    return IndexedFamily("Multisets", (n, m),
                         tuple(itertools.combinations_with_replacement(range(n), m)))


def set_pairs_with_base(G: Graph, k: int) -> IndexedFamily:
    if k < 2:
        raise ValueError("k must be at least 2")
    i1 = independent_sets(G, 1).elements
    base = independent_sets(G, k - 2).elements
    elems = tuple((i1[a], i1[b], q) for q in base
                  for a in range(len(i1)) for b in range(a, len(i1)))
    return IndexedFamily("SetPairsWithBase", (_graph_key(G), k), elems)


def multiplicities(m: tuple[int, ...], n: int) -> list[int]:
    c = Counter(m)
    return [c.get(v, 0) for v in range(n)]
