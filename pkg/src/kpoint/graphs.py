"""Finite simple graphs on vertices 0..n-1, DIMACS I/O and small generators.

Vertex sets are plain ``int`` bitmasks (bit ``v`` set iff ``v`` is a member),
so the vertex count is capped at 32.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

MAX_VERTICES = 32

VertexSet = int


class GraphError(ValueError):
    pass


class DimacsError(GraphError):
    pass


def mask_of(vertices) -> VertexSet:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: VertexSet) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def popcount(mask: VertexSet) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise GraphError(f"bad edge ({u}, {v}) for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            norm.add((min(u, v), max(u, v)))
        return cls(n, frozenset(norm))

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def non_edges(self) -> list[tuple[int, int]]:
        """Pairs u < v that are distinct and not adjacent."""
        return [(u, v) for u, v in itertools.combinations(range(self.n), 2)
                if not self.has_edge(u, v)]

    def is_independent(self, mask: VertexSet) -> bool:
        for v in members(mask):
            if self.adjacency[v] & mask:
                return False
        return True

    def degree(self, v: int) -> int:
        return popcount(self.adjacency[v])


# -- DIMACS -----------------------------------------------------------------

def parse_dimacs(text: str) -> Graph:
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])  # edge count must parse; the e lines are authoritative
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if not 0 <= n <= MAX_VERTICES:
                raise DimacsError(f"line {lineno}: vertex count {n} outside 0..{MAX_VERTICES}")
        elif parts[0] == "e":
            if n is None:
                raise DimacsError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise DimacsError(f"line {lineno}: malformed edge {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed edge {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(f"line {lineno}: vertex out of range in {line!r}")
            if u == v:
                raise DimacsError(f"line {lineno}: loop edge {line!r}")
            edges.add((min(u, v) - 1, max(u, v) - 1))
        else:
            raise DimacsError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n is None:
        raise DimacsError("missing problem line")
    return Graph(n, frozenset(edges))


def write_dimacs(G: Graph) -> str:
    lines = [f"p edge {G.n} {len(G.edges)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in G.sorted_edges()]
    return "\n".join(lines) + "\n"


# -- generators ---------------------------------------------------------------

# Knuth's MMIX constants; uniform deviates take the top 53 bits of the state.
LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


def lcg_uniforms(seed: int):
    state = seed & _MASK64
    while True:
        state = (state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
        yield (state >> 11) / float(1 << 53)


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete needs n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def empty(n: int) -> Graph:
    if n < 1:
        raise GraphError("empty needs n >= 1")
    return Graph(n, frozenset())


def kneser(m: int, s: int) -> Graph:
    if m < 1 or s < 1 or s > m:
        raise GraphError(f"invalid kneser parameters ({m}, {s})")
    verts = [frozenset(c) for c in itertools.combinations(range(m), s)]
    edges = [(i, j) for i, j in itertools.combinations(range(len(verts)), 2)
             if not verts[i] & verts[j]]
    return Graph.from_edges(len(verts), edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi graph; pair (i, j), i < j in lexicographic order, is an
    edge iff the next LCG deviate is < p."""
    if n < 1:
        raise GraphError("gnp needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability {p} outside [0, 1]")
    draws = lcg_uniforms(seed)
    edges = [(i, j) for i, j in itertools.combinations(range(n), 2) if next(draws) < p]
    return Graph.from_edges(n, edges)


GENERATORS = {
    "cycle": cycle,
    "path": path,
    "complete": complete,
    "empty": empty,
    "petersen": petersen,
    "kneser": kneser,
    "gnp": gnp,
}


def generate(family: str, *params) -> Graph:
    try:
        fn = GENERATORS[family]
    except KeyError:
        raise GraphError(f"unknown graph family {family!r}") from None
    try:
        return fn(*params)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {family}: {exc}") from None


def parse_graph_spec(spec: str) -> Graph:
    """``name:p1,p2,...`` (e.g. ``cycle:5``, ``gnp:7,0.4,11``) or a DIMACS path."""
    name, _, rest = spec.partition(":")
    if name in GENERATORS:
        params = []
        for tok in filter(None, rest.split(",")):
            try:
                params.append(int(tok))
            except ValueError:
                try:
                    params.append(float(tok))
                except ValueError:
                    raise GraphError(f"bad parameter {tok!r} in {spec!r}") from None
        return generate(name, *params)
    try:
        with open(spec, encoding="utf-8") as fh:
            return parse_dimacs(fh.read())
    except FileNotFoundError:
        raise GraphError(f"{spec!r} is neither a known generator nor a readable file") from None


# -- independence number ------------------------------------------------------

def _clique_cover_size(G: Graph, cands: int) -> int:
    adj = G.adjacency
    count = 0
    while cands:
        low = cands & -cands
        clique_cands = cands & adj[low.bit_length() - 1]
        cands &= ~low
        while clique_cands:
            w = clique_cands & -clique_cands
            cands &= ~w
            clique_cands &= adj[w.bit_length() - 1]
        count += 1
    return count


def alpha_exact(G: Graph) -> int:
    """Independence number by branch and bound with a greedy clique-cover bound."""
    adj = G.adjacency
    best = 0

    def expand(cands: int, size: int):
        nonlocal best
        if not cands:
            best = max(best, size)
            return
        if size + _clique_cover_size(G, cands) <= best:
            return
        # branch on a minimum-degree candidate: take it, or drop it
        v = min(members(cands), key=lambda u: popcount(adj[u] & cands))
        bit = 1 << v
        expand(cands & ~adj[v] & ~bit, size + 1)
        expand(cands & ~bit, size)

    expand((1 << G.n) - 1, 0)
    return best


def alpha_enumerate(G: Graph) -> int:
    """Plain subset enumeration; only for cross-checking small graphs."""
    if G.n > 20:
        raise GraphError("enumeration oracle limited to n <= 20")
    return max(popcount(m) for m in range(1 << G.n) if G.is_independent(m))


def maximum_independent_set(G: Graph) -> VertexSet:
    target = alpha_exact(G)
    for size in range(target, -1, -1):
        for combo in itertools.combinations(range(G.n), size):
            m = mask_of(combo)
            if G.is_independent(m):
                return m
    return 0


# -- canonical form (tiny graphs only) -----------------------------------------

def canonical_form(G: Graph) -> tuple[int, tuple[int, ...]]:
    """Lexicographically largest column-wise upper-triangle adjacency code over
    all vertex orderings, found by backtracking with prefix pruning."""
    n = G.n
    adj = G.adjacency
    best: list[int] | None = None

    def columns(order):
        cols = []
        for j, v in enumerate(order):
            code = 0
            for i in range(j):
                code = code << 1 | (adj[v] >> order[i] & 1)
            cols.append(code)
        return cols

    def search(order: list[int], cols: list[int], remaining: int):
        nonlocal best
        j = len(order)
        if j == n:
            if best is None or cols > best:
                best = list(cols)
            return
        cand = []
        for v in members(remaining):
            code = 0
            for u in order:
                code = code << 1 | (adj[v] >> u & 1)
            cand.append((code, v))
        top = max(c for c, _ in cand)
        if best is not None:
            prefix = cols + [top]
            if prefix < best[: j + 1]:
                return
        for code, v in cand:
            if code != top:
                continue
            order.append(v)
            cols.append(code)
            search(order, cols, remaining & ~(1 << v))
            order.pop()
            cols.pop()

    search([], [], (1 << n) - 1)
    return n, tuple(best or ())


def is_isomorphic(G: Graph, H: Graph) -> bool:
    if G.n != H.n or len(G.edges) != len(H.edges):
        return False
    if sorted(G.degree(v) for v in range(G.n)) != sorted(H.degree(v) for v in range(H.n)):
        return False
    return canonical_form(G) == canonical_form(H)


def surjection_count(t: int, m: int) -> int:
    """Number of t-tuples over an m-set that use every element (0^0 = 1)."""
    if t < 0 or m < 0:
        raise ValueError("t and m must be nonnegative")
    return sum((-1) ** i * math.comb(m, i) * (m - i) ** t for i in range(m + 1))
