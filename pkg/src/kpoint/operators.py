"""Exact sparse matrices for the combinatorial operators B_k, T_r and Q_{s,t}.

Every operator is a :class:`SparseLinearMap` with :class:`fractions.Fraction`
entries between two :class:`~kpoint.families.IndexedFamily` spaces. The
adjoint of an operator is its exact transpose. Float copies are views.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import families as fam
from .graphs import Graph, VertexSet, members, popcount, surjection_count


@dataclass(frozen=True)
class SparseLinearMap:
    row_space: fam.IndexedFamily
    col_space: fam.IndexedFamily
    entries: tuple[tuple[int, int, Fraction], ...]

    @classmethod
    def from_dict(cls, rows, cols, data: dict) -> "SparseLinearMap":
        ents = tuple((i, j, Fraction(v)) for (i, j), v in sorted(data.items()) if v != 0)
        return cls(rows, cols, ents)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_space), len(self.col_space)

    def adjoint(self) -> "SparseLinearMap":
        data = {(j, i): v for i, j, v in self.entries}
        return SparseLinearMap.from_dict(self.col_space, self.row_space, data)

    def apply(self, vec) -> list[Fraction]:
        """Exact matrix-vector product."""
        if len(vec) != len(self.col_space):
            raise ValueError("vector length does not match column space")
        out = [Fraction(0)] * len(self.row_space)
        for i, j, v in self.entries:
            if vec[j]:
                out[i] += v * vec[j]
        return out

    def rapply(self, vec) -> list[Fraction]:
        """Exact product with the transpose (the adjoint action)."""
        if len(vec) != len(self.row_space):
            raise ValueError("vector length does not match row space")
        out = [Fraction(0)] * len(self.col_space)
        for i, j, v in self.entries:
            if vec[i]:
                out[j] += v * vec[i]
        return out

    def compose(self, other: "SparseLinearMap") -> "SparseLinearMap":
        """``self @ other``, exactly."""
        if self.col_space != other.row_space:
            raise ValueError("inner spaces differ")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for i, j, v in other.entries:
            by_row.setdefault(i, []).append((j, v))
        data: dict[tuple[int, int], Fraction] = {}
        for i, k, v in self.entries:
            for j, w in by_row.get(k, ()):
                data[i, j] = data.get((i, j), 0) + v * w
        return SparseLinearMap.from_dict(self.row_space, other.col_space, data)

    def to_dict(self) -> dict[tuple[int, int], Fraction]:
        return {(i, j): v for i, j, v in self.entries}

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for i, j, v in self.entries:
            out[i, j] = float(v)
        return out

    def dump(self, path) -> None:
        lines = [f"# {self.row_space.describe()} x {self.col_space.describe()}"]
        lines += [f"{i} {j} {v.numerator}/{v.denominator}" for i, j, v in self.entries]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def flatten(tup) -> VertexSet:
    m = 0
    for v in tup:
        m |= 1 << v
    return m


# -- B_k ----------------------------------------------------------------------

def op_Bk(G: Graph, k: int) -> SparseLinearMap:
    """(B_k F)(I) = sum over Q, and ordered S, T in I_1, with Q u S u T = I.

    Columns are unordered pairs ``S <= T`` so the entry counts ordered
    arrangements: 2 when ``S != T``, else 1.
    """
    if k < 2:
        raise ValueError("B_k needs k >= 2")
    rows = fam.independent_sets(G, k)
    cols = fam.set_pairs_with_base(G, k)
    data = {}
    for j, (S, T, Q) in enumerate(cols):
        i = rows.get(S | T | Q)
        if i is not None:
            data[i, j] = 1 if S == T else 2
    return SparseLinearMap.from_dict(rows, cols, data)


def fold_kernel(G: Graph, k: int, kernel) -> list[Fraction]:
    """Vector over the B_k column space for a 3-argument kernel F(S, T, Q).

    Non-symmetric kernels are symmetrised in (S, T); B_k sums over ordered
    pairs, so this leaves B_k F unchanged.
    """
    cols = fam.set_pairs_with_base(G, k)
    return [(Fraction(kernel(S, T, Q)) + Fraction(kernel(T, S, Q))) / 2 for S, T, Q in cols]


def bk_slices(G: Graph, k: int, nu) -> dict[VertexSet, list[list]]:
    """The Q-slices of B_k^* nu as (n+1)x(n+1) matrices over I_1.

    Entry (S, T) of slice Q is nu(S u T u Q) when that union is independent
    and 0 otherwise. Works for exact or float ``nu``.
    """
    sets = fam.independent_sets(G, k)
    if len(nu) != len(sets):
        raise ValueError("nu does not live on I_k")
    i1 = fam.independent_sets(G, 1).elements
    zero = nu[0] * 0
    out = {}
    for Q in fam.independent_sets(G, k - 2):
        M = [[zero] * len(i1) for _ in i1]
        for a, S in enumerate(i1):
            for b in range(a, len(i1)):
                idx = sets.get(S | i1[b] | Q)
                if idx is not None:
                    M[a][b] = M[b][a] = nu[idx]
        out[Q] = M
    return out


# -- T_r ------------------------------------------------------------------------

def op_Tr(n: int, r: int, form: str = "multiset", pairs: str = "symmetric") -> SparseLinearMap:
    """Symmetrisation T_r from kernels on V^2 to functions on V^(r+2).

    ``form="tuple"``: row for tuple x is (1/((r+2)(r+1))) sum_{i != j} Z(x_i, x_j).
    ``form="multiset"``: row for multiset m has the integer coefficients
    m_v(m_v-1) on Z(v, v) and m_v m_w on each ordered Z(v, w); this is
    (r+2)(r+1) times the tuple row of any tuple with that multiset.

    ``pairs="symmetric"`` folds (v, w) and (w, v) into the column (min, max)
    of Multisets(n, 2); ``pairs="ordered"`` keeps Tuples(n, 2).
    """
    if r < 0 or n < 1:
        raise ValueError("need r >= 0 and n >= 1")
    if pairs == "symmetric":
        cols = fam.multisets(n, 2)

        def col(v, w):
            return cols.index((v, w) if v <= w else (w, v))
    elif pairs == "ordered":
        cols = fam.tuples(n, 2)

        def col(v, w):
            return v * n + w
    else:
        raise ValueError(f"unknown pairs mode {pairs!r}")

    data: dict[tuple[int, int], Fraction] = {}
    if form == "tuple":
        rows = fam.tuples(n, r + 2)
        w = Fraction(1, (r + 2) * (r + 1))
        for i, x in enumerate(rows):
            for a in range(r + 2):
                for b in range(r + 2):
                    if a != b:
                        key = (i, col(x[a], x[b]))
                        data[key] = data.get(key, 0) + w
    elif form == "multiset":
        rows = fam.multisets(n, r + 2)
        for i, m in enumerate(rows):
            mult = fam.multiplicities(m, n)
            supp = [v for v in range(n) if mult[v]]
            for v in supp:
                for u in supp:
                    c = mult[v] * (mult[v] - 1) if u == v else mult[v] * mult[u]
                    if c:
                        key = (i, col(v, u))
                        data[key] = data.get(key, 0) + c
    else:
        raise ValueError(f"unknown form {form!r}")
    return SparseLinearMap.from_dict(rows, cols, data)


def multinomial(m: tuple[int, ...]) -> int:
    out = math.factorial(len(m))
    for c in Counter(m).values():
        out //= math.factorial(c)
    return out


def pairs_to_matrix(vec, n: int, measure: bool = True):
    """Symmetric n x n matrix from a vector over Multisets(n, 2).

    With ``measure=True`` the vector holds adjoint values, where an
    off-diagonal column carries the mass of both (v, w) and (w, v), so it is
    halved. Otherwise the vector holds kernel values Z(v, w) directly.
    """
    cols = fam.multisets(n, 2)
    zero = vec[0] * 0
    M = [[zero] * n for _ in range(n)]
    for (v, w), val in zip(cols, vec):
        if v != w and measure:
            val = val / 2
        M[v][w] = M[w][v] = val
    return M


def matrix_to_pairs(Z, n: int) -> list:
    return [Z[v][w] for v, w in fam.multisets(n, 2)]


# -- Q_{s,t} and N_t ------------------------------------------------------------

def _covering_count(slots: int, universe: int, must: int) -> int:
    """Maps from ``slots`` positions into a ``universe``-set hitting ``must`` given elements."""
    return sum((-1) ** j * math.comb(must, j) * (universe - j) ** slots for j in range(must + 1))


def op_Qst(G: Graph, s: int, t: int, k: int) -> SparseLinearMap:
    """(Q_{s,t} F)(I) = sum over v in V^s with set(v) = I of F(v_1..v_t)."""
    if s < 1 or not 0 <= t <= s or k < 0:
        raise ValueError(f"invalid parameters s={s}, t={t}, k={k}")
    if G.n ** s > fam.MAX_TUPLES:
        raise fam.FamilyTooLarge(f"refusing V^{s} with n={G.n}")
    rows = fam.independent_sets(G, k)
    cols = fam.tuples(G.n, t)
    data = {}
    for i, I in enumerate(rows):
        verts = members(I)
        if not verts or len(verts) > s:
            continue
        for w in itertools.product(verts, repeat=t):
            rest = popcount(I & ~flatten(w))
            c = _covering_count(s - t, len(verts), rest)
            if c:
                data[i, _tuple_index(w, G.n)] = c
    return SparseLinearMap.from_dict(rows, cols, data)


def _tuple_index(w, n):
    idx = 0
    for v in w:
        idx = idx * n + v
    return idx


def nt_vector(G: Graph, k: int, t: int) -> list[int]:
    return [surjection_count(t, popcount(I)) for I in fam.independent_sets(G, k)]
