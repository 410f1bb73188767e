"""Block-structured conic programs in SDPA form.

A :class:`ConicProgram` holds data ``c``, ``F_0``, ``F_1..F_m`` over a list of
blocks (diagonal blocks are LP cones, PSD blocks are semidefinite cones) and
encodes the pair

    primal:  opt  c^T x            s.t.  S = sum_i x_i F_i - F_0  >= 0
    dual:    opt' <F_0, Y> (+/-)   s.t.  <F_i, Y> = c_i (+/-),  Y >= 0

``sense`` is the sense of the primal. A maximisation primal is normalised to
SDPA's minimisation convention by negating ``c``. Matrices are stored as
upper-triangle entries ``(block, p, q, value)`` with ``p <= q``; values may be
``int``, :class:`~fractions.Fraction` or ``float``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

DIAG = "diag"
PSD = "psd"

MAX_PSD_BLOCK = 200
MAX_CONSTRAINTS = 5000


class ConicError(ValueError):
    pass


@dataclass(frozen=True)
class Block:
    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in (DIAG, PSD) or self.size < 1:
            raise ConicError(f"bad block {self.kind}({self.size})")


Entry = tuple  # (block, p, q, value), 0-based, p <= q


def _normalise(entries, blocks) -> tuple:
    acc: dict[tuple[int, int, int], object] = {}
    for blk, p, q, v in entries:
        if not 0 <= blk < len(blocks):
            raise ConicError(f"block index {blk} out of range")
        size = blocks[blk].size
        if not (0 <= p < size and 0 <= q < size):
            raise ConicError(f"entry ({p}, {q}) outside block {blk} of size {size}")
        if p > q:
            p, q = q, p
        if blocks[blk].kind == DIAG and p != q:
            raise ConicError(f"off-diagonal entry in diagonal block {blk}")
        if isinstance(v, float) and not math.isfinite(v):
            raise ConicError("non-finite coefficient")
        key = (blk, p, q)
        acc[key] = acc.get(key, 0) + v
    return tuple((b, p, q, v) for (b, p, q), v in sorted(acc.items()) if v != 0)


@dataclass(frozen=True)
class ConicProgram:
    blocks: tuple[Block, ...]
    c: tuple
    F0: tuple[Entry, ...]
    F: tuple[tuple[Entry, ...], ...]
    sense: str = "min"
    var_names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ConicError(f"unknown sense {self.sense!r}")
        if len(self.c) != len(self.F):
            raise ConicError("objective length differs from number of constraint matrices")
        for v in self.c:
            if isinstance(v, float) and not math.isfinite(v):
                raise ConicError("non-finite objective coefficient")
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "c", tuple(self.c))
        object.__setattr__(self, "F0", _normalise(self.F0, self.blocks))
        object.__setattr__(self, "F", tuple(_normalise(f, self.blocks) for f in self.F))

    @property
    def m(self) -> int:
        return len(self.c)

    @property
    def is_lp(self) -> bool:
        return all(b.kind == DIAG for b in self.blocks)

    def normalized(self) -> "ConicProgram":
        """Same program in SDPA minimisation convention."""
        if self.sense == "min":
            return self
        return ConicProgram(self.blocks, tuple(-v for v in self.c), self.F0, self.F, "min",
                            self.var_names)

    def check_caps(self):
        for b in self.blocks:
            if b.kind == PSD and b.size > MAX_PSD_BLOCK:
                raise ConicError(f"PSD block of size {b.size} exceeds cap {MAX_PSD_BLOCK}")
        if self.m > MAX_CONSTRAINTS:
            raise ConicError(f"{self.m} constraints exceed cap {MAX_CONSTRAINTS}")

    # -- float views ------------------------------------------------------------

    def dense_blocks(self, entries) -> list[np.ndarray]:
        """Symmetric float blocks (diag blocks as vectors) for an entry list."""
        out = [np.zeros(b.size) if b.kind == DIAG else np.zeros((b.size, b.size))
               for b in self.blocks]
        for blk, p, q, v in entries:
            if self.blocks[blk].kind == DIAG:
                out[blk][p] += float(v)
            else:
                out[blk][p, q] += float(v)
                if p != q:
                    out[blk][q, p] += float(v)
        return out

    def slack(self, x) -> list[np.ndarray]:
        """S(x) = sum_i x_i F_i - F_0 in floats."""
        S = [-B for B in self.dense_blocks(self.F0)]
        for xi, f in zip(x, self.F):
            xi = float(xi)
            if xi == 0.0:
                continue
            for blk, p, q, v in f:
                if self.blocks[blk].kind == DIAG:
                    S[blk][p] += xi * float(v)
                else:
                    S[blk][p, q] += xi * float(v)
                    if p != q:
                        S[blk][q, p] += xi * float(v)
        return S

    def apply_adjoint(self, Y) -> np.ndarray:
        """Vector (<F_i, Y>)_i for float dual blocks Y."""
        return np.array([_inner(f, Y, self.blocks) for f in self.F])

    def constant_inner(self, Y) -> float:
        return _inner(self.F0, Y, self.blocks)

    def primal_value(self, x) -> float:
        return float(sum(float(ci) * float(xi) for ci, xi in zip(self.c, x)))


def _inner(entries, Y, blocks) -> float:
    total = 0.0
    for blk, p, q, v in entries:
        if blocks[blk].kind == DIAG:
            total += float(v) * Y[blk][p]
        elif p == q:
            total += float(v) * Y[blk][p, q]
        else:
            total += 2.0 * float(v) * Y[blk][p, q]
    return total


class ProgramBuilder:
    """Incremental construction: variables carry a cost, blocks receive
    ``slack += coeff * x_var`` or constant ``slack += value`` terms."""

    def __init__(self, sense: str = "min"):
        self.sense = sense
        self.blocks: list[Block] = []
        self.c: list = []
        self.names: list[str] = []
        self.F: list[list] = []
        self.F0: list = []

    def add_block(self, kind: str, size: int) -> int:
        self.blocks.append(Block(kind, size))
        return len(self.blocks) - 1

    def add_var(self, cost=0, name: str = "") -> int:
        self.c.append(cost)
        self.names.append(name or f"x{len(self.c)}")
        self.F.append([])
        return len(self.c) - 1

    def coeff(self, var: int, blk: int, p: int, q: int, value=1):
        self.F[var].append((blk, p, q, value))

    def const(self, blk: int, p: int, q: int, value):
        self.F0.append((blk, p, q, -value))

    def build(self) -> ConicProgram:
        return ConicProgram(tuple(self.blocks), tuple(self.c), tuple(self.F0),
                            tuple(tuple(f) for f in self.F), self.sense, tuple(self.names))


def as_fraction(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)
