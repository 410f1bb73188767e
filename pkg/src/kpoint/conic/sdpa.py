"""SDPA sparse format (``.dat-s``) export and import.

Layout written by :func:`export_sdpa`::

    * kpoint SDPA export
    m
    nBlocks
    s_1 s_2 ...          (negative size = diagonal block)
    c_1 ... c_m
    matno blkno i j value   (1-based, i <= j, sorted)

The program is written in SDPA's minimisation convention, so a maximisation
program has its objective negated. Integers are written as integers and every
other number as the shortest round-tripping float, so export -> import ->
export reproduces the text byte for byte.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .program import DIAG, PSD, Block, ConicError, ConicProgram

HEADER = "* kpoint SDPA export"


def _fmt(v) -> str:
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    f = float(v)
    if f.is_integer() and abs(f) < 1e15:
        return str(int(f))
    return repr(f)


def export_sdpa(p: ConicProgram) -> str:
    p = p.normalized()
    sizes = " ".join(str(-b.size if b.kind == DIAG else b.size) for b in p.blocks)
    lines = [HEADER, str(p.m), str(len(p.blocks)), sizes, " ".join(_fmt(v) for v in p.c)]
    for matno, ents in enumerate((p.F0,) + p.F):
        for blk, i, j, v in ents:
            lines.append(f"{matno} {blk + 1} {i + 1} {j + 1} {_fmt(v)}")
    return "\n".join(lines) + "\n"


def _num(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def import_sdpa(text: str) -> ConicProgram:
    lines = [ln for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith(('"', "*"))]
    if len(lines) < 3:
        raise ConicError("truncated SDPA file")

    def tokens(s):
        return re.sub(r"[,{}()]", " ", s).split()

    try:
        m = int(tokens(lines[0])[0])
        nblocks = int(tokens(lines[1])[0])
        sizes = [int(t) for t in tokens(lines[2])[:nblocks]]
    except (ValueError, IndexError):
        raise ConicError("malformed SDPA header") from None
    if len(sizes) != nblocks:
        raise ConicError("block structure line too short")
    blocks = tuple(Block(DIAG, -s) if s < 0 else Block(PSD, s) for s in sizes)
    rest = lines[3:]
    cvals: list = []
    while len(cvals) < m and rest:
        cvals += [_num(t) for t in tokens(rest.pop(0))]
    if len(cvals) != m:
        raise ConicError("objective vector has wrong length")
    mats: list[list] = [[] for _ in range(m + 1)]
    for ln in rest:
        tk = tokens(ln)
        if len(tk) != 5:
            raise ConicError(f"malformed entry line {ln!r}")
        matno, blk, i, j = (int(t) for t in tk[:4])
        if not 0 <= matno <= m:
            raise ConicError(f"matrix number {matno} out of range")
        mats[matno].append((blk - 1, i - 1, j - 1, _num(tk[4])))
    return ConicProgram(blocks, tuple(cvals), tuple(mats[0]), tuple(tuple(f) for f in mats[1:]),
                        "min")
