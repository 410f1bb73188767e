"""Small exact-arithmetic helpers."""
from __future__ import annotations

from fractions import Fraction

RATIONAL_DENOMINATOR = 10**6


def is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def rationalize(v, denominator: int = RATIONAL_DENOMINATOR) -> Fraction:
    """Exact input passes through; floats are rounded to ``k / denominator``."""
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return Fraction(round(float(v) * denominator), denominator)


def is_psd_exact(M) -> bool:
    """Exact PSD test for a symmetric rational matrix by symmetric elimination."""
    A = [[Fraction(v) for v in row] for row in M]
    n = len(A)
    for k in range(n):
        piv = A[k][k]
        if piv < 0:
            return False
        if piv == 0:
            if any(A[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = A[i][k] / piv
            if f:
                row_i, row_k = A[i], A[k]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return True
