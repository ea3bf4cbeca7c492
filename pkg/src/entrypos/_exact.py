"""Small exact-arithmetic kernels over ``fractions.Fraction``."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def det_fraction(rows) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = a[r][col] / p
            if factor:
                row_r, row_c = a[r], a[col]
                for c in range(col, n):
                    row_r[c] -= factor * row_c[c]
    return det


def exact_not_psd(rows) -> bool:
    """True iff some principal minor is negative (exact certificate of non-PSD)."""
    n = len(rows)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            minor = [[rows[i][j] for j in idx] for i in idx]
            if det_fraction(minor) < 0:
                return True
    return False


def pow_fraction(x: Fraction, e: int) -> Fraction:
    if e == 0:
        return Fraction(1)
    return Fraction(x) ** e
