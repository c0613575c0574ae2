"""Fraction-free (Bareiss) elimination over the integers.

Rational input rows are cleared of denominators first; every intermediate
entry is then an integer minor of the scaled matrix, so the divisions in the
Bareiss update are exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

Matrix = Sequence[Sequence]


def _integer_rows(M: Matrix) -> list[list[int]]:
    rows = []
    for row in M:
        row = [Fraction(x) for x in row]
        den = reduce(lcm, (x.denominator for x in row), 1)
        rows.append([x.numerator * (den // x.denominator) for x in row])
    return rows


def bareiss_echelon(M: Matrix) -> tuple[list[list[int]], list[int]]:
    """Row echelon form by fraction-free elimination.

    Returns the integer echelon rows (zero rows dropped) and the pivot columns.
    """
    A = _integer_rows(M)
    if not A:
        return [], []
    nrows, ncols = len(A), len(A[0])
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, nrows):
            aic = A[i][c]
            row_i = A[i]
            row_r = A[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - aic * row_r[j]) // prev
            row_i[c] = 0
        # rows above r keep their old scaling; only the trailing block is updated
        prev = piv
        pivots.append(c)
        r += 1
    return A[:r], pivots


def determinant(M: Matrix) -> Fraction:
    """Exact determinant of a square rational matrix."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    scale = Fraction(1)
    rows = []
    for row in M:
        row = [Fraction(x) for x in row]
        den = reduce(lcm, (x.denominator for x in row), 1)
        scale /= den
        rows.append([x.numerator * (den // x.denominator) for x in row])
    A = rows
    prev = 1
    sign = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            A[k], A[p] = A[p], A[k]
            sign = -sign
        piv = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (piv * A[i][j] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = piv
    return sign * A[n - 1][n - 1] * scale


def _primitive_int(v: list[Fraction]) -> tuple[int, ...]:
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [x.numerator * (den // x.denominator) for x in v]
    g = reduce(gcd, ints, 0)
    return tuple(x // g for x in ints) if g else tuple(ints)


def nullspace(M: Matrix, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of the right null space of M.

    One vector per free column: the free variable is set to 1, the others
    to 0, and the pivots solved by back substitution. Each vector is scaled
    to integer entries with content 1. ``ncols`` is needed only when M has
    no rows.
    """
    if not M:
        if ncols is None:
            raise ValueError("ncols is required for a matrix without rows")
        return [tuple(int(i == j) for i in range(ncols)) for j in range(ncols)]
    n = len(M[0])
    E, pivots = bareiss_echelon(M)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = E[r]
            s = sum((row[j] * x[j] for j in range(c + 1, n) if row[j]), Fraction(0))
            x[c] = -s / row[c]
        basis.append(_primitive_int(x))
    return basis


def mat_vec(M: Matrix, v: Sequence) -> list[Fraction]:
    return [sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in M]
