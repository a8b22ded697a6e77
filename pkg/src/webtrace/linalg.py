"""Exact rational linear algebra on lists of lists."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

__all__ = ["as_rational", "exact_rank", "inverse", "matmul", "identity", "SingularMatrixError"]


class SingularMatrixError(ValueError):
    pass


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: every value in this package is exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip().replace("−", "-"))
    if isinstance(x, float):
        raise TypeError(f"float {x!r} is not an exact rational")
    # numpy integer scalars and similar
    return Fraction(int(x)) if int(x) == x else Fraction(x)


def exact_rank(m: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination.

    Rows are first scaled to integers, then every elimination step divides
    exactly by the previous pivot, keeping entries bounded by minors.
    """
    rows = []
    for row in m:
        row = [as_rational(x) for x in row]
        d = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * d) for x in row])
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            a = rows[r][col]
            row_r, row_p = rows[r], rows[rank]
            for c in range(col + 1, ncols):
                row_r[c] = (p * row_r[c] - a * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
        if rank == len(rows):
            break
    return rank


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    inner = len(b)
    cols = len(b[0]) if inner else 0
    return [[sum((as_rational(a[i][t]) * as_rational(b[t][j]) for t in range(inner)), Fraction(0))
             for j in range(cols)] for i in range(len(a))]


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over Q; raises SingularMatrixError."""
    n = len(m)
    a = [[as_rational(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    if any(len(row) != 2 * n for row in a):
        raise ValueError("matrix is not square")
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]
