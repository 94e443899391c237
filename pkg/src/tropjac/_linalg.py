"""Small exact linear algebra over :class:`fractions.Fraction`.

Matrices are tuples of row tuples. Only what the period-matrix and theta code
needs: products, solves and an LDL^T factorisation.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import NotPositiveDefiniteError

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def as_vector(values: Sequence) -> Vector:
    return tuple(Fraction(v) for v in values)


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(as_vector(r) for r in rows)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def matvec(m: Matrix, v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def quad(m: Matrix, v: Sequence) -> Fraction:
    """v^T M v."""
    return dot(v, matvec(m, v))


def vadd(a: Sequence, b: Sequence) -> Vector:
    return tuple(Fraction(x) + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vector:
    return tuple(Fraction(x) - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> Vector:
    return tuple(Fraction(c) * x for x in a)


def solve(m: Matrix, b: Sequence) -> Vector:
    """Solve M x = b by Gauss-Jordan elimination. M must be nonsingular."""
    n = len(m)
    aug = [list(row) + [Fraction(b[i])] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(aug[i][n] for i in range(n))


def ldl(m: Matrix) -> tuple[Matrix, Vector]:
    """Return (L, d) with M = L diag(d) L^T, L unit lower triangular.

    Raises NotPositiveDefiniteError when some pivot is not strictly positive,
    which for a symmetric matrix is exactly failure of positive definiteness.
    """
    n = len(m)
    for i in range(n):
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise NotPositiveDefiniteError("matrix is not symmetric")
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        d[j] = m[j][j] - sum((L[j][k] ** 2 * d[k] for k in range(j)), Fraction(0))
        if d[j] <= 0:
            raise NotPositiveDefiniteError(f"pivot {j} is {d[j]}")
        for i in range(j + 1, n):
            s = m[i][j] - sum((L[i][k] * L[j][k] * d[k] for k in range(j)), Fraction(0))
            L[i][j] = s / d[j]
    return tuple(tuple(r) for r in L), tuple(d)


def leading_minors(m: Matrix) -> list[Fraction]:
    out = []
    for k in range(1, len(m) + 1):
        out.append(det(tuple(row[:k] for row in m[:k])))
    return out


def det(m: Matrix) -> Fraction:
    n = len(m)
    a = [list(r) for r in m]
    sign = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return out


def fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
