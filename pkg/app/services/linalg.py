"""Exact linear algebra over ℚ and over K.

The elimination routines only use `+ - * /` and comparison with 0, so they work
unchanged on `Fraction` matrices and on matrices of `FieldElement`s.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, TypeVar

T = TypeVar("T")
Matrix = List[List[T]]


def _copy(rows: Sequence[Sequence[T]]) -> Matrix:
    return [list(row) for row in rows]


def _echelon(rows: Sequence[Sequence[T]]):
    """Forward elimination. Returns (reduced rows, pivot columns, swap parity)."""
    a = _copy(rows)
    pivots = []
    sign = 1
    r = 0
    width = len(a[0]) if a else 0
    for c in range(width):
        pivot = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            a[r], a[pivot] = a[pivot], a[r]
            sign = -sign
        for i in range(r + 1, len(a)):
            if a[i][c] != 0:
                factor = a[i][c] / a[r][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots, sign


def rank(rows: Sequence[Sequence[T]]) -> int:
    if not rows:
        return 0
    return len(_echelon(rows)[1])


def det(rows: Sequence[Sequence[T]]) -> T:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a, pivots, sign = _echelon(rows)
    if len(pivots) < n:
        return rows[0][0] * 0
    result = a[0][0] * sign
    for i in range(1, n):
        result = result * a[i][i]
    return result


def solve(rows: Sequence[Sequence[T]], rhs: Sequence[T]) -> Optional[List[T]]:
    """Solve a square system; None when singular."""
    n = len(rows)
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    a, pivots, _ = _echelon(augmented)
    if pivots[:n] != list(range(n)):
        return None
    x: List[T] = [None] * n  # type: ignore[list-item]
    for i in reversed(range(n)):
        acc = a[i][n]
        for j in range(i + 1, n):
            acc = acc - a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x


def inverse(rows: Sequence[Sequence[T]]) -> Optional[Matrix]:
    n = len(rows)
    zero = rows[0][0] * 0
    one = zero + 1
    columns = []
    for k in range(n):
        unit = [one if i == k else zero for i in range(n)]
        column = solve(rows, unit)
        if column is None:
            return None
        columns.append(column)
    return [[columns[j][i] for j in range(n)] for i in range(n)]


def transpose(rows: Sequence[Sequence[T]]) -> Matrix:
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence[T]], b: Sequence[Sequence[T]]) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def cofactor_normal(vectors: Sequence[Sequence[T]]) -> List[T]:
    """Vector orthogonal to n-1 vectors of length n (generalised cross product).

    Component i is (-1)^(i + n - 1) times the minor obtained by deleting column i,
    so that det([v_1, ..., v_{n-1}, normal]) = |normal|² ≥ 0.
    """
    n = len(vectors) + 1
    if n == 1:
        return [Fraction(1)]
    normal = []
    for i in range(n):
        minor = [[v[j] for j in range(n) if j != i] for v in vectors]
        value = det(minor)
        normal.append(value if (i + n - 1) % 2 == 0 else -value)
    return normal


def dot(u: Sequence[T], v: Sequence[T]) -> T:
    acc = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        acc = acc + x * y
    return acc


# Integer lattices

def clear_denominators(rows: Sequence[Sequence[Fraction]]):
    """Scale a rational matrix to an integer one. Returns (integer rows, scale)."""
    scale = 1
    for row in rows:
        for x in row:
            scale = lcm(scale, Fraction(x).denominator)
    return [[int(Fraction(x) * scale) for x in row] for row in rows], scale


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row-style Hermite normal form of the lattice spanned by the integer rows.

    Rows of the result are upper triangular with positive pivots; entries above a
    pivot lie in [0, pivot). Zero rows are dropped, so the result is a basis.
    """
    a = [list(map(int, row)) for row in rows]
    width = len(a[0]) if a else 0
    r = 0
    for c in range(width):
        while True:
            nonzero = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nonzero:
                break
            smallest = min(nonzero, key=lambda i: abs(a[i][c]))
            a[r], a[smallest] = a[smallest], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
    return a[:r]
