"""Exact linear algebra over Fraction matrices.

Matrices are plain lists of lists of Fractions.  Provides reduced row
echelon form, nullspaces, linear solves, determinants by fraction-free
(Bareiss) elimination, and characteristic polynomials by the division-free
Berkowitz algorithm run over integers after clearing denominators.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


Matrix = list[list[Fraction]]
Vector = list[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

def mat_scalar(a: Matrix, c: Fraction) -> Matrix:
    return [[x * c for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def shift_diagonal(a: Matrix, c: Fraction) -> Matrix:
    """a - c*I."""
    n = len(a)
    return [[a[i][j] - (c if i == j else ZERO) for j in range(n)] for i in range(n)]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices (exact)."""
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def nullspace(a: Matrix) -> list[Vector]:
    """Basis of the right kernel {v : a v = 0}, exact."""
    if not a:
        return []
    cols = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis: list[Vector] = []
    for fc in free:
        v = [ZERO] * cols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One exact solution of a x = b, or None when inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [a[i][:] + [b[i]] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [ZERO] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def det_bareiss(a: Matrix) -> Fraction:
    """Determinant by fraction-free elimination after clearing denominators."""
    n = len(a)
    if n == 0:
        return ONE
    scale = 1
    for row in a:
        for x in row:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    m = [[int(x * scale) for x in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1], scale ** n)


def _berkowitz_int(m: list[list[int]]) -> list[int]:
    """Characteristic polynomial det(lambda I - M) of an integer matrix.

    Returns coefficients in descending powers, leading coefficient 1.
    Division free, so all intermediates stay integral.
    """
    n = len(m)
    if n == 0:
        return [1]
    coeffs = [1, -m[0][0]]
    for i in range(1, n):
        row = [m[i][j] for j in range(i)]
        col = [m[j][i] for j in range(i)]
        sub = [[m[r][c] for c in range(i)] for r in range(i)]
        t = [1, -m[i][i]]
        v = col[:]
        for k in range(i):
            t.append(-sum(row[r] * v[r] for r in range(i)))
            if k < i - 1:
                v = [sum(sub[r][c] * v[c] for c in range(i)) for r in range(i)]
        new = [0] * (len(coeffs) + 1)
        for p, cp in enumerate(coeffs):
            if cp:
                for q, tq in enumerate(t):
                    if tq and p + q < len(new):
                        new[p + q] += cp * tq
        coeffs = new
    return coeffs


def charpoly(a: Matrix) -> list[Fraction]:
    """Exact characteristic polynomial det(lambda I - a).

    Returns monic coefficients in descending powers of lambda.
    """
    n = len(a)
    scale = 1
    for row in a:
        for x in row:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    m = [[int(x * scale) for x in row] for row in a]
    raw = _berkowitz_int(m)
    # det(lambda I - a) = scale^-n * det((scale lambda) I - scale a)
    return [Fraction(raw[j], scale ** j) for j in range(n + 1)]


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    """Horner evaluation; coeffs in descending powers."""
    acc = ZERO
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_from_roots(roots: Sequence[Fraction]) -> list[Fraction]:
    """Monic polynomial with the given roots, descending coefficients."""
    coeffs = [ONE]
    for r in roots:
        new = coeffs + [ZERO]
        for i in range(len(coeffs)):
            new[i + 1] -= coeffs[i] * r
        coeffs = new
    return coeffs


def mat_fraction(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]
