"""Exact linear algebra over Q (``Fraction``) and GF(2).

Matrices are plain lists of rows. Nothing here is fast; the matrices we
meet are (n+1) x (n+2) with n rarely above 4.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence

from .errors import DegenerateSimplexError

Matrix = List[List[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def _echelon(m: Matrix):
    """Reduced row echelon form in place; returns pivot columns."""
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return pivots


def rank(rows: Sequence[Sequence]) -> int:
    m = to_fraction_matrix(rows)
    if not m or not m[0]:
        return 0
    return len(_echelon(m))


def det(rows: Sequence[Sequence]) -> Fraction:
    m = to_fraction_matrix(rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        p = m[c][c]
        result *= p
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def inverse(rows: Sequence[Sequence]) -> Matrix:
    m = to_fraction_matrix(rows)
    n = len(m)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    pivots = _echelon(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise DegenerateSimplexError("matrix is singular")
    return [row[n:] for row in aug]


def solve(rows: Sequence[Sequence], rhs: Sequence) -> List[Fraction]:
    """Solve a square nonsingular system exactly."""
    m = to_fraction_matrix(rows)
    n = len(m)
    aug = [row + [Fraction(b)] for row, b in zip(m, rhs)]
    pivots = _echelon(aug)
    if pivots != list(range(n)):
        raise DegenerateSimplexError("matrix is singular")
    return [aug[i][n] for i in range(n)]


def matvec(m: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def transpose(m: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*m)]


def kernel(rows: Sequence[Sequence]) -> Matrix:
    """Basis of the right null space, one vector per free column."""
    m = to_fraction_matrix(rows)
    n_cols = len(m[0])
    pivots = _echelon(m)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -m[r][f]
        basis.append(v)
    return basis


def primitive_integer(v: Sequence[Fraction]) -> List[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def gf2_solve(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[List[int]]:
    """Solve ``rows @ t = rhs`` over GF(2).

    Rows are reduced by Gauss-Jordan elimination in column order; free
    variables are set to zero, so the returned solution is the first one in
    elimination order. Returns ``None`` when the system is inconsistent.
    """
    n_vars = len(rows[0]) if rows else 0
    # bit n_vars holds the right hand side
    work = []
    for row, b in zip(rows, rhs):
        bits = 0
        for j, x in enumerate(row):
            if x % 2:
                bits |= 1 << j
        if b % 2:
            bits |= 1 << n_vars
        work.append(bits)
    pivots = []
    r = 0
    for col in range(n_vars):
        piv = next((i for i in range(r, len(work)) if (work[i] >> col) & 1), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and (work[i] >> col) & 1:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
    for i in range(r, len(work)):
        if work[i] == 1 << n_vars:
            return None
    t = [0] * n_vars
    for i, col in enumerate(pivots):
        t[col] = (work[i] >> n_vars) & 1
    return t


def barycentric_coords(vertices: Sequence[Sequence[int]], point: Sequence) -> List[Fraction]:
    """Exact affine coordinates of ``point`` w.r.t. ``len(vertices)`` points.

    The vertices must be affinely independent and span the ambient space.
    """
    n = len(point)
    if len(vertices) != n + 1:
        raise DegenerateSimplexError(f"need {n + 1} vertices in dimension {n}, got {len(vertices)}")
    rows = [[1] * (n + 1)] + [[v[i] for v in vertices] for i in range(n)]
    return solve(rows, [1, *point])
