"""Exact dense linear algebra over Q(i).

Rank, nullspace and linear solves by fraction-exact Gaussian elimination.
Matrices are lists of rows of ExactComplex; sizes here stay small (tens of
rows), so no sparsity or pivot-size heuristics are needed.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .exact import ExactComplex, ONE, ZERO

Matrix = List[List[ExactComplex]]
Vector = List[ExactComplex]


def _copy(rows: Sequence[Sequence[ExactComplex]]) -> Matrix:
    return [[ExactComplex.coerce(x) for x in row] for row in rows]


def row_echelon(rows: Sequence[Sequence[ExactComplex]]) -> tuple[Matrix, List[int]]:
    """Reduced row echelon form; returns (rref, pivot column indices)."""
    m = _copy(rows)
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if not m[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence[ExactComplex]]) -> int:
    if not rows or not rows[0]:
        return 0
    return len(row_echelon(rows)[1])


def nullspace(rows: Sequence[Sequence[ExactComplex]], n_cols: Optional[int] = None) -> List[Vector]:
    """Basis of {x : A x = 0}, one vector per free column (free entry = 1)."""
    if not rows:
        if n_cols is None:
            raise ValueError("n_cols required for an empty matrix")
        return [[ONE if j == i else ZERO for j in range(n_cols)] for i in range(n_cols)]
    n_cols = len(rows[0])
    rref, pivots = row_echelon(rows)
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = [ZERO] * n_cols
        v[free] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][free]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[ExactComplex]], rhs: Sequence[ExactComplex]) -> Optional[Vector]:
    """One exact solution of A x = b, or None if inconsistent."""
    if not rows:
        return [] if all(ExactComplex.coerce(b).is_zero() for b in rhs) else None
    n_cols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    rref, pivots = row_echelon(aug)
    for r in range(len(pivots)):
        if pivots[r] == n_cols:
            return None  # pivot in the rhs column: inconsistent
    x = [ZERO] * n_cols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][n_cols]
    return x


def matvec(rows: Sequence[Sequence[ExactComplex]], x: Sequence[ExactComplex]) -> Vector:
    return [sum((a * b for a, b in zip(row, x)), ZERO) for row in rows]


def transpose(rows: Sequence[Sequence[ExactComplex]]) -> Matrix:
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]
