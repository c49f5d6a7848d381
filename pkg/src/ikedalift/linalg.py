"""Gaussian elimination over exact fields (Q or a number field)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _lift(c):
    return Fraction(c) if isinstance(c, int) else c


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [[_lift(c) for c in row] for row in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [c * inv for c in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of {v : rows * v = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for row, pcol in zip(red, pivots):
            v[pcol] = -row[fcol]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list:
    """One solution of rows * v = rhs; raises ValueError if inconsistent."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        raise ValueError("inconsistent linear system")
    v = [Fraction(0)] * ncols
    for row, pcol in zip(red, pivots):
        v[pcol] = row[ncols]
    return v


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])
