"""Exact Gaussian elimination over Q(i) and its quadratic extensions."""

from __future__ import annotations

from typing import Sequence

from .gaussian import ZERO, exact


def _inv(x):
    return x.inverse() if hasattr(x, "inverse") else 1 / x


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[exact(c) for c in row] for row in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = _inv(m[r][col])
        m[r] = [c * inv if c else c for c in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                row_r = m[r]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], row_r)]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of {v : rows . v = 0}, one vector per free column."""
    if not rows:
        basis = []
        for k in range(ncols):
            v = [ZERO] * ncols
            v[k] = exact(1)
            basis.append(v)
        return basis
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = exact(1)
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    n, k = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(cols):
            acc = ZERO
            for t in range(k):
                if a[i][t] and b[t][j]:
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def identity(n: int) -> list[list]:
    return [[exact(1 if i == j else 0) for j in range(n)] for i in range(n)]
