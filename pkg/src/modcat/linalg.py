"""Exact Gaussian elimination over cyclotomic fields (small matrices)."""

from __future__ import annotations

from typing import Sequence

from .cyclotomic import Cyc
from .cycmatrix import CycMatrix


def _rows(mat: CycMatrix | Sequence[Sequence]) -> list[list[Cyc]]:
    if isinstance(mat, CycMatrix):
        return mat.to_lists()
    return [[Cyc.coerce(x) for x in row] for row in mat]


def row_echelon(mat) -> tuple[list[list[Cyc]], list[int], Cyc]:
    """Reduced row echelon form, pivot columns and the determinant factor."""
    a = _rows(mat)
    nr = len(a)
    nc = len(a[0]) if nr else 0
    pivots: list[int] = []
    det = Cyc.rational(1)
    r = 0
    for c in range(nc):
        p = next((i for i in range(r, nr) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            det = -det
        piv = a[r][c]
        det = det * piv
        inv = piv.inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(nr):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return a, pivots, det


def rank(mat) -> int:
    return len(row_echelon(mat)[1])


def determinant(mat) -> Cyc:
    a = _rows(mat)
    n = len(a)
    if n == 0:
        return Cyc.rational(1)
    _, pivots, det = row_echelon(a)
    return det if len(pivots) == n else Cyc.zero()


def kernel(mat) -> list[list[Cyc]]:
    """Basis of the right kernel {v : mat v = 0}."""
    a, pivots, _ = row_echelon(mat)
    nc = len(a[0]) if a else 0
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        v = [Cyc.zero() for _ in range(nc)]
        v[f] = Cyc.rational(1)
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append(v)
    return basis
