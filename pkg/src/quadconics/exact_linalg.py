"""Small dense linear algebra over exact rationals (and generic scalars).

numpy covers the float paths elsewhere; these routines exist so rank,
nullspace and 3x3 inversion can be certified exactly over Fraction entries.
det3/adj3/solve3 are generic and work for both backends.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = Sequence
Matrix = Sequence[Row]


def det3(m: Matrix):
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def adj3(m: Matrix):
    """Adjugate (transposed cofactor matrix); m @ adj3(m) == det3(m) * I."""
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    return (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )


def mat_mul3(a: Matrix, b: Matrix):
    return tuple(
        tuple(sum(a[r][k] * b[k][c] for k in range(3)) for c in range(3)) for r in range(3)
    )


def mat_vec3(m: Matrix, v: Row):
    return tuple(sum(m[r][k] * v[k] for k in range(3)) for r in range(3))


def transpose3(m: Matrix):
    return tuple(tuple(m[r][c] for r in range(3)) for c in range(3))


def solve3(m: Matrix, rhs: Row):
    """Solve a 3x3 system by Cramer's rule; returns None when singular."""
    d = det3(m)
    if d == 0:
        return None
    cols = list(zip(*m))
    out = []
    for k in range(3):
        mk = [list(cols[j]) if j != k else list(rhs) for j in range(3)]
        out.append(det3(list(zip(*mk))) / d)
    return tuple(out)


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Fractions; returns (rref, pivot columns)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows: list[list[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace of the given row list."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        basis.append(vec)
    return basis
