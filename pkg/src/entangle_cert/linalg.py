"""Dense exact matrices over Q(i).

Matrices are plain ``list[list[GaussianRational]]``; helpers here never
mutate their inputs.
"""

from __future__ import annotations

from math import lcm

from .exact import ONE, ZERO, GaussianRational, gr

Matrix = list[list[GaussianRational]]


def as_matrix(rows) -> Matrix:
    return [[gr(x) for x in row] for row in rows]


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return [[ZERO] * m for _ in range(n)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def adjoint(m: Matrix) -> Matrix:
    rows, cols = shape(m)
    return [[m[i][j].conj() for i in range(rows)] for j in range(cols)]


def transpose(m: Matrix) -> Matrix:
    rows, cols = shape(m)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k = shape(a)
    k2, m = shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        row = out[i]
        for t in range(k):
            if ai[t].is_zero():
                continue
            bt = b[t]
            for j in range(m):
                if not bt[j].is_zero():
                    row[j] = row[j] + ai[t] * bt[j]
    return out


def mat_add(a: Matrix, b: Matrix, alpha=1, beta=1) -> Matrix:
    alpha, beta = gr(alpha), gr(beta)
    return [[alpha * x + beta * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(m: Matrix, s) -> Matrix:
    s = gr(s)
    return [[s * x for x in row] for row in m]


def is_zero_matrix(m: Matrix) -> bool:
    return all(x.is_zero() for row in m for x in row)


def is_hermitian(m: Matrix) -> bool:
    return m == adjoint(m)


def trace(m: Matrix) -> GaussianRational:
    total = ZERO
    for i in range(len(m)):
        total = total + m[i][i]
    return total


def vec(m: Matrix) -> list[GaussianRational]:
    """Column-stacking vectorization."""
    rows, cols = shape(m)
    return [m[i][j] for j in range(cols) for i in range(rows)]


def columns_to_matrix(columns: list[list[GaussianRational]]) -> Matrix:
    """Assemble vectors as the columns of a matrix."""
    if not columns:
        return []
    return [[col[i] for col in columns] for i in range(len(columns[0]))]


def _integral_rows(m: Matrix) -> Matrix:
    # rank is unchanged by scaling rows; clear denominators so Bareiss stays in Z[i]
    out = []
    for row in m:
        d = 1
        for x in row:
            d = lcm(d, x.denom)
        out.append([x * d for x in row] if d != 1 else list(row))
    return out


def exact_rank(m: Matrix) -> int:
    """Rank over Q(i) by Bareiss fraction-free elimination.

    Pivots are chosen as the first nonzero entry; with exact arithmetic the
    pivot size does not matter. Every intermediate entry is a Gaussian
    integer and each division is exact.
    """
    if not m or not m[0]:
        return 0
    a = _integral_rows(m)
    rows, cols = shape(a)
    rank = 0
    prev = ONE
    for c in range(cols):
        if rank == rows:
            break
        pivot = next((r for r in range(rank, rows) if not a[r][c].is_zero()), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            arc = a[r][c]
            row_r = a[r]
            row_k = a[rank]
            for j in range(c + 1, cols):
                row_r[j] = (p * row_r[j] - arc * row_k[j]) / prev
            row_r[c] = ZERO
        prev = p
        rank += 1
    return rank


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q(i) and the pivot columns."""
    a = [list(row) for row in m]
    rows, cols = shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if not a[i][c].is_zero()), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace(m: Matrix, ncols: int | None = None) -> list[list[GaussianRational]]:
    """Basis of ``{v : m v = 0}`` with one free coordinate set to 1 per vector."""
    cols = shape(m)[1] if m else (ncols or 0)
    if not m:
        return [[ONE if i == j else ZERO for i in range(cols)] for j in range(cols)]
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for row_idx, pc in enumerate(pivots):
            v[pc] = -red[row_idx][f]
        basis.append(v)
    return basis


def independent_rows(vectors: list[list[GaussianRational]]) -> list[int]:
    """Indices of a maximal linearly independent prefix-greedy subset."""
    chosen: list[int] = []
    basis: list[list[GaussianRational]] = []
    for idx, v in enumerate(vectors):
        if exact_rank(basis + [v]) > len(basis):
            basis.append(v)
            chosen.append(idx)
    return chosen


def to_complex(m: Matrix):
    import numpy as np

    return np.array([[complex(x) for x in row] for row in m], dtype=complex)
