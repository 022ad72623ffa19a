"""Integer row-lattice helpers: echelon form, kernels, Smith form, indices.

Vectors are tuples of Python ints and lattices are lists of row vectors.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def _axpy(a: int, x, y):
    return [a * xi + yi for xi, yi in zip(x, y)]


def echelon_with_transform(rows, ncols: int | None = None):
    """Row echelon form H = U A over Z with U unimodular.

    Returns (H, U, rank); the first ``rank`` rows of H are nonzero and the
    remaining rows of U span the left kernel of A.
    """
    A = [list(r) for r in rows]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r >= m:
            break
        # Euclid on column c below row r
        while True:
            piv = None
            for i in range(r, m):
                if A[i][c] != 0 and (piv is None or abs(A[i][c]) < abs(A[piv][c])):
                    piv = i
            if piv is None:
                break
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = _axpy(-q, A[r], A[i])
                    U[i] = _axpy(-q, U[r], U[i])
                    if A[i][c]:
                        done = False
            if done:
                break
        if piv is None and all(A[i][c] == 0 for i in range(r, m)):
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            if A[i][c]:
                q = A[i][c] // A[r][c]
                A[i] = _axpy(-q, A[r], A[i])
                U[i] = _axpy(-q, U[r], U[i])
        r += 1
    return A, U, r


def basis(rows, n: int) -> list[tuple[int, ...]]:
    """A Z-basis (echelon) of the span of ``rows`` in Z^n."""
    if not rows:
        return []
    H, _, r = echelon_with_transform(rows, n)
    return [tuple(h) for h in H[:r]]


def left_kernel(rows, n: int) -> list[tuple[int, ...]]:
    """Basis of {u : u A = 0}."""
    if not rows:
        return []
    _, U, r = echelon_with_transform(rows, n)
    return [tuple(u) for u in U[r:]]


def mat_vec(v, M):
    """Row vector times matrix."""
    n = len(M[0]) if M else 0
    out = [0] * n
    for vi, row in zip(v, M):
        if vi:
            for j, x in enumerate(row):
                out[j] += vi * x
    return tuple(out)


def image(A, M, n: int):
    """Basis of {v A : v in span(M)}."""
    return basis([mat_vec(v, A) for v in M], n)


def add(M1, M2, n: int):
    return basis(list(M1) + list(M2), n)


def scale(M, k: int, n: int):
    return basis([tuple(k * x for x in v) for v in M], n)


def preimage(A, M, n: int):
    """Basis of {v in Z^n : v A in span(M)}."""
    width = len(A[0]) if A else n
    stacked = [tuple(r) for r in A] + [tuple(-x for x in r) for r in M]
    if not stacked:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    ker = left_kernel(stacked, width)
    return basis([k[:n] for k in ker], n)


def gram_det(M) -> int:
    if not M:
        return 1
    G = [[sum(a * b for a, b in zip(u, v)) for v in M] for u in M]
    return det(G)


def det(G) -> int:
    """Exact determinant (Bareiss)."""
    A = [list(map(int, r)) for r in G]
    k = len(A)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(k - 1):
        if A[i][i] == 0:
            for j in range(i + 1, k):
                if A[j][i] != 0:
                    A[i], A[j] = A[j], A[i]
                    sign = -sign
                    break
            else:
                return 0
        for j in range(i + 1, k):
            for c in range(i + 1, k):
                A[j][c] = (A[j][c] * A[i][i] - A[j][i] * A[i][c]) // prev
        prev = A[i][i]
    return sign * A[-1][-1]


def contains(M, v, n: int) -> bool:
    return is_sublattice([tuple(v)], M, n)


def is_sublattice(M1, M2, n: int) -> bool:
    """span(M1) is contained in span(M2)."""
    return basis(list(M1) + list(M2), n) == basis(M2, n)


def index(sub, sup, n: int) -> int | None:
    """[span(sup) : span(sub)] for sub inside sup; None if infinite."""
    if not is_sublattice(sub, sup, n):
        raise ValueError("first lattice is not contained in the second")
    sub, sup = basis(sub, n), basis(sup, n)
    if len(sub) != len(sup):
        return None
    ratio = Fraction(gram_det(sub), gram_det(sup))
    if ratio.denominator != 1:
        raise ArithmeticError("Gram determinant ratio is not integral")
    r = isqrt(ratio.numerator)
    if r * r != ratio.numerator:
        raise ArithmeticError("Gram determinant ratio is not a square")
    return r


def coordinates(v, M):
    """Integer c with c M = v, for M a basis containing v in its span."""
    k = len(M)
    n = len(v)
    # solve over Q with Gaussian elimination on the transpose system
    aug = [[Fraction(M[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        piv = next((r for r in range(row, n) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    if any(aug[r][k] != 0 for r in range(row, n)):
        raise ValueError("vector not in the span")
    c = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        c[col] = aug[r][k]
    if any(x.denominator != 1 for x in c):
        raise ValueError("vector not in the integer span")
    return tuple(int(x) for x in c)


def smith(A):
    """Smith normal form: returns (d, U, V) with U A V = diag(d), U, V unimodular."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        D[dst] = _axpy(q, D[src], D[dst])
        U[dst] = _axpy(q, U[src], U[dst])

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(t, i, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(t, j, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    d = [D[i][i] for i in range(min(m, n))]
    return d, U, V


def inverse_unimodular(V):
    """Exact inverse of an integer unimodular matrix."""
    n = len(V)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(V)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = [[x for x in row[n:]] for row in aug]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]
