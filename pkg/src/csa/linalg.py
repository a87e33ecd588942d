"""Exact linear algebra over tower scalars.

Matrices are lists of rows.  Forward elimination is fraction-free
(Bareiss), which keeps rational-function entries small; reduction to
reduced row echelon form divides only once per pivot row.
"""
from __future__ import annotations


def _zero_of(M):
    for row in M:
        for x in row:
            return x - x
    return 0


def echelon(M):
    """Bareiss forward elimination. Returns (rows, pivot columns)."""
    A = [list(r) for r in M]
    if not A:
        return A, []
    m, n = len(A), len(A[0])
    prev = None
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            a = A[i][c]
            if not a:
                if prev is not None:
                    # keep the Bareiss invariant: scale by piv/prev
                    A[i] = [(x * piv) / prev if x else x for x in A[i]]
                else:
                    A[i] = [x * piv if x else x for x in A[i]]
                continue
            row_r = A[r]
            if prev is None:
                A[i] = [piv * x - a * y if (x or y) else x for x, y in zip(A[i], row_r)]
            else:
                A[i] = [(piv * x - a * y) / prev if (x or y) else x for x, y in zip(A[i], row_r)]
        prev = piv
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M) -> int:
    return len(echelon(M)[1])


def rref(M):
    """Reduced row echelon form (pivot entries 1) and pivot columns."""
    A, pivots = echelon(M)
    A = A[: len(pivots)]
    for k, c in enumerate(pivots):
        inv = 1 / A[k][c]
        A[k] = [x * inv for x in A[k]]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        for i in range(k):
            f = A[i][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    return A, pivots


def nullspace(M, ncols=None):
    """Basis of {x : Mx = 0}; one vector per free column, ascending."""
    if not M:
        raise ValueError("nullspace of an empty matrix needs ncols")
    n = len(M[0]) if ncols is None else ncols
    zero = _zero_of(M)
    one = zero + 1
    R, pivots = rref(M)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for k, c in enumerate(pivots):
            v[c] = -R[k][f]
        basis.append(v)
    return basis


def solve(M, b):
    """One solution x of Mx = b, or None when the system is inconsistent."""
    n = len(M[0])
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    zero = _zero_of(aug)
    x = [zero] * n
    for k, c in enumerate(pivots):
        x[c] = R[k][n]
    return x


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    Bt = transpose(B)
    out = []
    for row in A:
        out.append([_dot(row, col) for col in Bt])
    return out


def _dot(u, v):
    acc = None
    for x, y in zip(u, v):
        if x and y:
            acc = x * y if acc is None else acc + x * y
    return acc if acc is not None else u[0] - u[0]


def row_space_basis(vectors):
    """RREF basis of the span of the given vectors, with pivots."""
    if not vectors:
        return [], []
    return rref(vectors)


def in_span(rref_rows, pivots, v) -> bool:
    """Whether v lies in the row space given in reduced echelon form."""
    return reduce_vector(rref_rows, pivots, v) is None


def reduce_vector(rref_rows, pivots, v):
    """Remainder of v modulo an RREF row space; None when it reduces to 0."""
    w = list(v)
    for row, c in zip(rref_rows, pivots):
        f = w[c]
        if f:
            w = [x - f * y for x, y in zip(w, row)]
    return None if not any(w) else w


def coordinates(rref_rows, pivots, v):
    """Coefficients of v in the RREF basis, or None if v is outside the span."""
    coeffs = [v[c] for c in pivots]
    w = list(v)
    for a, row in zip(coeffs, rref_rows):
        if a:
            w = [x - a * y for x, y in zip(w, row)]
    if any(w):
        return None
    return coeffs
