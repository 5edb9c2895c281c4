"""Integer matrix routines: Hermite normal form, transforms, linear solves.

All matrices are lists of row tuples over Python ints.  Everything here is
exact; sizes are tiny (d <= 2 in practice, a handful of stacked generator
rows), so classical row reduction is fine.
"""

from __future__ import annotations

from fractions import Fraction


def _swap(rows, i, j):
    rows[i], rows[j] = rows[j], rows[i]


def hnf(rows: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the unique basis in upper echelon form: pivots positive,
    entries above a pivot reduced into [0, pivot).  Zero rows are dropped.
    """
    H, _ = hnf_with_transform(rows, ncols)
    return H


def hnf_with_transform(rows, ncols=None):
    """HNF together with a unimodular transform U such that U * M = [H; 0].

    U is returned as a full square matrix over the original row count; the
    first ``len(H)`` rows of U produce the HNF basis, the rest map into the
    kernel of the row span (as combinations of input rows summing to zero).
    """
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if m else 0)
    A = [list(r) + [0] * (n - len(r)) for r in rows]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, m):
            if A[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        _swap(A, row, piv)
        _swap(U, row, piv)
        # eliminate below via euclidean steps
        for r in range(row + 1, m):
            while A[r][col] != 0:
                q = A[row][col] // A[r][col]
                for k in range(n):
                    A[row][k] -= q * A[r][k]
                for k in range(m):
                    U[row][k] -= q * U[r][k]
                _swap(A, row, r)
                _swap(U, row, r)
        if A[row][col] < 0:
            A[row] = [-v for v in A[row]]
            U[row] = [-v for v in U[row]]
        # reduce entries above the pivot
        for r in range(row):
            q = A[r][col] // A[row][col]
            if q:
                for k in range(n):
                    A[r][k] -= q * A[row][k]
                for k in range(m):
                    U[r][k] -= q * U[row][k]
        row += 1
        if row == m:
            break
    H = [r for r in A[:row]]
    return H, U


def kernel_basis(rows, ncols=None):
    """Basis of the integer kernel {v : v * M = 0} of the row map."""
    m = len(rows)
    H, U = hnf_with_transform(rows, ncols)
    return [U[i] for i in range(len(H), m)]


def solve_integer(A, b):
    """One integer solution z of A z = b, or None.

    A is m x n (list of rows), b a length-m integer vector.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    # work with columns of A as rows: M = A^T, find w with w M = b, z = w U... we
    # instead solve z^T A^T = b^T by reducing A^T.
    M = [[A[i][j] for i in range(m)] for j in range(n)]
    H, U = hnf_with_transform(M, m)
    # back-substitute w H = b over the echelon rows of H
    w = [0] * len(H)
    bb = list(b)
    for i, hrow in enumerate(H):
        # pivot column of this row
        pc = next(k for k, v in enumerate(hrow) if v != 0)
        if bb[pc] % hrow[pc] != 0:
            return None
        w[i] = bb[pc] // hrow[pc]
        for k in range(m):
            bb[k] -= w[i] * hrow[k]
    if any(bb):
        return None
    z = [0] * n
    for i, wi in enumerate(w):
        if wi:
            for k in range(n):
                z[k] += wi * U[i][k]
    return z


def reduce_mod_rows(v, H):
    """Canonical representative of v modulo the lattice spanned by HNF rows H.

    H must be in row HNF; pivot columns are processed left to right.
    """
    out = list(v)
    for row in H:
        pc = next((k for k, x in enumerate(row) if x != 0), None)
        if pc is None:
            continue
        q = out[pc] // row[pc]
        if q:
            for k in range(len(out)):
                out[k] -= q * row[k]
    return out


def in_row_span(v, H):
    """Whether integer vector v lies in the lattice spanned by HNF rows H."""
    out = list(v)
    for row in H:
        pc = next((k for k, x in enumerate(row) if x != 0), None)
        if pc is None:
            continue
        if out[pc] % row[pc] == 0:
            q = out[pc] // row[pc]
            for k in range(len(out)):
                out[k] -= q * row[k]
    return not any(out)


def det_upper(H):
    d = 1
    for i, row in enumerate(H):
        d *= row[i]
    return d


def mat_inv_fraction(rows):
    """Exact inverse of a square integer/Fraction matrix, as Fractions."""
    n = len(rows)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def solve_fraction(A, b):
    """Solve A x = b exactly over the rationals; A need not be square.

    Returns one solution (list of Fractions) or None if inconsistent.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return x
