"""Exact Gaussian elimination over a field given by element objects.

Elements must support +, -, *, ==, and .inverse(); the zero element is
passed explicitly.  Used for the semilinear digit solves on etale algebras
and for linearized kernel computations.
"""

from .errors import InternalError


def solve_square(matrix, rhs, zero):
    """Solve M x = b for square M; raises InternalError if singular."""
    n = len(matrix)
    m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != zero:
                pivot = r
                break
        if pivot is None:
            raise InternalError("singular linear system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = m[col][col].inverse()
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != zero:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def row_reduce(matrix, zero):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][col] != zero:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col] != zero:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def nullity(matrix, zero):
    if not matrix:
        return 0
    _, pivots = row_reduce(matrix, zero)
    return len(matrix[0]) - len(pivots)
