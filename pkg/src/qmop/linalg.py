"""Small exact dense linear algebra: Gaussian elimination over any field scalars."""

from __future__ import annotations

from .exactnum import DomainError


class SingularSystemError(DomainError):
    """The linear system has no unique solution."""


def solve(matrix, rhs):
    """Solve A x = b by Gaussian elimination with max-|pivot| row choice.

    For exact scalars any nonzero pivot works; picking the largest keeps the
    same code usable with the float backend.
    """
    n = len(rhs)
    a = [list(row) for row in matrix]
    b = list(rhs)
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot_row][col] == 0:
            raise SingularSystemError(f"singular system at column {col}")
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            b[col], b[pivot_row] = b[pivot_row], b[col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            factor = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] = a[r][c] - factor * a[col][c]
            b[r] = b[r] - factor * b[col]
    x = [None] * n
    for row in range(n - 1, -1, -1):
        acc = b[row]
        for c in range(row + 1, n):
            acc = acc - a[row][c] * x[c]
        x[row] = acc / a[row][row]
    return x


def determinant(matrix):
    """Exact determinant by cofactor expansion (intended for small matrices)."""
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total
