from fractions import Fraction
from typing import List


def solve(A: List[List[Fraction]], B: List[List[Fraction]]) -> List[List[Fraction]]:
    """Solve ``A X = B`` exactly by Gauss-Jordan elimination.

    ``A`` is n x n, ``B`` is n x m; both are lists of rows and are not modified.
    """
    n = len(A)
    m = len(B[0]) if B else 0
    M = [list(A[r]) + list(B[r]) for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
        row = M[col]
        inv = 1 / row[col]
        if inv != 1:
            row[:] = [x * inv for x in row]
        for r in range(n):
            if r != col:
                f = M[r][col]
                if f:
                    other = M[r]
                    for k in range(col, n + m):
                        if row[k]:
                            other[k] -= f * row[k]
    return [M[r][n:] for r in range(n)]
