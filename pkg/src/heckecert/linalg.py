"""Small exact linear algebra over F_p and Q."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

IntMatrix = Sequence[Sequence[int]]


def _to_mod_p(A, p: int) -> List[List[int]]:
    from .numbers import reduce_mod

    return [[reduce_mod(Fraction(x), p, p) for x in row] for row in A]


def row_echelon_mod_p(A, p: int) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form over F_p and the pivot columns."""
    M = _to_mod_p(A, p)
    if not M:
        return M, []
    rows, cols = len(M), len(M[0])
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank_mod_p(A, p: int) -> int:
    return len(row_echelon_mod_p(A, p)[1])


def det_mod_p(A, p: int) -> int:
    M = _to_mod_p(A, p)
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c] % p
        inv = pow(M[c][c], -1, p)
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv % p
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[c])]
    return det % p


def solve_mod_p(A, b: Sequence[int], p: int) -> Optional[List[int]]:
    """One solution of ``A x = b`` over F_p (free variables zero), or ``None``."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = row_echelon_mod_p(aug, p)
    if n in pivots:
        return None
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = R[i][n]
    return x


def det_bareiss(A: IntMatrix) -> int:
    """Integer determinant by fraction-free elimination."""
    M = [list(map(int, row)) for row in A]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def det_fraction(A) -> Fraction:
    """Rational determinant via a common denominator and Bareiss."""
    from math import lcm

    den = 1
    for row in A:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    n = len(A)
    ints = [[int(Fraction(x) * den) for x in row] for row in A]
    return Fraction(det_bareiss(ints), den**n)


def mat_mul(A, B):
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(len(B[0]))] for row in A]


def mat_vec(A, x):
    return [sum(a * xi for a, xi in zip(row, x)) for row in A]


def solve_fraction(A, b) -> List[Fraction]:
    """Solve a square nonsingular rational system by Gauss-Jordan."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def inverse_fraction(A) -> List[List[Fraction]]:
    n = len(A)
    cols = [solve_fraction(A, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]
