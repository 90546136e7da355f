"""Exact matrix constructions behind the witness-constant steps.

All matrices are lists of rows of :class:`fractions.Fraction` (or ints mod p
for the reduced matrix ``Q_bar``).  Row and column indices start at 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .combinatorics import binom_derivative, binom_int, falling, stirling1, stirling2
from .linalg import det_mod_p, inverse_fraction, mat_mul, rank_mod_p, solve_mod_p
from .numbers import NonUnitDivision, reduce_mod, val_p
from .polynomials import BivarPoly, BivarRational, Poly, binom_poly, bivar_binom

FMatrix = List[List[Fraction]]


class DegeneratePoint(ArithmeticError):
    """A denominator that must be a p-adic unit vanishes mod p."""


def _check_regime(s: int, alpha: int, beta: int) -> None:
    if alpha < 1:
        raise ValueError("need alpha >= 1")
    if not 1 <= beta <= alpha:
        raise ValueError("need 1 <= beta <= alpha")
    if s <= 2 * alpha:
        raise ValueError("need s > 2*alpha")


def _pinv(j: int, p: int) -> Fraction:
    return Fraction(1, p) if j == 0 else Fraction(1)


def reduce_matrix(A, p: int) -> List[List[int]]:
    return [[reduce_mod(x, p, p) for x in row] for row in A]


def min_valuation(A, p: int):
    return min((val_p(x, p) for row in A for x in row), default=math.inf)


# ---------------------------------------------------------------------------
# symbolic identities


def falling_bivar(var: str, n: int, shift: int = 0, other: int = 0) -> BivarPoly:
    """``(V + shift + other*W)_n`` where V is ``var`` and W is the other variable."""
    V = BivarPoly.X() if var == "X" else BivarPoly.Y()
    W = BivarPoly.Y() if var == "X" else BivarPoly.X()
    base = V + shift + W * other
    out = BivarPoly.const(1)
    for k in range(n):
        out = out * (base - k)
    return out


def mc_vector(alpha: int) -> List[BivarPoly]:
    """``(Y_alpha, c_1, ..., c_alpha)`` over Q[X, Y]."""
    X = BivarPoly.X()
    out = [falling_bivar("Y", alpha)]
    for j in range(1, alpha + 1):
        term = (X + (j + 1)) * Fraction(1, j + 1) * bivar_binom(alpha - j - 1, "Y") + bivar_binom(alpha - j, "Y")
        out.append(term * ((-1) ** j * math.factorial(alpha)))
    return out


def mc_matrix(alpha: int) -> List[List[BivarRational]]:
    X, Y = BivarPoly.X(), BivarPoly.Y()
    rows = []
    for w in range(alpha + 1):
        row = [BivarRational((Y - X) * falling_bivar("X", w) * (-1) ** w, falling_bivar("Y", w + 1))]
        for j in range(1, alpha + 1):
            acc = BivarPoly()
            for v in range(w + 1):
                coef = (-1) ** (w - v) * binom_int(j + w - v - 1, w - v)
                if coef:
                    acc = acc + bivar_binom(v, "X", j) * (
                        bivar_binom(j - v, "Y", j - v) - bivar_binom(j - v, "X", j - v)) * coef
            row.append(BivarRational(acc))
        rows.append(row)
    return rows


def verify_Mc_identity(alpha: int) -> bool:
    """Entries 0..alpha-1 of ``M c`` vanish and entry alpha is ``(Y-X)_(alpha+1)/(Y-alpha)``."""
    if alpha < 1:
        raise ValueError("need alpha >= 1")
    M = mc_matrix(alpha)
    c = mc_vector(alpha)
    X, Y = BivarPoly.X(), BivarPoly.Y()
    target = BivarRational(falling_bivar("Y", alpha + 1, 0, -1), Y - alpha)
    for w, row in enumerate(M):
        d = BivarRational(0)
        for Mwj, cj in zip(row, c):
            d = d + Mwj * BivarRational(cj)
        if w < alpha and not d.is_zero():
            return False
        if w == alpha and not d == target:
            return False
    return True


def L_matrix(alpha: int, lam, mu) -> FMatrix:
    """``L_(l,j) = sum_k (j!/l!) (mu/lam)^k s1(l,k) s2(k,j)``."""
    lam, mu = Fraction(lam), Fraction(mu)
    if lam == 0:
        raise ZeroDivisionError("lambda must be nonzero")
    q = mu / lam
    return [[sum((Fraction(math.factorial(j), math.factorial(l)) * q**k * stirling1(l, k) * stirling2(k, j)
                  for k in range(alpha + 1)), Fraction(0))
             for j in range(alpha + 1)] for l in range(alpha + 1)]


def verify_L_matrix(alpha: int, lam, mu) -> bool:
    """``L (binom(lam X, i))_i = (binom(mu X, i))_i`` coefficientwise, plus the Stirling factorization."""
    lam, mu = Fraction(lam), Fraction(mu)
    if lam == 0:
        raise ZeroDivisionError("lambda must be nonzero")
    L = L_matrix(alpha, lam, mu)
    X = Poly.x()
    lhs_basis = [binom_poly(i).compose_affine(lam, 0) for i in range(alpha + 1)]
    for l in range(alpha + 1):
        acc = Poly()
        for j in range(alpha + 1):
            if L[l][j]:
                acc = acc + lhs_basis[j] * L[l][j]
        if acc != binom_poly(l).compose_affine(mu, 0):
            return False
    left = [[Fraction(mu**j * stirling1(i, j), math.factorial(i)) for j in range(alpha + 1)] for i in range(alpha + 1)]
    right = [[Fraction(math.factorial(j) * stirling2(i, j)) / lam**i for j in range(alpha + 1)] for i in range(alpha + 1)]
    return mat_mul(left, right) == L


# ---------------------------------------------------------------------------
# A, S, N, B


def strided_binomial_sums(n: int, offset: int, stride: int, weights: int, start: int = 1):
    """``[sum_(i>=start) binom(n, i*stride+offset) binom(i*stride, w) for w < weights]``.

    Walks the binomial row once with the multiplicative recurrence, which is much
    faster than calling ``math.comb`` per term when ``n`` is large.
    """
    out = [0] * weights
    if n < 0:
        return out
    c = 1
    for k in range(n + 1):
        if k >= offset and (k - offset) % stride == 0 and (k - offset) // stride >= start:
            m = k - offset
            for w in range(weights):
                out[w] += c * math.comb(m, w)
        c = c * (n - k) // (k + 1)
    return out


def build_A(r: int, s: int, alpha: int, nu: int, p: int, rows: Optional[int] = None) -> FMatrix:
    """``A_(w,j) = p^(-[j=0]) sum_(i>0) binom(r-alpha+j, i(p-1)+j) binom(i(p-1), w)``."""
    rows = 2 * nu - alpha if rows is None else rows
    cols = [strided_binomial_sums(r - alpha + j, j, p - 1, rows) for j in range(alpha + 1)]
    return [[Fraction(cols[j][w]) * _pinv(j, p) for j in range(alpha + 1)] for w in range(rows)]


def build_S(s: int, beta: int, alpha: int, p: int, rows: Optional[int] = None) -> FMatrix:
    """``S_(w,j) = p^(-[j=0]) sum_(i=1..beta) binom(s+beta(p-1)-alpha+j, i(p-1)+j) binom(i(p-1), w)``."""
    rows = alpha + 1 if rows is None else rows
    R0 = s + beta * (p - 1)
    return [[Fraction(sum(binom_int(R0 - alpha + j, i * (p - 1) + j) * math.comb(i * (p - 1), w)
                          for i in range(1, beta + 1))) * _pinv(j, p)
             for j in range(alpha + 1)] for w in range(rows)]


def build_N(s: int, beta: int, alpha: int, p: int, rows: Optional[int] = None) -> FMatrix:
    """First-order variation of S in the direction of r, written with p-small binomials only."""
    rows = alpha + 1 if rows is None else rows
    R0 = s + beta * (p - 1)
    out = []
    for w in range(rows):
        row = []
        for j in range(alpha + 1):
            x = R0 - alpha + j
            tot = Fraction(0)
            for v in range(w + 1):
                c = (-1) ** (w - v) * binom_int(j + w - v - 1, w - v)
                if not c:
                    continue
                inner = sum(binom_int(x - v, i * (p - 1) + j - v) for i in range(beta + 1))
                tot += c * binom_derivative(x, v) * inner
            if w == 0:
                tot -= binom_derivative(x, j)
            tot *= _pinv(j, p)
            if j == 0:
                tot -= Fraction((-1) ** w * binom_int(R0 - alpha, w) * math.factorial(w), falling(s - alpha, w + 1))
            row.append(tot)
        out.append(row)
    return out


def build_B(alpha: int, p: int) -> FMatrix:
    """``B_(i,j) = j! sum_(k,l) (-1)^(i+l+k)/l! binom(l,i) (1-p)^(-k) s1(l,k) s2(k,j)``."""
    out = []
    for i in range(alpha + 1):
        row = []
        for j in range(alpha + 1):
            tot = Fraction(0)
            for l in range(alpha + 1):
                bl = math.comb(l, i)
                if not bl:
                    continue
                for k in range(alpha + 1):
                    s1 = stirling1(l, k)
                    s2 = stirling2(k, j)
                    if s1 and s2:
                        tot += Fraction((-1) ** (i + l + k) * bl * s1 * s2, math.factorial(l)) / Fraction(1 - p) ** k
            row.append(tot * math.factorial(j))
        out.append(row)
    return out


def E_matrix(alpha: int) -> FMatrix:
    """``E_(l,w) = binom(w, l)``."""
    return [[Fraction(math.comb(w, l)) for w in range(alpha + 1)] for l in range(alpha + 1)]


def E_inverse(alpha: int) -> FMatrix:
    """``((-1)^(i+l) binom(l, i))``."""
    return [[Fraction((-1) ** (i + l) * math.comb(l, i)) for l in range(alpha + 1)] for i in range(alpha + 1)]


def B_bar_closed(alpha: int, p: int) -> List[List[int]]:
    """``delta_((i,w)=(0,0)) + sum_(l=1..alpha) (-1)^i binom(l,i) binom(l-1, l-w)`` mod p."""
    return [[((1 if (i, w) == (0, 0) else 0)
              + sum((-1) ** i * math.comb(l, i) * binom_int(l - 1, l - w) for l in range(1, alpha + 1))) % p
             for w in range(alpha + 1)] for i in range(alpha + 1)]


# ---------------------------------------------------------------------------
# checks


@dataclass
class MatrixReport:
    name: str
    params: Dict[str, object]
    passed: bool
    detail: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": {k: str(v) for k, v in self.params.items()},
            "passed": self.passed,
            "detail": {k: str(v) for k, v in self.detail.items()},
        }


def step4_r(s: int, beta: int, m: int, iota: int, p: int) -> int:
    """``s + beta(p-1) + iota p^m + c p^(m+1)`` with c chosen so that ``r = s mod p-1``."""
    if iota % p == 0:
        raise ValueError("iota must be a unit")
    if m < 1:
        raise ValueError("need m >= 1")
    c = (-iota) % (p - 1)
    return s + beta * (p - 1) + iota * p**m + c * p ** (m + 1)


def verify_claim_one(p: int, s: int, alpha: int, beta: int, m: int, iota: int, M: Optional[int] = None,
                     rows: Optional[int] = None, r: Optional[int] = None) -> MatrixReport:
    """``A = S + eta N + O(p^(m+1))`` entrywise, exactly.

    ``r`` defaults to :func:`step4_r`, which is ``s + beta(p-1) + iota p^m`` up to
    ``O(p^(m+1))`` and also keeps ``r = s mod p-1``; without that congruence the
    bound fails.  ``M`` only guards that the bound is meaningful.
    """
    _check_regime(s, alpha, beta)
    if iota % p == 0 or m < 1:
        raise ValueError("need iota a unit and m >= 1")
    if M is not None and M <= m + 1:
        raise ValueError("precision must exceed m+1")
    r = step4_r(s, beta, m, iota, p) if r is None else r
    eta = iota * p**m
    rows = alpha + 1 if rows is None else rows
    A = build_A(r, s, alpha, 0, p, rows=rows)
    S = build_S(s, beta, alpha, p, rows=rows)
    N = build_N(s, beta, alpha, p, rows=rows)
    diff = [[a - sv - eta * nv for a, sv, nv in zip(ra, rs, rn)] for ra, rs, rn in zip(A, S, N)]
    v = min_valuation(diff, p)
    return MatrixReport(
        "claim_one", {"p": p, "s": s, "alpha": alpha, "beta": beta, "m": m, "iota": iota, "r": r, "rows": rows},
        v >= m + 1,
        {"min_valuation": v, "bound": m + 1,
         "S_integral": min_valuation(S, p) >= 0, "N_integral": min_valuation(N, p) >= 0},
    )


def claim_two_target(s: int, alpha: int, beta: int, p: int) -> FMatrix:
    R0 = s + beta * (p - 1)
    return [[(Fraction(binom_int(R0 - alpha + j, w * (p - 1) + j)) * _pinv(j, p) if 1 <= w <= beta else Fraction(0))
             for j in range(alpha + 1)] for w in range(alpha + 1)]


def verify_claim_two(p: int, s: int, alpha: int, beta: int) -> MatrixReport:
    """``B S`` equals the stated matrix exactly, and ``B = E^(-1) L``."""
    _check_regime(s, alpha, beta)
    B = build_B(alpha, p)
    S = build_S(s, beta, alpha, p)
    BS = mat_mul(B, S)
    L = L_matrix(alpha, p - 1, 1)
    factor_ok = mat_mul(E_inverse(alpha), L) == B
    col0_ok = all(B[i][0] == (1 if i == 0 else 0) for i in range(alpha + 1))
    structure_ok = BS == claim_two_target(s, alpha, beta, p)
    return MatrixReport(
        "claim_two", {"p": p, "s": s, "alpha": alpha, "beta": beta},
        structure_ok and factor_ok and col0_ok,
        {"structure": structure_ok, "B_equals_Einv_L": factor_ok, "B_column0": col0_ok,
         "B_integral": min_valuation(B, p) >= 0},
    )


def _check_denominators(p: int, s: int, alpha: int, beta: int) -> None:
    if falling(s - alpha, alpha + 1) % p == 0:
        raise DegeneratePoint(f"(s-alpha)_(alpha+1) vanishes mod {p}")
    for i in range(1, beta + 1):
        if binom_int(s - alpha - beta + i, i) % p == 0:
            raise DegeneratePoint(f"binom(s-alpha-beta+{i}, {i}) vanishes mod {p}")


def Q_bar_definition(p: int, s: int, alpha: int, beta: int) -> List[List[int]]:
    """Rows 1..beta of ``BS`` and the remaining rows of ``BN``, reduced mod p."""
    B = build_B(alpha, p)
    BS = mat_mul(B, build_S(s, beta, alpha, p))
    BN = mat_mul(B, build_N(s, beta, alpha, p))
    rows = [BS[i] if 1 <= i <= beta else BN[i] for i in range(alpha + 1)]
    return reduce_matrix(rows, p)


def Q_bar_closed(p: int, s: int, alpha: int, beta: int) -> List[List[int]]:
    """Entry formulas for ``Q_bar`` simplified mod p."""
    Bb = B_bar_closed(alpha, p)
    out = []
    base = s - alpha - beta
    for i in range(alpha + 1):
        row = []
        for j in range(alpha + 1):
            if 1 <= i <= beta:
                if j == 0:
                    val = Fraction(math.comb(beta, i) * (-1) ** (i + 1), binom_int(base + i, i))
                else:
                    val = Fraction(math.comb(beta, i) * binom_int(base + j, j - i))
            elif j == 0:
                val = sum((Fraction((-1) ** w * Bb[i][w]) * (beta * binom_derivative(base, w) - binom_int(base, w))
                           * Fraction(math.factorial(w), falling(s - alpha, w + 1)) for w in range(alpha + 1)),
                          Fraction(0))
            else:
                val = sum((Fraction((-1) ** (i + j + v) * binom_int(v, j - i)) * binom_derivative(base + j, v)
                           * binom_int(s - alpha + j - v, j - v) for v in range(j + 1)), Fraction(0))
                if i == 0:
                    val -= binom_derivative(base + j, j)
            row.append(reduce_mod(val, p, p))
        out.append(row)
    return out


def build_Q_bar(p: int, s: int, alpha: int, beta: int) -> List[List[int]]:
    """``Q_bar`` over F_p; the definition and the closed forms must agree."""
    _check_regime(s, alpha, beta)
    _check_denominators(p, s, alpha, beta)
    try:
        Qd = Q_bar_definition(p, s, alpha, beta)
        Qc = Q_bar_closed(p, s, alpha, beta)
    except NonUnitDivision as exc:
        raise DegeneratePoint(str(exc)) from exc
    if Qd != Qc:
        raise AssertionError(f"Q_bar mismatch at p={p} s={s} alpha={alpha} beta={beta}: {Qd} vs {Qc}")
    return Qd


def det_Q_closed(p: int, s: int, alpha: int, beta: int) -> int:
    val = Fraction((-1) ** (alpha + beta + 1) * math.factorial(alpha - beta) * math.factorial(beta),
                   falling(s - alpha, alpha + 1))
    for j in range(1, beta + 1):
        val *= math.comb(beta, j)
    for j in range(beta + 1, alpha + 1):
        val *= Fraction((-1) ** (beta + j), (beta + 1) * math.comb(j, beta + 1))
    return reduce_mod(val, p, p)


def verify_det_Q(p: int, s: int, alpha: int, beta: int) -> MatrixReport:
    """Elimination determinant equals the closed form, is nonzero, and ``Q z = e0`` has ``z_0 != 0``."""
    Q = build_Q_bar(p, s, alpha, beta)
    d_elim = det_mod_p(Q, p)
    d_closed = det_Q_closed(p, s, alpha, beta)
    z = solve_mod_p(Q, [1] + [0] * alpha, p)
    diag_ok = all(Q[i][j] == 0 for i in range(alpha + 1) for j in range(1, i))
    ok = d_elim == d_closed and d_elim != 0 and z is not None and z[0] != 0 and diag_ok
    return MatrixReport(
        "det_Q", {"p": p, "s": s, "alpha": alpha, "beta": beta}, ok,
        {"det_elimination": d_elim, "det_closed": d_closed, "z": z, "below_diagonal_zero": diag_ok},
    )
