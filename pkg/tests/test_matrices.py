import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heckecert import matrices as mx
from heckecert.combinatorics import binom_int
from heckecert.linalg import mat_mul
from heckecert.numbers import reduce_mod


@pytest.mark.parametrize("alpha", range(1, 6))
def test_Mc_identity(alpha):
    assert mx.verify_Mc_identity(alpha)


def test_Mc_identity_detects_a_changed_vector(monkeypatch):
    orig = mx.mc_vector

    def broken(alpha):
        v = orig(alpha)
        v[1] = v[1] + 1
        return v

    monkeypatch.setattr(mx, "mc_vector", broken)
    assert not mx.verify_Mc_identity(2)


@pytest.mark.parametrize("alpha", range(0, 6))
@pytest.mark.parametrize("lam,mu", [(4, 1), (6, 1), (1, 3), (Fraction(2, 3), -5)])
def test_L_matrix(alpha, lam, mu):
    assert mx.L_matrix(alpha, lam, lam) == [[Fraction(int(i == j)) for j in range(alpha + 1)]
                                            for i in range(alpha + 1)]
    assert mx.verify_L_matrix(alpha, lam, mu)


def test_L_matrix_rejects_zero_lambda():
    with pytest.raises(ZeroDivisionError):
        mx.L_matrix(2, 0, 1)


@settings(max_examples=60)
@given(st.integers(0, 80), st.integers(0, 4), st.integers(1, 12), st.integers(1, 5), st.integers(0, 2))
def test_strided_binomial_sums_oracle(n, offset, stride, weights, start):
    naive = [sum(math.comb(n, i * stride + offset) * math.comb(i * stride, w)
                 for i in range(start, n + 1) if i * stride + offset <= n) for w in range(weights)]
    assert mx.strided_binomial_sums(n, offset, stride, weights, start) == naive


def test_build_A_small_case():
    p, r, s, alpha = 5, 24, 4, 1
    A = mx.build_A(r, s, alpha, 2, p)
    naive = [[Fraction(sum(math.comb(r - alpha + j, i * (p - 1) + j) * math.comb(i * (p - 1), w)
                           for i in range(1, r))) / (p if j == 0 else 1) for j in range(alpha + 1)]
             for w in range(3)]
    assert A == naive


def test_B_is_Einv_L_and_E_inverse():
    for alpha in range(1, 6):
        p = 7
        E, Ei = mx.E_matrix(alpha), mx.E_inverse(alpha)
        ident = [[Fraction(int(i == j)) for j in range(alpha + 1)] for i in range(alpha + 1)]
        assert mat_mul(E, Ei) == ident
        B = mx.build_B(alpha, p)
        assert B == mat_mul(Ei, mx.L_matrix(alpha, p - 1, 1))
        assert mx.reduce_matrix(B, p) == mx.B_bar_closed(alpha, p)


REGIME = [(p, s, alpha, beta) for p in (7, 11, 13) for alpha in (1, 2, 3) for beta in range(1, alpha + 1)
          for s in range(2 * alpha + 1, p)]


@pytest.mark.parametrize("p,s,alpha,beta", REGIME)
def test_claims_in_regime(p, s, alpha, beta):
    assert mx.verify_claim_two(p, s, alpha, beta).passed
    for m in (1, 2):
        rep = mx.verify_claim_one(p, s, alpha, beta, m, 1)
        assert rep.passed, rep.detail
        assert rep.detail["S_integral"] and rep.detail["N_integral"]
    try:
        rep = mx.verify_det_Q(p, s, alpha, beta)
    except mx.DegeneratePoint:
        return
    assert rep.passed, rep.detail


def test_claim_one_needs_residue_condition():
    # the bare weight s + beta(p-1) + iota p^m is not = s mod p-1
    r = 4 + 1 * 4 + 1 * 5
    assert not mx.verify_claim_one(5, 4, 1, 1, 1, 1, r=r).passed
    assert mx.verify_claim_one(5, 4, 1, 1, 1, 1).passed


def test_step4_r():
    r = mx.step4_r(6, 1, 1, 1, 7)
    assert (r - 6) % 6 == 0
    assert (r - 6 - 6 - 7) % 49 == 0
    with pytest.raises(ValueError):
        mx.step4_r(6, 1, 1, 7, 7)


def test_det_Q_closed_form_oracle():
    # det by cofactor expansion over F_p as an independent check of elimination
    def det(A, p):
        if len(A) == 1:
            return A[0][0] % p
        return sum((-1) ** j * A[0][j] * det([row[:j] + row[j + 1:] for row in A[1:]], p)
                   for j in range(len(A))) % p

    for p, s, alpha, beta in [(11, 8, 2, 1), (13, 9, 3, 2), (13, 12, 2, 2)]:
        Q = mx.build_Q_bar(p, s, alpha, beta)
        assert det(Q, p) == mx.det_Q_closed(p, s, alpha, beta) != 0


def test_degenerate_point_detected():
    # s - alpha = p makes (s-alpha)_(alpha+1) vanish mod p
    with pytest.raises(mx.DegeneratePoint):
        mx.build_Q_bar(7, 8, 1, 1)


def test_regime_checks():
    with pytest.raises(ValueError):
        mx.verify_claim_two(7, 6, 0, 1)
    with pytest.raises(ValueError):
        mx.verify_claim_two(7, 6, 2, 3)
    with pytest.raises(ValueError):
        mx.verify_claim_two(7, 4, 2, 1)


def test_claim_two_target_rows():
    T = mx.claim_two_target(8, 2, 1, 7)
    assert all(x == 0 for x in T[0]) and all(x == 0 for x in T[2])
    assert T[1][1] == binom_int(8 + 6 - 2 + 1, 6 + 1)


def test_Q_bar_entries_are_residues():
    Q = mx.build_Q_bar(11, 8, 2, 1)
    assert all(0 <= x < 11 for row in Q for x in row)
    assert reduce_mod(Fraction(1, 3), 11, 11) == 4
