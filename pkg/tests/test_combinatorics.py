import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heckecert.combinatorics import (
    CoefficientFamily,
    T_functional,
    bigM,
    binom_derivative,
    binom_int,
    binom_value,
    binomial_family,
    default_family,
    falling,
    monomial_family,
    residue_one_based,
    residue_zero_based,
    stirling1,
    stirling2,
)
from heckecert.polynomials import BivarPoly, BivarRational, Poly, binom_poly, bivar_binom, falling_poly

PRIMES = st.sampled_from([3, 5, 7, 11, 13])
small_fracs = st.fractions(max_denominator=50, min_value=-50, max_value=50)


def test_binom_examples():
    assert binom_int(24, 4) == 10626
    assert binom_int(-1, 5) == -1
    assert binom_int(5, -1) == 0
    assert binom_int(3, 7) == 0


@given(st.integers(-40, 40), st.integers(0, 30))
def test_binom_int_matches_falling_factorial(m, k):
    assert binom_int(m, k) == Fraction(falling(m, k), math.factorial(k))


@given(st.integers(-40, 40), st.integers(1, 30))
def test_pascal_rule(m, k):
    assert binom_int(m, k) == binom_int(m - 1, k) + binom_int(m - 1, k - 1)


@given(small_fracs, st.integers(0, 8))
def test_binom_value_agrees_with_polynomial(x, n):
    assert binom_value(x, n) == binom_poly(n)(x)


@given(small_fracs, st.integers(1, 8))
def test_binom_derivative_by_product_rule(x, n):
    # d/dX binom(X, n) = binom(X, n) * sum_k 1/(X-k) away from the roots
    if x.denominator == 1 and 0 <= x < n:
        return
    expect = binom_value(x, n) * sum(Fraction(1) / (x - k) for k in range(n))
    assert binom_derivative(x, n) == expect


def test_stirling_small_values():
    assert [stirling1(4, k) for k in range(5)] == [0, -6, 11, -6, 1]
    assert [stirling2(4, k) for k in range(5)] == [0, 1, 7, 6, 1]


@given(st.integers(0, 12), st.integers(0, 12))
def test_stirling_matrices_are_inverse(n, m):
    total = sum(stirling1(n, k) * stirling2(k, m) for k in range(max(n, m) + 1))
    assert total == (1 if n == m else 0)


@given(st.integers(0, 10))
def test_falling_poly_coefficients_are_stirling1(n):
    assert falling_poly(n).coeffs == tuple(Fraction(stirling1(n, k)) for k in range(n + 1))


def test_bigM_anchor():
    assert bigM(24, 0, 5) == 4196352


@given(st.integers(0, 80), st.integers(-10, 10), PRIMES)
def test_bigM_matches_direct_sum(u, n, p):
    direct = sum(math.comb(u, k) for k in range(u + 1) if (k - n) % (p - 1) == 0)
    assert bigM(u, n, p) == direct


@given(st.integers(0, 80), PRIMES)
def test_bigM_rows_sum_to_power_of_two(u, p):
    assert sum(bigM(u, n, p) for n in range(p - 1)) == 2**u


def test_bigM_rejects_negative_u():
    with pytest.raises(ValueError):
        bigM(-1, 0, 5)


@given(st.integers(-100, 100), PRIMES)
def test_residues(h, p):
    a, b = residue_one_based(h, p), residue_zero_based(h, p)
    assert 1 <= a <= p - 1 and 0 <= b <= p - 2
    assert (a - h) % (p - 1) == 0 and (b - h) % (p - 1) == 0


@given(PRIMES, st.integers(0, 12))
def test_standard_families_are_nice(p, w):
    # 1/w! stops being a unit at w = p
    if w >= p:
        with pytest.raises(ValueError):
            default_family(p).check_nice(w)
        monomial_family(p).check_nice(w)
        return
    for fam in (default_family(p), binomial_family(p), monomial_family(p)):
        fam.check_nice(w)
        assert fam.poly(w).degree == w


def test_default_family_leading_coefficient():
    fam = default_family(7)
    assert fam.leading_coefficient(3) == Fraction(6**3, 6)


@given(PRIMES, st.integers(0, 6), st.integers(0, 40))
def test_family_fast_path_matches_polynomial(p, w, x):
    for fam in (default_family(p), binomial_family(p), monomial_family(p)):
        assert fam.value(w, x) == fam.poly(w)(x)


coeff_maps = st.dictionaries(st.integers(0, 20), st.fractions(max_denominator=9), max_size=6)


@given(coeff_maps, coeff_maps, st.integers(-5, 5), PRIMES, st.integers(0, 5))
def test_T_functional_is_linear(d1, d2, c, p, w):
    fam = default_family(p)
    D1, D2 = CoefficientFamily(d1), CoefficientFamily(d2)
    assert T_functional(fam, D1 + D2.scale(c), w) == T_functional(fam, D1, w) + c * T_functional(fam, D2, w)


def test_coefficient_family_drops_zeros():
    D = CoefficientFamily({0: 1, 3: 0, 5: Fraction(2, 5)})
    assert D.support() == (0, 5)
    assert D[3] == 0 and D.bounds() == (0, 5)
    assert D.min_valuation(5) == -1
    assert CoefficientFamily().bounds() is None


@given(st.lists(small_fracs, max_size=6), st.lists(small_fracs, max_size=6), small_fracs)
def test_poly_ring_operations(a, b, x):
    P, Q = Poly(a), Poly(b)
    assert (P * Q)(x) == P(x) * Q(x)
    assert (P + Q)(x) == P(x) + Q(x)
    assert (P - P).is_zero()


@given(st.lists(small_fracs, max_size=6), small_fracs, small_fracs, small_fracs)
def test_compose_affine(a, s, c, x):
    P = Poly(a)
    assert P.compose_affine(s, c)(x) == P(s * x + c)


@given(st.integers(0, 6), st.integers(-3, 3), st.integers(-2, 2), small_fracs, small_fracs)
def test_bivar_binom_evaluates(n, shift, other, x, y):
    got = bivar_binom(n, "X", shift, other).evaluate(x, y)
    assert got == binom_value(x + shift + other * y, n)


def test_bivar_rational_equality_is_semantic():
    X, Y = BivarPoly.X(), BivarPoly.Y()
    a = BivarRational(X * X - Y * Y, X - Y)
    assert a == BivarRational(X + Y)
    assert not (a == BivarRational(X))
    with pytest.raises(ZeroDivisionError):
        BivarRational(X, BivarPoly())
    with pytest.raises(TypeError):
        hash(a)
