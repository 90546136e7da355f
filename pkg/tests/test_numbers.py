import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heckecert.numbers import (
    EisensteinElement,
    NonUnitDivision,
    PrecisionError,
    PrimeField,
    PrimeFieldElement,
    TruncatedPadic,
    ZmodPM,
    eisenstein_make_a,
    exact_str,
    is_prime,
    parse_exact,
    reduce_mod,
    teichmuller,
    teichmuller_residue,
    unit_part,
    val_int,
    val_p,
)

PRIMES = st.sampled_from([3, 5, 7, 11, 13])
nonzero_rationals = st.fractions(max_denominator=10**6).filter(lambda x: x != 0)


def test_is_prime_matches_trial_division():
    slow = [n for n in range(200) if n > 1 and all(n % d for d in range(2, n))]
    assert [n for n in range(200) if is_prime(n)] == slow


def test_val_p_examples():
    assert val_p(Fraction(50, 3), 5) == 2
    assert val_p(Fraction(3, 250), 5) == -3
    assert val_p(0, 7) == math.inf
    assert val_int(5**40 * 3, 5) == 40


@given(nonzero_rationals, nonzero_rationals, PRIMES)
def test_val_p_is_a_valuation(x, y, p):
    assert val_p(x * y, p) == val_p(x, p) + val_p(y, p)
    if x + y != 0:
        assert val_p(x + y, p) >= min(val_p(x, p), val_p(y, p))


@given(nonzero_rationals, PRIMES)
def test_unit_part(x, p):
    u = unit_part(x, p)
    assert val_p(u, p) == 0
    assert u * Fraction(p) ** val_p(x, p) == x


@given(st.integers(), st.integers(min_value=1, max_value=10**6), PRIMES, st.integers(1, 6))
def test_reduce_mod_inverts_denominator(a, b, p, M):
    x = Fraction(a, b)
    if x.denominator % p == 0:
        with pytest.raises(NonUnitDivision):
            reduce_mod(x, p**M, p)
        return
    r = reduce_mod(x, p**M, p)
    assert 0 <= r < p**M
    assert (r * x.denominator - x.numerator) % p**M == 0


@given(st.fractions())
def test_exact_str_round_trip(x):
    assert parse_exact(exact_str(x)) == x


def test_exact_str_handles_huge_integers():
    big = 7**9000 + 1
    assert len(exact_str(big)) > 4300
    assert parse_exact(exact_str(big)) == big
    assert parse_exact(exact_str(Fraction(big, 3))) == Fraction(big, 3)


def test_parse_exact_rejects_floats():
    with pytest.raises(ValueError):
        parse_exact("1.5")


@given(st.integers(), st.integers(), st.integers(), PRIMES)
def test_prime_field_laws(a, b, c, p):
    A, B, C = (PrimeFieldElement(p, x) for x in (a, b, c))
    assert (A + B) * C == A * C + B * C
    assert A - A == PrimeFieldElement(p, 0)
    if A:
        assert A * A.inverse() == PrimeFieldElement(p, 1)
        assert A ** (p - 1) == PrimeFieldElement(p, 1)


def test_prime_field_zero_inverse():
    with pytest.raises(ZeroDivisionError):
        PrimeFieldElement(5, 0).inverse()


@given(st.integers(), st.integers(), PRIMES, st.integers(1, 8))
def test_truncated_padic_ring(a, b, p, M):
    A, B = TruncatedPadic(p, M, a), TruncatedPadic(p, M, b)
    assert (A * B).residue == a * b % p**M
    assert (A + B - B).residue == A.residue
    if A.is_unit():
        assert (A * A.inverse()).residue == 1
    else:
        with pytest.raises(NonUnitDivision):
            A.inverse()


def test_truncated_padic_precision():
    x = TruncatedPadic(5, 4, 26)
    assert x.reduce(2).residue == 1
    with pytest.raises(PrecisionError):
        x.reduce(5)
    assert (x + TruncatedPadic(5, 2, 0)).M == 2
    assert TruncatedPadic(5, 3, 0).valuation() is None
    assert TruncatedPadic(5, 3, 50).valuation() == 2


@given(PRIMES, st.integers(0, 100), st.integers(1, 8))
def test_teichmuller_is_root_of_unity(p, mu, M):
    t = teichmuller_residue(mu, p, M)
    assert t % p == mu % p
    assert pow(t, p, p**M) == t


def test_teichmuller_example():
    assert teichmuller(PrimeFieldElement(5, 2), 3).residue == 57


@given(PRIMES, st.integers(1, 4), st.integers(0, 12), st.integers(0, 12))
def test_eisenstein_valuation_is_additive(p, e, j1, j2):
    M = 8
    a = eisenstein_make_a(p, e, M, j1)
    b = eisenstein_make_a(p, e, M, j2)
    # pi^j vanishes at precision M once j >= e M
    assert a.valuation() == (Fraction(j1, e) if j1 < e * M else None)
    prod = a * b
    if Fraction(j1 + j2, e) < M:
        assert prod.valuation() == Fraction(j1 + j2, e)


def test_eisenstein_pi_to_the_e_is_p():
    pi = eisenstein_make_a(5, 3, 6, 1)
    assert pi**3 == EisensteinElement(5, 3, 6, (5, 0, 0))


def test_ring_objects_compare_by_parameters():
    assert PrimeField(5) == PrimeField(5)
    assert ZmodPM(5, 3) != ZmodPM(5, 4)
