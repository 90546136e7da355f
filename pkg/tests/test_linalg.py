from fractions import Fraction
from itertools import permutations

from hypothesis import given, strategies as st

from heckecert.linalg import (
    det_bareiss,
    det_fraction,
    det_mod_p,
    inverse_fraction,
    mat_mul,
    mat_vec,
    rank_mod_p,
    solve_fraction,
    solve_mod_p,
)

PRIMES = st.sampled_from([3, 5, 7, 11, 13])


def square(n, entries=st.integers(-20, 20)):
    return st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)


def leibniz(A):
    n = len(A)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= A[i][perm[i]]
        total += term
    return total


@given(st.integers(1, 4).flatmap(square))
def test_determinants_agree_with_leibniz(A):
    d = leibniz(A)
    assert det_bareiss(A) == d
    assert det_fraction(A) == d


@given(st.integers(1, 4).flatmap(square), PRIMES)
def test_det_mod_p(A, p):
    assert det_mod_p(A, p) == leibniz(A) % p
    assert (rank_mod_p(A, p) == len(A)) == (leibniz(A) % p != 0)


@given(st.integers(1, 4).flatmap(square), PRIMES, st.data())
def test_solve_mod_p(A, p, data):
    b = data.draw(st.lists(st.integers(0, p - 1), min_size=len(A), max_size=len(A)))
    x = solve_mod_p(A, b, p)
    if leibniz(A) % p:
        assert x is not None
        assert [sum(a * xi for a, xi in zip(row, x)) % p for row in A] == [v % p for v in b]


@given(st.integers(1, 4).flatmap(square), st.data())
def test_inverse_and_solve_over_Q(A, data):
    if leibniz(A) == 0:
        return
    inv = inverse_fraction(A)
    ident = [[Fraction(int(i == j)) for j in range(len(A))] for i in range(len(A))]
    assert mat_mul(A, inv) == ident
    b = data.draw(st.lists(st.integers(-9, 9), min_size=len(A), max_size=len(A)))
    assert mat_vec(A, solve_fraction(A, b)) == [Fraction(v) for v in b]
