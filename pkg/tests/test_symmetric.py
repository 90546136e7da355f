import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heckecert.combinatorics import CoefficientFamily
from heckecert.numbers import PrimeField, PrimeFieldElement, ZmodPM, RationalField
from heckecert.symmetric import (
    FunctionSpaceElement,
    HomogPoly,
    NotDivisible,
    RingMismatch,
    club_kernel_dimension,
    club_map,
    d_polynomial,
    kz_act,
    line_basis,
    mat_det,
    mat_mul,
    n_alpha_class,
    reference_generator,
    theta,
    theta_criterion,
    theta_criterion_routes,
    theta_pow_divide,
    theta_power,
)

SMALL_P = st.sampled_from([3, 5, 7])
mat_entries = st.integers(-20, 20)


def rand_poly(ring, r, coeffs):
    return HomogPoly.from_dict(ring, r, {j: c for j, c in enumerate(coeffs[: r + 1])})


def invertible_mod_p(p):
    quads = st.tuples(mat_entries, mat_entries, mat_entries, mat_entries)
    return quads.map(lambda q: ((q[0], q[1]), (q[2], q[3]))).filter(lambda g: mat_det(g) % p)


@settings(max_examples=60)
@given(st.data(), SMALL_P, st.integers(0, 8), st.lists(st.integers(-50, 50), min_size=9, max_size=9))
def test_kz_act_is_a_left_action(data, p, r, coeffs):
    R = ZmodPM(p, 3)
    v = rand_poly(R, r, coeffs)
    g = data.draw(invertible_mod_p(p))
    h = data.draw(invertible_mod_p(p))
    assert kz_act(mat_mul(g, h), v) == kz_act(g, kz_act(h, v))


@given(SMALL_P, st.integers(0, 8), st.lists(st.integers(-50, 50), min_size=9, max_size=9))
def test_kz_act_identity_and_linearity(p, r, coeffs):
    R = PrimeField(p)
    v = rand_poly(R, r, coeffs)
    assert kz_act(((1, 0), (0, 1)), v) == v
    g = ((2, 1), (1, 1))
    assert kz_act(g, v + v) == kz_act(g, v) + kz_act(g, v)


def test_kz_act_on_monomial():
    # x -> 2x + 3y, y -> y  acting on x y  over Q
    v = HomogPoly.monomial(RationalField(), 2, 1)
    out = kz_act(((2, 0), (3, 1)), v)
    assert out.coeffs == (Fraction(3), Fraction(2), Fraction(0))


def test_twist_multiplies_by_determinant():
    F = PrimeField(5)
    v = HomogPoly.monomial(F, 0, 0, 1, twist=2)
    assert kz_act(((2, 0), (0, 1)), v).coeffs == (4,)


@given(SMALL_P, st.integers(0, 3))
def test_theta_is_semi_invariant(p, alpha):
    F = PrimeField(p)
    t = theta_power(F, p, alpha)
    for g in (((1, 1), (0, 1)), ((0, 1), (1, 0)), ((2, 0), (0, 1)), ((1, 0), (3, 1))):
        d = mat_det(g) % p
        assert kz_act(g, t) == t.scale(pow(d, alpha, p))


@given(SMALL_P, st.integers(0, 3), st.integers(0, 12), st.lists(st.integers(0, 100), min_size=13, max_size=13))
def test_theta_division_inverts_multiplication(p, alpha, deg, coeffs):
    F = PrimeField(p)
    h = rand_poly(F, deg, coeffs)
    f = theta_power(F, p, alpha) * h
    q, failed = theta_pow_divide(f, alpha, p)
    assert not failed
    if alpha:
        assert q == h
    plus_one = f + HomogPoly.monomial(F, f.degree, 0, 1)
    if alpha:
        assert theta_pow_divide(plus_one, alpha, p)[1]


def test_theta_criterion_examples():
    # T_0 = D_0 + D_1 vanishes, so x y^8 - x^5 y^4 equals theta * y^3
    assert theta_criterion({0: 1, 1: -1}, 1, 9, 5)
    assert not theta_criterion({0: 1}, 1, 9, 5)
    with pytest.raises(ValueError):
        theta_criterion({0: 1, 2: -1}, 1, 9, 5)
    with pytest.raises(ValueError):
        theta_criterion({0: 1}, 5, 40, 5)


@settings(max_examples=150)
@given(SMALL_P, st.integers(0, 4), st.integers(0, 40), st.data())
def test_theta_criterion_routes_agree(p, alpha, extra, data):
    alpha = min(alpha, p - 1)
    r = 2 * alpha + extra
    top = (r - 2 * alpha) // (p - 1)
    D = data.draw(st.dictionaries(st.integers(0, top), st.integers(-5, 5), max_size=top + 1))
    routes = theta_criterion_routes(D, alpha, r, p)
    assert routes.agree


def test_d_polynomial_placement():
    f = d_polynomial(CoefficientFamily({0: 1, 2: 3}), 1, 12, 5)
    assert f.nonzero_terms() == {1: 1, 9: 3}


@pytest.mark.parametrize("p", [3, 5, 7])
def test_club_kernel_dimension(p):
    for h in range(2 * (p - 1)):
        assert club_kernel_dimension(p, h) == (h - 1) % (p - 1) + 2


@pytest.mark.parametrize("p,h", [(5, 2), (5, 7), (7, 3)])
def test_club_map_is_equivariant(p, h):
    rng = random.Random(h)
    basis = line_basis(p, h)
    f = basis[0]
    for b in basis[1:]:
        f = f + b.scale(rng.randrange(p))
    assert f.is_homogeneous()
    for g in (((1, 1), (0, 1)), ((0, 1), (1, 0)), ((2, 0), (0, 1))):
        assert club_map(f.act(g)) == kz_act(g, club_map(f))


def test_function_space_validates_length():
    with pytest.raises(ValueError):
        FunctionSpaceElement(5, 1, (0, 1))


def test_n_alpha_class_of_generator():
    p, alpha, r = 5, 1, 20
    gen = reference_generator(p, alpha, r)
    ok, c = n_alpha_class(gen.scale(3), alpha, r)
    assert ok and c == PrimeFieldElement(p, 3)
    F = PrimeField(p)
    nxt = theta_power(F, p, alpha + 1) * HomogPoly.monomial(F, r - (alpha + 1) * (p + 1), 0)
    assert n_alpha_class(nxt, alpha, r) == (False, PrimeFieldElement(p, 0))
    with pytest.raises(NotDivisible):
        n_alpha_class(HomogPoly.monomial(F, r, 0), alpha, r)


def test_ring_mismatch():
    a = HomogPoly.monomial(PrimeField(5), 2, 0)
    b = HomogPoly.monomial(PrimeField(7), 2, 0)
    with pytest.raises(RingMismatch):
        a + b
    with pytest.raises(RingMismatch):
        HomogPoly.monomial(ZmodPM(5, 2), 2, 0).evaluate(1, 1)


def test_theta_definition():
    t = theta(PrimeField(5), 5)
    assert t.nonzero_terms() == {1: 1, 5: 4}
