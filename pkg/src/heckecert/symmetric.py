"""Homogeneous polynomial modules, theta-divisibility and the function spaces I_h.

A :class:`HomogPoly` of degree r stores coefficient ``c_j`` of ``x^j y^(r-j)``
at index j, as raw values of one of the rings in :mod:`heckecert.numbers`.
Matrices act by ``v(x, y) -> v(g1 x + g3 y, g2 x + g4 y)`` for
``g = ((g1, g2), (g3, g4))``, times ``det(g)^twist``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .combinatorics import (
    CoefficientFamily,
    T_functional,
    binom_int,
    default_family,
    residue_one_based,
    residue_zero_based,
)
from .numbers import (
    EisensteinRing,
    PrimeField,
    PrimeFieldElement,
    RationalField,
    ZmodPM,
    reduce_mod,
)

Matrix = Tuple[Tuple[object, object], Tuple[object, object]]


class RingMismatch(TypeError):
    pass


class NotDivisible(ValueError):
    pass


@dataclass(frozen=True)
class HomogPoly:
    ring: object
    coeffs: tuple
    twist: int = 0

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("a homogeneous polynomial needs degree >= 0")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, ring, r: int, twist: int = 0) -> "HomogPoly":
        return cls(ring, (ring.zero,) * (r + 1), twist)

    @classmethod
    def monomial(cls, ring, r: int, j: int, c=1, twist: int = 0) -> "HomogPoly":
        """``c x^j y^(r-j)``."""
        if not 0 <= j <= r:
            raise ValueError("exponent out of range")
        out = [ring.zero] * (r + 1)
        out[j] = ring.coerce(c)
        return cls(ring, tuple(out), twist)

    @classmethod
    def from_dict(cls, ring, r: int, terms: Mapping[int, object], twist: int = 0) -> "HomogPoly":
        out = [ring.zero] * (r + 1)
        for j, c in terms.items():
            out[j] = ring.add(out[j], ring.coerce(c))
        return cls(ring, tuple(out), twist)

    def _check(self, other: "HomogPoly") -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        if self.twist != other.twist:
            raise ValueError("twist mismatch")

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._check(other)
        R = self.ring
        return HomogPoly(R, tuple(R.add(a, b) for a, b in zip(self.coeffs, other.coeffs)), self.twist)

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        self._check(other)
        R = self.ring
        return HomogPoly(R, tuple(R.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)), self.twist)

    def __neg__(self) -> "HomogPoly":
        R = self.ring
        return HomogPoly(R, tuple(R.neg(a) for a in self.coeffs), self.twist)

    def scale(self, c) -> "HomogPoly":
        R = self.ring
        c = R.coerce(c)
        return HomogPoly(R, tuple(R.mul(c, a) for a in self.coeffs), self.twist)

    def __mul__(self, other: "HomogPoly") -> "HomogPoly":
        if not isinstance(other, HomogPoly):
            return self.scale(other)
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
        R = self.ring
        out = [R.zero] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if R.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if not R.is_zero(b):
                    out[i + j] = R.add(out[i + j], R.mul(a, b))
        return HomogPoly(R, tuple(out), self.twist + other.twist)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(c) for c in self.coeffs)

    def nonzero_terms(self) -> Dict[int, object]:
        return {j: c for j, c in enumerate(self.coeffs) if not self.ring.is_zero(c)}

    def min_valuation(self):
        """Smallest coefficient valuation; ``None`` when every coefficient is zero."""
        vals = [self.ring.valuation(c) for c in self.coeffs]
        vals = [v for v in vals if v is not None]
        return min(vals) if vals else None

    def val_lower_bound(self):
        v = self.min_valuation()
        return Fraction(self.ring.M) if v is None else v

    def change_ring(self, ring) -> "HomogPoly":
        return HomogPoly(ring, tuple(ring.coerce(_raw_to_value(self.ring, c)) for c in self.coeffs), self.twist)

    def evaluate(self, x: int, y: int):
        """Value at an F_p point; only for prime-field polynomials."""
        if not isinstance(self.ring, PrimeField):
            raise RingMismatch("evaluation is only defined over a prime field")
        p = self.ring.p
        r = self.degree
        return sum(c * pow(x, j, p) * pow(y, r - j, p) for j, c in enumerate(self.coeffs)) % p


def _raw_to_value(ring, c):
    if isinstance(ring, EisensteinRing):
        if any(c[1:]):
            raise RingMismatch("cannot move a ramified coefficient into another ring")
        return c[0]
    return c


# ---------------------------------------------------------------------------
# the matrix action


def _modulus(ring) -> Optional[int]:
    if isinstance(ring, (ZmodPM, EisensteinRing)):
        return ring.modulus
    if isinstance(ring, PrimeField):
        return ring.p
    if isinstance(ring, RationalField):
        return None
    raise RingMismatch(f"unsupported ring {ring!r}")


def _entry(x, ring):
    """Matrix entry as an int modulo the ring modulus (or a Fraction over QQ)."""
    mod = _modulus(ring)
    if isinstance(x, PrimeFieldElement):
        if not isinstance(ring, PrimeField) or x.p != ring.p:
            raise RingMismatch("prime-field entry in a different ring")
        return x.residue
    if mod is None:
        return Fraction(x)
    if isinstance(x, int):
        return x % mod
    if isinstance(x, Fraction):
        return reduce_mod(x, mod, ring.p)
    raise RingMismatch(f"unsupported matrix entry {x!r}")


def _linear_power_table(a, b, r, mod):
    """Coefficient lists of (a x + b y)^k for k = 0..r, indexed by the x-exponent."""
    table = [[1]]
    for k in range(1, r + 1):
        prev = table[-1]
        cur = [0] * (k + 1)
        for i, c in enumerate(prev):
            if c:
                cur[i + 1] += a * c
                cur[i] += b * c
        if mod is not None:
            cur = [c % mod for c in cur]
        table.append(cur)
    return table


def _act_component(coeffs: Sequence, g, mod) -> List:
    (g1, g2), (g3, g4) = g
    r = len(coeffs) - 1
    out = [0] * (r + 1)
    if g3 == 0:
        # upper triangular: x -> g1 x, y -> g2 x + g4 y
        apow = 1
        for j, c in enumerate(coeffs):
            if c:
                m = r - j
                cj = c * apow
                bpow = 1
                dpows = [1] * (m + 1)
                for k in range(1, m + 1):
                    dpows[k] = dpows[k - 1] * g4
                    if mod is not None:
                        dpows[k] %= mod
                for k in range(m + 1):
                    out[j + k] += cj * math.comb(m, k) * bpow * dpows[m - k]
                    bpow *= g2
                    if mod is not None:
                        bpow %= mod
                if mod is not None:
                    out = [v % mod for v in out]
            apow *= g1
            if mod is not None:
                apow %= mod
    else:
        first = _linear_power_table(g1, g3, r, mod)
        second = _linear_power_table(g2, g4, r, mod)
        for j, c in enumerate(coeffs):
            if not c:
                continue
            A, B = first[j], second[r - j]
            for i, a in enumerate(A):
                if a:
                    ca = c * a
                    for k, b in enumerate(B):
                        if b:
                            out[i + k] += ca * b
            if mod is not None:
                out = [v % mod for v in out]
    if mod is not None:
        out = [v % mod for v in out]
    return out


def kz_act(g: Matrix, v: HomogPoly) -> HomogPoly:
    """``det(g)^twist * v(g1 x + g3 y, g2 x + g4 y)``.

    Entries may be ints, p-integral Fractions or prime-field elements.
    """
    R = v.ring
    mod = _modulus(R)
    e = tuple(tuple(_entry(x, R) for x in row) for row in g)
    if isinstance(R, EisensteinRing):
        comps = list(zip(*v.coeffs))
        moved = [_act_component(list(c), e, mod) for c in comps]
        coeffs = tuple(zip(*moved))
    else:
        coeffs = tuple(_act_component(list(v.coeffs), e, mod))
        if mod is None:
            coeffs = tuple(Fraction(c) for c in coeffs)
    out = HomogPoly(R, coeffs, v.twist)
    if v.twist:
        (g1, g2), (g3, g4) = e
        det = g1 * g4 - g2 * g3
        if mod is None:
            factor = Fraction(det) ** v.twist
        elif v.twist > 0:
            factor = pow(det, v.twist, mod)
        else:
            factor = pow(pow(det, -1, mod), -v.twist, mod)
        out = out.scale(factor)
    return out


def mat_mul(g: Matrix, h: Matrix) -> Matrix:
    (a, b), (c, d) = g
    (e, f), (x, y) = h
    return ((a * e + b * x, a * f + b * y), (c * e + d * x, c * f + d * y))


def mat_det(g: Matrix):
    (a, b), (c, d) = g
    return a * d - b * c


# ---------------------------------------------------------------------------
# theta


def theta(ring, p: int) -> HomogPoly:
    """``x y^p - x^p y``."""
    return HomogPoly.from_dict(ring, p + 1, {1: 1, p: -1})


def theta_power(ring, p: int, alpha: int) -> HomogPoly:
    out = HomogPoly.monomial(ring, 0, 0, 1)
    t = theta(ring, p)
    for _ in range(alpha):
        out = out * t
    return out


def theta_divide_once(f: HomogPoly, p: int) -> Tuple[Optional[HomogPoly], bool]:
    """Divide by theta; returns (quotient, failed)."""
    R = f.ring
    r = f.degree
    if r < p + 1:
        return None, not f.is_zero()
    n = r - p - 1
    h = [R.zero] * (n + 1)
    # coefficient j of theta*h is h[j-1] - h[j-p], so h[j] = f[j+1] + h[j+1-p]
    for j in range(n + 1):
        acc = f.coeffs[j + 1]
        if j + 1 - p >= 0:
            acc = R.add(acc, h[j + 1 - p])
        h[j] = acc
    q = HomogPoly(R, tuple(h), f.twist)
    back = theta(R, p) * HomogPoly(R, q.coeffs, 0)
    failed = back.coeffs != f.coeffs
    return q, failed


def theta_pow_divide(f: HomogPoly, alpha: int, p: int) -> Tuple[Optional[HomogPoly], bool]:
    """Exact division by ``theta^alpha``; returns (quotient, remainder flag).

    The flag is True when the division fails; the quotient is then ``None``.
    The zero polynomial of degree below ``alpha(p+1)`` counts as divisible
    with quotient ``None``.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    cur = f
    for _ in range(alpha):
        q, failed = theta_divide_once(cur, p)
        if failed:
            return None, True
        if q is None:  # zero in degree below p+1: divisible, with no quotient module
            return None, False
        cur = q
    return cur, False


def d_polynomial(D: Mapping[int, object], alpha: int, r: int, p: int, ring=None) -> HomogPoly:
    """``sum_i D_i x^(i(p-1)+alpha) y^(r-i(p-1)-alpha)``."""
    ring = ring or PrimeField(p)
    terms = {}
    for i in D:
        if D[i]:
            terms[i * (p - 1) + alpha] = D[i]
    return HomogPoly.from_dict(ring, r, terms)


@dataclass(frozen=True)
class CriterionRoutes:
    functional: bool
    division: bool

    @property
    def agree(self) -> bool:
        return self.functional == self.division


class CriterionMismatch(AssertionError):
    pass


def theta_criterion_routes(D: Mapping[int, object], alpha: int, r: int, p: int) -> CriterionRoutes:
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha > p - 1:
        raise ValueError("the default family is nice only for alpha <= p-1")
    for i in D:
        if D[i] and not (0 <= i and i * (p - 1) <= r - 2 * alpha):
            raise ValueError(f"D_{i} lies outside the admissible support 0 <= i(p-1) <= r-2*alpha")
    fam = default_family(p)
    functional = all(reduce_mod(T_functional(fam, D, w), p, p) == 0 for w in range(alpha))
    _, failed = theta_pow_divide(d_polynomial(D, alpha, r, p), alpha, p)
    return CriterionRoutes(functional, not failed)


def theta_criterion(D: Mapping[int, object], alpha: int, r: int, p: int) -> bool:
    """Vanishing of ``T_w(D) mod p`` for ``w < alpha``, cross-checked against theta^alpha division."""
    routes = theta_criterion_routes(D, alpha, r, p)
    if not routes.agree:
        raise CriterionMismatch(f"functional={routes.functional} division={routes.division}")
    return routes.functional


# ---------------------------------------------------------------------------
# function spaces I_h


def nonzero_points(p: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((u, v) for u in range(p) for v in range(p) if (u, v) != (0, 0))


@dataclass(frozen=True)
class FunctionSpaceElement:
    """A function on ``F_p^2 - {0}`` with ``f(lu, lv) = l^h f(u, v)``."""

    p: int
    h: int
    values: Tuple[int, ...]  # ordered as nonzero_points(p)

    def __post_init__(self):
        if len(self.values) != self.p * self.p - 1:
            raise ValueError("need one value per nonzero point")
        object.__setattr__(self, "values", tuple(v % self.p for v in self.values))

    def at(self, u: int, v: int) -> int:
        p = self.p
        u, v = u % p, v % p
        if (u, v) == (0, 0):
            return 0
        return self.values[u * p + v - 1]

    def is_homogeneous(self) -> bool:
        p = self.p
        for lam in range(2, p):
            lh = pow(lam, self.h % (p - 1), p)
            for (u, v) in nonzero_points(p):
                if self.at(lam * u, lam * v) != lh * self.at(u, v) % p:
                    return False
        return True

    @classmethod
    def from_callable(cls, p: int, h: int, fn) -> "FunctionSpaceElement":
        return cls(p, h, tuple(fn(u, v) for (u, v) in nonzero_points(p)))

    @classmethod
    def from_poly(cls, f: HomogPoly) -> "FunctionSpaceElement":
        p = f.ring.p
        return cls.from_callable(p, f.degree, f.evaluate)

    def act(self, g: Matrix) -> "FunctionSpaceElement":
        """``(g f)(x, y) = f((x, y) g)``."""
        p = self.p
        (g1, g2), (g3, g4) = [[int(x) % p for x in row] for row in g]
        return FunctionSpaceElement.from_callable(
            p, self.h, lambda x, y: self.at(g1 * x + g3 * y, g2 * x + g4 * y))

    def __add__(self, other: "FunctionSpaceElement") -> "FunctionSpaceElement":
        return FunctionSpaceElement(self.p, self.h, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c: int) -> "FunctionSpaceElement":
        return FunctionSpaceElement(self.p, self.h, tuple(c * a for a in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)


def club_map(f: FunctionSpaceElement) -> HomogPoly:
    """``sum_{(u,v) != 0} f(u,v) (vX - uY)^d`` with ``d = floor(-h)``, carrying twist h."""
    p = f.p
    d = residue_zero_based(-f.h, p)
    out = [0] * (d + 1)
    binoms = [math.comb(d, j) for j in range(d + 1)]
    for (u, v), val in zip(nonzero_points(p), f.values):
        if not val:
            continue
        for j in range(d + 1):
            out[j] += val * binoms[j] * pow(v, j, p) * pow(-u, d - j, p)
    return HomogPoly(PrimeField(p), tuple(c % p for c in out), f.h)


def line_basis(p: int, h: int) -> List[FunctionSpaceElement]:
    """Basis of I_h: one function supported on each of the p+1 lines through 0."""
    reps = [(1, y) for y in range(p)] + [(0, 1)]
    basis = []
    for (a, b) in reps:
        vals = {}
        for lam in range(1, p):
            vals[(lam * a % p, lam * b % p)] = pow(lam, h % (p - 1), p)
        basis.append(FunctionSpaceElement.from_callable(p, h, lambda u, v: vals.get((u, v), 0)))
    return basis


def club_kernel_dimension(p: int, h: int) -> int:
    """Dimension of the kernel of the club map on I_h, by rank computation over F_p."""
    from .linalg import rank_mod_p

    rows = [list(club_map(f).coeffs) for f in line_basis(p, h)]
    return len(rows) - rank_mod_p(rows, p)


def submodule_polynomials(p: int, h: int) -> List[HomogPoly]:
    """Monomial basis of ``sigma_<h>`` viewed inside I_h."""
    t = residue_one_based(h, p)
    F = PrimeField(p)
    return [HomogPoly.monomial(F, t, j) for j in range(t + 1)]


# ---------------------------------------------------------------------------
# subquotients N_alpha


def reference_generator(p: int, alpha: int, r: int) -> HomogPoly:
    """``theta^alpha x^(p-1) y^(r - alpha(p+1) - p + 1)`` over F_p."""
    F = PrimeField(p)
    rest = r - alpha * (p + 1)
    if rest < p - 1:
        raise ValueError("degree too small for the reference generator")
    return theta_power(F, p, alpha) * HomogPoly.monomial(F, rest, p - 1)


def n_alpha_class(f: HomogPoly, alpha: int, r: int) -> Tuple[bool, Optional[PrimeFieldElement]]:
    """Class of f in N_alpha relative to the reference generator.

    Returns ``(True, c)`` when f is ``c`` times the generator modulo
    ``theta^(alpha+1)`` with ``c != 0``; ``(False, 0)`` when f lies in the next
    filtration step; ``(False, None)`` when the class is not a multiple.
    """
    F = f.ring
    if not isinstance(F, PrimeField):
        raise RingMismatch("n_alpha_class works over a prime field")
    p = F.p
    if f.degree != r:
        raise ValueError("degree mismatch")
    h, failed = theta_pow_divide(f, alpha, p)
    if failed:
        raise NotDivisible(f"f is not divisible by theta^{alpha}")
    if h is None:
        return False, PrimeFieldElement(p, 0)
    rest = r - alpha * (p + 1)
    ref = HomogPoly.monomial(F, rest, p - 1)
    fh = FunctionSpaceElement.from_poly(h)
    fr = FunctionSpaceElement.from_poly(ref)
    if fh.is_zero():
        return False, PrimeFieldElement(p, 0)
    pivot = next(i for i, v in enumerate(fr.values) if v)
    c = fh.values[pivot] * pow(fr.values[pivot], -1, p) % p
    if fr.scale(c).values != fh.values:
        return False, None
    return True, PrimeFieldElement(p, c)
