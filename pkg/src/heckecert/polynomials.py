"""Exact univariate and bivariate polynomials over Q.

:class:`Poly` stores integer numerators plus one common denominator, which
keeps products of binomial polynomials in integer arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


class Poly:
    """Dense polynomial ``sum(num[i] X^i) / den`` with rational coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, coeffs: Iterable = (), den: int = 1):
        coeffs = list(coeffs)
        if any(isinstance(c, Fraction) for c in coeffs):
            fr = [Fraction(c) for c in coeffs]
            d = 1
            for c in fr:
                d = _lcm(d, c.denominator)
            nums = [c.numerator * (d // c.denominator) for c in fr]
            den = den * d
        else:
            nums = [int(c) for c in coeffs]
        self.num, self.den = _normalize(nums, den)

    @classmethod
    def _raw(cls, nums, den) -> "Poly":
        obj = cls.__new__(cls)
        obj.num, obj.den = _normalize(nums, den)
        return obj

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.num) - 1  # -1 for the zero polynomial

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.num):
            return Fraction(self.num[i], self.den)
        return Fraction(0)

    def leading_coefficient(self) -> Fraction:
        if not self.num:
            return Fraction(0)
        return Fraction(self.num[-1], self.den)

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        d = _lcm(self.den, other.den)
        a, b = d // self.den, d // other.den
        n = max(len(self.num), len(other.num))
        out = [0] * n
        for i, c in enumerate(self.num):
            out[i] += c * a
        for i, c in enumerate(other.num):
            out[i] += c * b
        return Poly._raw(out, d)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.num], self.den)

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Poly._raw([c * f.numerator for c in self.num], self.den * f.denominator)
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return Poly()
        out = [0] * (len(self.num) + len(other.num) - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(other.num):
                    out[i + j] += a * b
        return Poly._raw(out, self.den * other.den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num), self.den))

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0
        for c in reversed(self.num):
            acc = acc * x + c
        return Fraction(acc, self.den) if not isinstance(acc, Fraction) else acc / self.den

    def derivative(self) -> "Poly":
        return Poly._raw([i * c for i, c in enumerate(self.num)][1:], self.den)

    def compose_affine(self, a, c) -> "Poly":
        """``P(aX + c)``."""
        lin = Poly([c, a])
        out = Poly()
        for coef in reversed(self.coeffs):
            out = out * lin + coef
        return out

    def __repr__(self):
        if not self.num:
            return "Poly(0)"
        terms = [f"{c}*X^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"


def _normalize(nums, den):
    while nums and nums[-1] == 0:
        nums.pop()
    if den < 0:
        nums = [-c for c in nums]
        den = -den
    if not nums:
        return [], 1
    g = den
    for c in nums:
        g = math.gcd(g, c)
        if g == 1:
            break
    if g > 1:
        nums = [c // g for c in nums]
        den //= g
    return nums, den


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly([x])
    return NotImplemented


@lru_cache(maxsize=4096)
def falling_poly(n: int) -> Poly:
    """``X(X-1)...(X-n+1)`` with integer coefficients."""
    out = [1]
    for k in range(n):
        nxt = [0] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] += c
            nxt[i] -= k * c
        out = nxt
    return Poly._raw(out, 1)


@lru_cache(maxsize=8192)
def binom_poly(n: int, a: int = 1, c: int = 0) -> Poly:
    """``binom(aX + c, n)`` as a polynomial in X; zero for ``n < 0``."""
    if n < 0:
        return Poly()
    base = Poly._raw(list(falling_poly(n).num), math.factorial(n))
    if (a, c) == (1, 0):
        return base
    return base.compose_affine(a, c)


# ---------------------------------------------------------------------------
# bivariate


Monomial = Tuple[int, int]


class BivarPoly:
    """Sparse polynomial in X, Y with Fraction coefficients; keys are (deg_X, deg_Y)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms: Dict[Monomial, Fraction] = {}
        if terms:
            for k, v in terms.items():
                v = Fraction(v)
                if v:
                    self.terms[k] = v

    @classmethod
    def X(cls) -> "BivarPoly":
        return cls({(1, 0): 1})

    @classmethod
    def Y(cls) -> "BivarPoly":
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, c) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def from_poly(cls, p: Poly, var: str) -> "BivarPoly":
        return cls({((i, 0) if var == "X" else (0, i)): c for i, c in enumerate(p.coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        idx = 0 if var == "X" else 1
        return max((k[idx] for k in self.terms), default=-1)

    def __add__(self, other):
        other = _as_bivar(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = _as_bivar(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_bivar(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for (a, b), u in self.terms.items():
            for (c, d), v in other.terms.items():
                k = (a + c, b + d)
                out[k] = out.get(k, 0) + u * v
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = BivarPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _as_bivar(other)
        if other is NotImplemented:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, x, y) -> Fraction:
        return sum((c * Fraction(x) ** i * Fraction(y) ** j for (i, j), c in self.terms.items()), Fraction(0))

    def leading(self) -> Tuple[Monomial, Fraction]:
        """Leading term in graded-lex order (total degree, then X-degree)."""
        k = max(self.terms, key=lambda m: (m[0] + m[1], m[0]))
        return k, self.terms[k]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*X^{i}*Y^{j}" for (i, j), c in self.sorted_terms())


def _as_bivar(x):
    if isinstance(x, BivarPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return BivarPoly.const(x)
    return NotImplemented


def bivar_binom(n: int, var: str, shift: int = 0, other_coeff: int = 0) -> BivarPoly:
    """``binom(V + shift + other_coeff*W, n)`` where V is ``var`` and W the other variable."""
    if n < 0:
        return BivarPoly()
    V = BivarPoly.X() if var == "X" else BivarPoly.Y()
    W = BivarPoly.Y() if var == "X" else BivarPoly.X()
    base = V + shift + W * other_coeff
    out = BivarPoly.const(1)
    for k in range(n):
        out = out * (base - k)
    return out * Fraction(1, math.factorial(n))


class BivarRational:
    """Quotient of two :class:`BivarPoly`; the denominator is scaled so its leading coefficient is 1.

    Equality is decided by cross-multiplication, so two representations of
    the same rational function compare equal without gcd computation.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_bivar(num)
        den = BivarPoly.const(1) if den is None else _as_bivar(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        _, lc = den.leading()
        if lc != 1:
            num = num * (1 / lc)
            den = den * (1 / lc)
        self.num = num
        self.den = den

    def __add__(self, other):
        other = _as_rat(other)
        if self.den == other.den:
            return BivarRational(self.num + other.num, self.den)
        return BivarRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return BivarRational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __mul__(self, other):
        other = _as_rat(other)
        return BivarRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other)
        return BivarRational(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = _as_rat(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):  # equality is semantic, so hashing is not supported
        raise TypeError("BivarRational is unhashable")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def evaluate(self, x, y) -> Fraction:
        return self.num.evaluate(x, y) / self.den.evaluate(x, y)

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


def _as_rat(x) -> BivarRational:
    if isinstance(x, BivarRational):
        return x
    return BivarRational(x)
