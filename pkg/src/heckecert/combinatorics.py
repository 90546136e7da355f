"""Binomials, Stirling numbers, the sums M_{u,n}, nice families and T-functionals."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Tuple

from .numbers import val_p
from .polynomials import Poly, binom_poly


def binom_int(m: int, k: int) -> int:
    """Generalized binomial ``m(m-1)...(m-k+1)/k!``; zero when ``k < 0``.

    >>> binom_int(-1, 5)
    -1
    >>> binom_int(24, 4)
    10626
    """
    if k < 0:
        return 0
    if m >= 0:
        return math.comb(m, k) if k <= m else 0
    # binom(-a, k) = (-1)^k binom(a+k-1, k)
    v = math.comb(k - m - 1, k)
    return -v if k & 1 else v


def falling(x, n: int):
    """Falling factorial ``x(x-1)...(x-n+1)`` for int or Fraction ``x``."""
    out = 1
    for k in range(n):
        out *= x - k
    return out


def binom_value(x, n: int):
    """``binom(x, n)`` for a rational ``x`` (zero when ``n < 0``)."""
    if n < 0:
        return 0
    if isinstance(x, int):
        return binom_int(x, n)
    return Fraction(falling(x, n)) / math.factorial(n)


@lru_cache(maxsize=None)
def _binom_derivative_poly(n: int) -> Poly:
    return binom_poly(n).derivative()


def binom_derivative(x, n: int) -> Fraction:
    """Value at ``x`` of the formal derivative of ``binom(X, n)``."""
    if n <= 0:
        return Fraction(0)
    return _binom_derivative_poly(n)(Fraction(x))


@lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Signed Stirling number of the first kind: coefficient of X^k in the falling factorial X_n."""
    if n < 0 or k < 0:
        raise ValueError("stirling1 needs n, k >= 0")
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind: coefficient of X_k in X^n."""
    if n < 0 or k < 0:
        raise ValueError("stirling2 needs n, k >= 0")
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bigM(u: int, n: int, p: int) -> int:
    """``sum_i binom(u, i(p-1)+n)`` over all integers i.

    >>> bigM(24, 0, 5)
    4196352
    """
    if u < 0:
        raise ValueError("bigM needs u >= 0")
    return _bigM_row(u, p)[n % (p - 1)]


@lru_cache(maxsize=1 << 14)
def _bigM_row(u: int, p: int) -> Tuple[int, ...]:
    # one pass over row u of Pascal's triangle, bucketed by k mod p-1
    q = p - 1
    sums = [0] * q
    c = 1
    for k in range(u + 1):
        sums[k % q] += c
        c = c * (u - k) // (k + 1)
    return tuple(sums)


def residue_one_based(h: int, p: int) -> int:
    """Representative of h mod p-1 in ``{1, ..., p-1}``."""
    return (h - 1) % (p - 1) + 1


def residue_zero_based(h: int, p: int) -> int:
    """Representative of h mod p-1 in ``{0, ..., p-2}``."""
    return h % (p - 1)


# ---------------------------------------------------------------------------
# nice families and coefficient families


@dataclass(frozen=True)
class NiceFamily:
    """A family ``w -> f_w`` of rational polynomials with ``deg f_w = w``.

    ``evaluate`` is an optional integer fast path for ``f_w(i)``.
    """

    name: str
    p: int
    generator: Callable[[int], Poly] = field(compare=False)
    evaluate: Optional[Callable[[int, int], Fraction]] = field(default=None, compare=False)

    def poly(self, w: int) -> Poly:
        return _family_poly(self, w)

    def leading_coefficient(self, w: int) -> Fraction:
        return self.poly(w).leading_coefficient()

    def value(self, w: int, x: int):
        if self.evaluate is not None:
            return self.evaluate(w, x)
        return self.poly(w)(x)

    def check_nice(self, w: int) -> None:
        f = self.poly(w)
        if f.degree != w:
            raise ValueError(f"f_{w} has degree {f.degree}")
        if val_p(f.leading_coefficient(), self.p) != 0:
            raise ValueError(f"leading coefficient of f_{w} is not a {self.p}-adic unit")


@lru_cache(maxsize=None)
def _family_poly(family: NiceFamily, w: int) -> Poly:
    return family.generator(w)


@lru_cache(maxsize=None)
def default_family(p: int) -> NiceFamily:
    """``f_w(X) = binom((p-1)X, w)``; leading coefficient ``(p-1)^w / w!``."""
    return NiceFamily(
        name="binom((p-1)X,w)",
        p=p,
        generator=lambda w: binom_poly(w, p - 1, 0),
        evaluate=lambda w, x: binom_int(x * (p - 1), w),
    )


def binomial_family(p: int) -> NiceFamily:
    """``f_w(X) = binom(X, w)``."""
    return NiceFamily(name="binom(X,w)", p=p, generator=lambda w: binom_poly(w),
                      evaluate=lambda w, x: binom_int(x, w))


def monomial_family(p: int) -> NiceFamily:
    """``f_w(X) = X^w``."""
    return NiceFamily(
        name="X^w",
        p=p,
        generator=lambda w: Poly([0] * w + [1]),
        evaluate=lambda w, x: x**w,
    )


class CoefficientFamily(Mapping[int, Fraction]):
    """Finitely supported map ``i -> D_i``; missing indices read as zero."""

    __slots__ = ("_data",)

    def __init__(self, data: Mapping[int, object] | Iterable[Tuple[int, object]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        self._data: Dict[int, Fraction] = {}
        for i, v in items:
            v = Fraction(v)
            if v:
                self._data[int(i)] = v

    def __getitem__(self, i: int) -> Fraction:
        return self._data.get(i, Fraction(0))

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._data))

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, i) -> bool:
        return i in self._data

    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self._data))

    def bounds(self) -> Tuple[int, int] | None:
        if not self._data:
            return None
        return min(self._data), max(self._data)

    def __add__(self, other: "CoefficientFamily") -> "CoefficientFamily":
        out = dict(self._data)
        for i, v in other._data.items():
            out[i] = out.get(i, 0) + v
        return CoefficientFamily(out)

    def __sub__(self, other: "CoefficientFamily") -> "CoefficientFamily":
        return self + other.scale(-1)

    def scale(self, c) -> "CoefficientFamily":
        return CoefficientFamily({i: c * v for i, v in self._data.items()})

    def __eq__(self, other):
        if isinstance(other, CoefficientFamily):
            return self._data == other._data
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def min_valuation(self, p: int):
        return min((val_p(v, p) for v in self._data.values()), default=math.inf)

    def __repr__(self):
        return "CoefficientFamily({" + ", ".join(f"{i}: {self._data[i]}" for i in self) + "})"


def T_functional(family: NiceFamily, D: Mapping[int, object], w: int) -> Fraction:
    """``sum_i D_i f_w(i)``.

    >>> T_functional(default_family(5), CoefficientFamily({0: 1}), 0)
    Fraction(1, 1)
    """
    total = Fraction(0)
    for i in (D.support() if isinstance(D, CoefficientFamily) else D):
        d = D[i]
        if d:
            total += d * family.value(w, i)
    return Fraction(total)
