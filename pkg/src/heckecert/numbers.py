"""Exact arithmetic kernel.

Rationals are plain :class:`fractions.Fraction` values; this module adds
exact p-adic valuations, the truncated rings ``Z/p^M`` and
``(Z/p^M)[pi]/(pi^e - p)``, prime fields and Teichmuller lifts.

The ring classes (:class:`RationalField`, :class:`PrimeField`,
:class:`ZmodPM`, :class:`EisensteinRing`) operate on *raw* values (Fraction,
int, int, tuple of ints) so that polynomial code can run tight loops without
wrapper objects.  :class:`TruncatedPadic`, :class:`EisensteinElement` and
:class:`PrimeFieldElement` are the user-facing immutable values built on top.
"""
from __future__ import annotations

import contextlib
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

INF = math.inf

Rational = Union[int, Fraction]


@contextlib.contextmanager
def _unlimited_digits():
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def exact_str(x: Rational) -> str:
    """``"a"`` or ``"a/b"`` for any size of rational (no int-to-str digit limit)."""
    x = Fraction(x)
    with _unlimited_digits():
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_exact(text: str) -> Fraction:
    """Inverse of :func:`exact_str`; rejects anything but ``int`` or ``int/int``."""
    if not isinstance(text, str):
        raise TypeError("exact numbers are serialized as strings")
    num, sep, den = text.partition("/")
    with _unlimited_digits():
        try:
            return Fraction(int(num), int(den)) if sep else Fraction(int(num))
        except ValueError:
            raise ValueError(f"not an exact rational: {text[:40]!r}") from None


class PrecisionError(ArithmeticError):
    """Raised when a computation would need more p-adic precision than is available."""


class NonUnitDivision(ZeroDivisionError):
    """Division by an element that is not a unit of the truncated ring."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def val_int(n: int, p: int) -> float | int:
    """Exponent of ``p`` in the integer ``n`` (``inf`` for zero)."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    # square-and-strip keeps this fast on multi-thousand-bit binomials
    while n % p == 0:
        pk, k = p, 1
        while n % (pk * pk) == 0:
            pk *= pk
            k *= 2
        n //= pk
        v += k
    return v


def val_p(x: Rational, p: int) -> float | int:
    """Exact p-adic valuation of a rational number; ``math.inf`` for zero.

    >>> val_p(Fraction(50, 3), 5)
    2
    >>> val_p(Fraction(-20, 4), 5)
    1
    """
    x = Fraction(x)
    if x == 0:
        return INF
    return val_int(x.numerator, p) - val_int(x.denominator, p)


def unit_part(x: Fraction, p: int) -> Fraction:
    """``x / p^val_p(x)`` for nonzero ``x``."""
    v = val_p(x, p)
    return Fraction(x) / Fraction(p) ** v


def reduce_mod(x: Rational, modulus: int, p: int) -> int:
    """Residue of a p-integral rational modulo ``modulus`` (a power of ``p``)."""
    x = Fraction(x)
    den = x.denominator
    if den % p == 0:
        raise NonUnitDivision(f"{x} is not {p}-integral")
    return x.numerator * pow(den, -1, modulus) % modulus


# ---------------------------------------------------------------------------
# rings operating on raw values


class RationalField:
    """The field Q with Fraction values."""

    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    mul = staticmethod(lambda a, b: a * b)
    neg = staticmethod(lambda a: -a)

    def is_zero(self, a) -> bool:
        return a == 0

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class PrimeField:
    """F_p on integer residues in ``[0, p)``."""

    def __init__(self, p: int):
        _check_prime(p)
        self.p = p
        self.zero = 0
        self.one = 1 % p

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    def coerce(self, x) -> int:
        if isinstance(x, PrimeFieldElement):
            if x.p != self.p:
                raise TypeError("prime mismatch")
            return x.residue
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return reduce_mod(x, self.p, self.p)
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in a prime field")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


class ZmodPM:
    """``Z/p^M`` on integer residues; models Z_p at absolute precision M."""

    def __init__(self, p: int, M: int):
        _check_prime(p)
        if M < 1:
            raise ValueError("precision must be >= 1")
        self.p = p
        self.M = M
        self.modulus = p**M
        self.zero = 0
        self.one = 1 % self.modulus

    @property
    def name(self) -> str:
        return f"Z/{self.p}^{self.M}"

    def coerce(self, x) -> int:
        if isinstance(x, TruncatedPadic):
            if x.p != self.p or x.M < self.M:
                raise TypeError("ring mismatch")
            return x.residue % self.modulus
        if isinstance(x, int):
            return x % self.modulus
        if isinstance(x, Fraction):
            return reduce_mod(x, self.modulus, self.p)
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def is_zero(self, a) -> bool:
        return a % self.modulus == 0

    def valuation(self, a):
        """Valuation of a residue, or ``None`` when it is zero (meaning ``>= M``)."""
        a %= self.modulus
        if a == 0:
            return None
        return val_int(a, self.p)

    def val_lower_bound(self, a):
        v = self.valuation(a)
        return self.M if v is None else v

    def __eq__(self, other):
        return isinstance(other, ZmodPM) and (other.p, other.M) == (self.p, self.M)

    def __hash__(self):
        return hash(("Zmod", self.p, self.M))

    def __repr__(self):
        return self.name


class EisensteinRing:
    """``(Z/p^M)[pi]/(pi^e - p)``; values are e-tuples of residues mod p^M."""

    def __init__(self, p: int, e: int, M: int):
        _check_prime(p)
        if e < 1:
            raise ValueError("ramification index must be >= 1")
        if M < 1:
            raise ValueError("precision must be >= 1")
        self.p = p
        self.e = e
        self.M = M
        self.modulus = p**M
        self.zero = (0,) * e
        self.one = (1 % self.modulus,) + (0,) * (e - 1)

    @property
    def name(self) -> str:
        return f"Z/{self.p}^{self.M}[pi]/(pi^{self.e}-{self.p})"

    def coerce(self, x):
        if isinstance(x, EisensteinElement):
            if (x.p, x.e) != (self.p, self.e) or x.M < self.M:
                raise TypeError("ring mismatch")
            return tuple(c % self.modulus for c in x.coeffs)
        if isinstance(x, tuple) and len(x) == self.e:
            return tuple(c % self.modulus for c in x)
        if isinstance(x, TruncatedPadic):
            if x.p != self.p or x.M < self.M:
                raise TypeError("ring mismatch")
            x = x.residue
        if isinstance(x, Fraction):
            x = reduce_mod(x, self.modulus, self.p)
        if isinstance(x, int):
            return (x % self.modulus,) + (0,) * (self.e - 1)
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def add(self, a, b):
        m = self.modulus
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub(self, a, b):
        m = self.modulus
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg(self, a):
        m = self.modulus
        return tuple(-x % m for x in a)

    def mul(self, a, b):
        e, m, p = self.e, self.modulus, self.p
        if e == 1:
            return (a[0] * b[0] % m,)
        acc = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        acc[i + j] += x * y
        # pi^e -> p before reducing coefficients
        out = acc[:e]
        for k in range(e, 2 * e - 1):
            out[k - e] += p * acc[k]
        return tuple(c % m for c in out)

    def scale(self, a, n: int):
        m = self.modulus
        return tuple(x * n % m for x in a)

    def pi_power(self, j: int):
        """``pi^j`` for ``j >= 0``."""
        q, rem = divmod(j, self.e)
        out = [0] * self.e
        out[rem] = pow(self.p, q, self.modulus)
        return tuple(out)

    def is_zero(self, a) -> bool:
        return all(x % self.modulus == 0 for x in a)

    def valuation(self, a):
        """Valuation in ``(1/e)Z`` as a Fraction, or ``None`` for zero (``>= M``)."""
        best = None
        for i, c in enumerate(a):
            c %= self.modulus
            if c:
                v = Fraction(val_int(c, self.p) * self.e + i, self.e)
                if best is None or v < best:
                    best = v
        return best

    def val_lower_bound(self, a):
        v = self.valuation(a)
        return Fraction(self.M) if v is None else v

    def __eq__(self, other):
        return isinstance(other, EisensteinRing) and (other.p, other.e, other.M) == (
            self.p,
            self.e,
            self.M,
        )

    def __hash__(self):
        return hash(("Eis", self.p, self.e, self.M))

    def __repr__(self):
        return self.name


# ---------------------------------------------------------------------------
# user-facing values


@dataclass(frozen=True)
class PrimeFieldElement:
    p: int
    residue: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p)

    def _other(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise TypeError("prime mismatch")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.p, self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.p, self.residue - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.p, o - self.residue)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else PrimeFieldElement(self.p, self.residue * o)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(self.p, -self.residue)

    def inverse(self) -> "PrimeFieldElement":
        if self.residue == 0:
            raise ZeroDivisionError("inverse of zero in a prime field")
        return PrimeFieldElement(self.p, pow(self.residue, -1, self.p))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * PrimeFieldElement(self.p, o).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return PrimeFieldElement(self.p, pow(self.residue, n, self.p))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue


@dataclass(frozen=True)
class TruncatedPadic:
    """An element of ``Z/p^M`` read as a p-adic integer known to precision M."""

    p: int
    M: int
    residue: int

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError("TruncatedPadic needs an odd prime")
        if self.M < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "residue", self.residue % self.p**self.M)

    @classmethod
    def from_rational(cls, x: Rational, p: int, M: int) -> "TruncatedPadic":
        return cls(p, M, reduce_mod(x, p**M, p))

    def _coerce(self, other):
        if isinstance(other, TruncatedPadic):
            if other.p != self.p:
                raise TypeError("prime mismatch")
            return other.residue, min(self.M, other.M)
        if isinstance(other, int):
            return other, self.M
        if isinstance(other, Fraction):
            return reduce_mod(other, self.p**self.M, self.p), self.M
        return NotImplemented, None

    def __add__(self, other):
        o, M = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, M, self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o, M = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, M, self.residue - o)

    def __rsub__(self, other):
        o, M = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, M, o - self.residue)

    def __mul__(self, other):
        o, M = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncatedPadic(self.p, M, self.residue * o)

    __rmul__ = __mul__

    def __neg__(self):
        return TruncatedPadic(self.p, self.M, -self.residue)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return TruncatedPadic(self.p, self.M, pow(self.residue, n, self.p**self.M))

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self) -> "TruncatedPadic":
        if not self.is_unit():
            raise NonUnitDivision(f"{self} is not a unit")
        return TruncatedPadic(self.p, self.M, pow(self.residue, -1, self.p**self.M))

    def __truediv__(self, other):
        o, M = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * TruncatedPadic(self.p, M, o).inverse()

    def valuation(self):
        """Exact valuation, or ``None`` when the residue is zero (value is ``O(p^M)``)."""
        if self.residue == 0:
            return None
        return val_int(self.residue, self.p)

    def reduce(self, M: int) -> "TruncatedPadic":
        if M > self.M:
            raise PrecisionError(f"cannot raise precision from {self.M} to {M}")
        return TruncatedPadic(self.p, M, self.residue)

    def lift(self) -> int:
        return self.residue

    def __repr__(self):
        return f"{self.residue} + O({self.p}^{self.M})"


@dataclass(frozen=True)
class EisensteinElement:
    """``sum c_i pi^i`` with ``pi^e = p`` and coefficients mod ``p^M``."""

    p: int
    e: int
    M: int
    coeffs: tuple

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("ramification index must be >= 1")
        if len(self.coeffs) != self.e:
            raise ValueError("need exactly e coefficients")
        m = self.p**self.M
        object.__setattr__(self, "coeffs", tuple(c % m for c in self.coeffs))

    @property
    def ring(self) -> EisensteinRing:
        return _eisenstein_ring(self.p, self.e, self.M)

    def _coerce(self, other):
        if isinstance(other, EisensteinElement):
            if (other.p, other.e) != (self.p, self.e):
                raise TypeError("ring mismatch")
            M = min(self.M, other.M)
            return _eisenstein_ring(self.p, self.e, M).coerce(other.coeffs), M
        if isinstance(other, (int, Fraction)):
            return self.ring.coerce(other), self.M
        return NotImplemented, None

    def _wrap(self, raw, M):
        return EisensteinElement(self.p, self.e, M, raw)

    def __add__(self, other):
        o, M = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(_eisenstein_ring(self.p, self.e, M).add(self.coeffs, o), M)

    __radd__ = __add__

    def __sub__(self, other):
        o, M = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(_eisenstein_ring(self.p, self.e, M).sub(self.coeffs, o), M)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o, M = self._coerce(other)
        if o is NotImplemented:
            return o
        R = _eisenstein_ring(self.p, self.e, M)
        return self._wrap(R.mul(R.coerce(self.coeffs), o), M)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.ring.neg(self.coeffs), self.M)

    def __pow__(self, n: int):
        if n < 0:
            raise NonUnitDivision("negative powers are not supported")
        R = self.ring
        out, base = R.one, self.coeffs
        while n:
            if n & 1:
                out = R.mul(out, base)
            base = R.mul(base, base)
            n >>= 1
        return self._wrap(out, self.M)

    def valuation(self):
        """Valuation in ``(1/e)Z``; ``None`` when every coefficient vanishes."""
        return self.ring.valuation(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*pi^{i}" for i, c in enumerate(self.coeffs) if c]
        return (" + ".join(terms) or "0") + f" + O({self.p}^{self.M})"


@lru_cache(maxsize=None)
def _eisenstein_ring(p, e, M) -> EisensteinRing:
    return EisensteinRing(p, e, M)


def eisenstein_make_a(p: int, e: int, M: int, j: int, unit: int = 1) -> EisensteinElement:
    """``unit * pi^j`` in the Eisenstein model; its valuation is ``j/e``."""
    if e < 1:
        raise ValueError("ramification index must be >= 1")
    if j < 0:
        raise ValueError("slope numerator must be non-negative")
    if unit % p == 0:
        raise ValueError("unit must be prime to p")
    R = _eisenstein_ring(p, e, M)
    raw = R.mul(R.pi_power(j), R.coerce(unit))
    return EisensteinElement(p, e, M, raw)


@lru_cache(maxsize=None)
def teichmuller_residue(mu: int, p: int, M: int) -> int:
    """Integer representative in ``[0, p^M)`` of the Teichmuller lift of ``mu mod p``."""
    m = p**M
    x = mu % p
    if x == 0:
        return 0
    # x -> x^p is a contraction towards [mu]; M rounds always suffice
    for _ in range(M + 1):
        y = pow(x, p, m)
        if y == x:
            return x
        x = y
    raise AssertionError("Teichmuller iteration did not converge")  # pragma: no cover


def teichmuller(mu: PrimeFieldElement | int, M: int, p: int | None = None) -> TruncatedPadic:
    """Teichmuller lift ``[mu]`` at precision ``M``.

    >>> teichmuller(PrimeFieldElement(5, 2), 3)
    57 + O(5^3)
    """
    if M < 1:
        raise ValueError("precision must be >= 1")
    if isinstance(mu, PrimeFieldElement):
        p, r = mu.p, mu.residue
    else:
        if p is None:
            raise TypeError("prime required for an integer argument")
        r = mu
    return TruncatedPadic(p, M, teichmuller_residue(r, p, M))
