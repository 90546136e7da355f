"""Compactly induced representations with finite support and the Hecke operator T.

Basis symbols ``[g]{v}`` are stored as ``[C]{v}`` with ``C = ((p^n, b), (0, 1))``
a canonical coset representative of ``G / KZ``.  Matrices have rational
entries whose denominators are prime to p apart from p-powers; Teichmuller
lifts enter as their integer residues at the working precision.  The central
element ``p`` acts trivially on the coefficient module.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .combinatorics import CoefficientFamily, binom_int
from .numbers import (
    EisensteinElement,
    EisensteinRing,
    PrecisionError,
    ZmodPM,
    _eisenstein_ring,
    reduce_mod,
    teichmuller_residue,
    val_p,
)
from .symmetric import HomogPoly, kz_act, mat_det, mat_mul, theta_power

Matrix = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


class RegimeError(ValueError):
    """Parameters outside the range in which a lemma is asserted."""


def as_matrix(g) -> Matrix:
    (a, b), (c, d) = g
    return ((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)))


IDENTITY: Matrix = as_matrix(((1, 0), (0, 1)))


def mat_inv(g) -> Matrix:
    (a, b), (c, d) = as_matrix(g)
    det = a * d - b * c
    if det == 0:
        raise ZeroDivisionError("singular matrix")
    return ((d / det, -b / det), (-c / det, a / det))


def reduce_mod_power(x: Fraction, n: int, p: int) -> Fraction:
    """Representative of ``x mod p^n Z_p`` with numerator in ``[0, p^(n+k))`` over ``p^k``."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    k = max(0, -val_p(x, p))
    if n + k <= 0:
        return Fraction(0)
    mod = p ** (n + k)
    return Fraction(reduce_mod(x * p**k, mod, p), p**k)


@dataclass(frozen=True, order=True)
class CosetRep:
    """The coset of ``((p^n, b), (0, 1))`` in ``G/KZ``; b is reduced mod p^n."""

    n: int
    b: Fraction

    def matrix(self, p: int) -> Matrix:
        return as_matrix(((Fraction(p) ** self.n, self.b), (0, 1)))

    def __repr__(self):
        return f"CosetRep(n={self.n}, b={self.b})"


ROOT = CosetRep(0, Fraction(0))


def in_KZ_mod_center(g, p: int) -> bool:
    """True when ``g`` lies in ``GL_2(Z_p) * p^Z``."""
    g = as_matrix(g)
    vals = [val_p(x, p) for row in g for x in row]
    m = min(vals)
    dv = val_p(mat_det(g), p)
    return dv == 2 * m


def canonicalize(g, p: int, M: Optional[int] = None) -> Tuple[CosetRep, Matrix, int]:
    """Return ``(C, kappa, e)`` with ``g = p^e * C.matrix * kappa`` and kappa in GL_2(Z_p).

    With a precision M, cosets needing more than M p-adic digits of b raise
    :class:`PrecisionError`; this matters when b involves Teichmuller
    residues, which are only known modulo ``p^M``.
    """
    g = as_matrix(g)
    (a, b), (c, d) = g
    det = a * d - b * c
    if det == 0:
        raise ZeroDivisionError("singular matrix")
    vc, vd = val_p(c, p), val_p(d, p)
    e = min(vc, vd)
    n = val_p(det, p) - 2 * e
    ratio = b / d if vd <= vc else a / c
    if M is not None and n > M:
        raise PrecisionError(f"coset depth {n} exceeds precision {M}")
    rep = CosetRep(n, reduce_mod_power(ratio, n, p))
    kappa = mat_mul(mat_inv(rep.matrix(p)), g)
    scale = Fraction(p) ** (-e)
    kappa = tuple(tuple(x * scale for x in row) for row in kappa)
    if any(val_p(x, p) < 0 for row in kappa for x in row) or val_p(mat_det(kappa), p) != 0:
        raise ArithmeticError("canonicalization produced a non-integral KZ factor")
    return rep, kappa, e


def _is_identity(k: Matrix) -> bool:
    return k == IDENTITY


@dataclass(frozen=True)
class InductionElement:
    """Finite sum of symbols ``[C]{v}``; zero polynomials are dropped."""

    ring: object
    r: int
    p: int
    terms: Tuple[Tuple[CosetRep, HomogPoly], ...] = ()

    def __post_init__(self):
        for _, v in self.terms:
            if v.ring != self.ring or v.degree != self.r:
                raise ValueError("coefficient polynomial does not match ring/degree")

    @property
    def M(self) -> Optional[int]:
        return getattr(self.ring, "M", None)

    @classmethod
    def from_dict(cls, ring, r: int, p: int, d: Mapping[CosetRep, HomogPoly]) -> "InductionElement":
        return cls(ring, r, p, tuple(sorted(((k, v) for k, v in d.items() if not v.is_zero()),
                                            key=lambda kv: kv[0])))

    @classmethod
    def zero(cls, ring, r: int, p: int) -> "InductionElement":
        return cls(ring, r, p, ())

    @classmethod
    def single(cls, v: HomogPoly, p: int, coset: CosetRep = ROOT) -> "InductionElement":
        return cls.from_dict(v.ring, v.degree, p, {coset: v})

    @classmethod
    def symbol(cls, g, v: HomogPoly, p: int) -> "InductionElement":
        """``[g]{v}`` for an arbitrary invertible matrix g."""
        return act(g, cls.single(v, p))

    def as_dict(self) -> Dict[CosetRep, HomogPoly]:
        return dict(self.terms)

    def support(self) -> Tuple[CosetRep, ...]:
        return tuple(k for k, _ in self.terms)

    def __getitem__(self, c: CosetRep) -> HomogPoly:
        return self.as_dict().get(c, HomogPoly.zero(self.ring, self.r))

    def is_zero(self) -> bool:
        return not self.terms

    def _merge(self, other: "InductionElement", sign: int) -> "InductionElement":
        if (self.ring, self.r, self.p) != (other.ring, other.r, other.p):
            raise ValueError("incompatible induction elements")
        d = self.as_dict()
        for k, v in other.terms:
            if sign < 0:
                v = -v
            d[k] = d[k] + v if k in d else v
        return InductionElement.from_dict(self.ring, self.r, self.p, d)

    def __add__(self, other: "InductionElement") -> "InductionElement":
        return self._merge(other, 1)

    def __sub__(self, other: "InductionElement") -> "InductionElement":
        return self._merge(other, -1)

    def __neg__(self) -> "InductionElement":
        return InductionElement(self.ring, self.r, self.p, tuple((k, -v) for k, v in self.terms))

    def scale(self, c) -> "InductionElement":
        """Multiply by a scalar: int, p-integral Fraction, EisensteinElement or raw ring value."""
        if isinstance(c, EisensteinElement):
            c = self.ring.coerce(c.coeffs)
        return InductionElement.from_dict(self.ring, self.r, self.p, {k: v.scale(c) for k, v in self.terms})

    def min_valuation(self):
        """Smallest coefficient valuation over the support; ``None`` for zero (at precision)."""
        vals = [v.min_valuation() for _, v in self.terms]
        vals = [x for x in vals if x is not None]
        return min(vals) if vals else None

    def val_lower_bound(self):
        v = self.min_valuation()
        return Fraction(self.ring.M) if v is None else Fraction(v)

    def __repr__(self):
        return f"InductionElement(support={len(self.terms)}, r={self.r}, ring={self.ring!r})"


def act(g, e: InductionElement) -> InductionElement:
    """Left translation ``g [C]{v} = [C']{kappa v}`` where ``g C = p^z C' kappa``."""
    g = as_matrix(g)
    out: Dict[CosetRep, HomogPoly] = {}
    for C, v in e.terms:
        rep, kappa, _ = canonicalize(mat_mul(g, C.matrix(e.p)), e.p)
        w = v if _is_identity(kappa) else kz_act(kappa, v)
        out[rep] = out[rep] + w if rep in out else w
    return InductionElement.from_dict(e.ring, e.r, e.p, out)


def teich(mu: int, p: int, M: int) -> int:
    return teichmuller_residue(mu, p, M)


def _hecke_term(args):
    C, v, p, M = args
    out: List[Tuple[CosetRep, HomogPoly]] = []
    Cm = C.matrix(p)
    for mu in range(p):
        t = teich(mu, p, M)
        g = mat_mul(Cm, as_matrix(((p, t), (0, 1))))
        rep, kappa, _ = canonicalize(g, p, M)
        w = kz_act(((1, -t), (0, p)), v)
        if not _is_identity(kappa):
            w = kz_act(kappa, w)
        out.append((rep, w))
    g = mat_mul(Cm, as_matrix(((1, 0), (0, p))))
    rep, kappa, _ = canonicalize(g, p, M)
    w = kz_act(((p, 0), (0, 1)), v)
    if not _is_identity(kappa):
        w = kz_act(kappa, w)
    out.append((rep, w))
    return out


def hecke_T(e: InductionElement, jobs: int = 1) -> InductionElement:
    """The operator T applied termwise; per-term work can run in a process pool."""
    M = e.M if e.M is not None else 0
    tasks = [(C, v, e.p, M) for C, v in e.terms]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_hecke_term, tasks))
    else:
        parts = [_hecke_term(t) for t in tasks]
    out: Dict[CosetRep, HomogPoly] = {}
    for part in parts:  # deterministic merge in support order
        for rep, w in part:
            out[rep] = out[rep] + w if rep in out else w
    return InductionElement.from_dict(e.ring, e.r, e.p, out)


def T_minus_a(e: InductionElement, a) -> InductionElement:
    return hecke_T(e) - e.scale(a)


# ---------------------------------------------------------------------------
# lemma verification


@dataclass
class LemmaReport:
    name: str
    params: Dict[str, object]
    passed: bool
    observed_valuation: Optional[Fraction]
    bound: Fraction
    checks: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": {k: str(v) for k, v in self.params.items()},
            "passed": self.passed,
            "observed_valuation": None if self.observed_valuation is None else str(self.observed_valuation),
            "bound": str(self.bound),
            "checks": dict(self.checks),
        }


def theta_shift_poly(ring, p: int, r: int, alpha: int, n: int) -> HomogPoly:
    """``theta^n x^(alpha-n) y^(r-np-alpha)`` expanded as ``sum_j (-1)^j C(n,j) x^(alpha+j(p-1)) y^(...)``."""
    if r < alpha + n * (p - 1):
        raise RegimeError("degree too small for the theta-shifted polynomial")
    return HomogPoly.from_dict(ring, r, {alpha + j * (p - 1): (-1) ** j * math.comb(n, j) for j in range(n + 1)})


def _ring_for(a: EisensteinElement, M: int) -> EisensteinRing:
    return _eisenstein_ring(a.p, a.e, M)


def verify_lemma_Tma(alpha: int, n: int, r: int, p: int, a: EisensteinElement, M: int,
                     nu: int, n_margin: int = 2, r_margin: Optional[int] = None) -> LemmaReport:
    """Check ``(T - a)(1[theta^n x^(alpha-n) y^(r-np-alpha)])`` against its expansion modulo ``p^n``.

    The regime ``alpha < nu``, ``n >= 2 nu + n_margin`` and ``r >= np + alpha + r_margin``
    (``r_margin`` defaults to p) is enforced.
    """
    r_margin = p if r_margin is None else r_margin
    if not 0 <= alpha < nu:
        raise RegimeError("need 0 <= alpha < nu")
    if n < 2 * nu + n_margin:
        raise RegimeError(f"need n >= 2*nu + {n_margin}")
    if r < n * p + alpha + r_margin:
        raise RegimeError(f"need r >= n*p + alpha + {r_margin}")
    if M <= n:
        raise PrecisionError("precision must exceed the asserted valuation n")
    if a.p != p:
        raise ValueError("a lives over a different prime")
    R = _ring_for(a, M)
    a_raw = R.coerce(a.coeffs)

    V = theta_shift_poly(R, p, r, alpha, n)
    start = InductionElement.single(V, p)
    lhs = hecke_T(start) - start.scale(a_raw)

    g_inf = as_matrix(((1, 0), (0, p)))
    first = InductionElement.zero(R, r, p)
    for j in range(n + 1):
        deg = j * (p - 1) + alpha
        mono = HomogPoly.monomial(R, r, deg, (-1) ** j * math.comb(n, j) * p**deg)
        first = first + act(g_inf, InductionElement.single(mono, p))
    th = theta_power(R, p, alpha)
    second_poly = HomogPoly.zero(R, r)
    for j in range(n - alpha + 1):
        rest = r - alpha * (p + 1)
        if j * (p - 1) > rest:
            break
        second_poly = second_poly + th * HomogPoly.monomial(R, rest, j * (p - 1), (-1) ** j * math.comb(n - alpha, j))
    second = InductionElement.single(second_poly, p).scale(a_raw)
    rhs = first - second
    diff = lhs - rhs

    # the g_inf part of T alone, term by term
    g_inf_part = InductionElement.from_dict(
        R, r, p, {c: v for c, v in hecke_T(start).terms if c == CosetRep(-1, Fraction(0))})
    checks = {
        "g_inf_part_matches_first_sum": g_inf_part.terms == first.terms,
        "a_part_matches_theta_alpha_sum": second_poly.coeffs == V.coeffs,
    }
    v = diff.min_valuation()
    passed = (v is None or v >= n) and all(checks.values())
    return LemmaReport(
        name="lemma_Tma",
        params={"p": p, "nu": nu, "alpha": alpha, "n": n, "r": r, "M": M, "v(a)": a.valuation()},
        passed=passed,
        observed_valuation=None if v is None else Fraction(v),
        bound=Fraction(n),
        checks=checks,
    )


@dataclass
class LedgerEntry:
    tag: str
    element: Optional[InductionElement]
    scale_exponent: int  # the stored element equals p^scale_exponent times the true term
    bound: Fraction
    observed: Optional[Fraction]

    @property
    def holds(self) -> bool:
        return self.observed is None or self.observed >= self.bound

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "support": None if self.element is None else len(self.element.terms),
            "bound": str(self.bound),
            "observed": None if self.observed is None else str(self.observed),
            "holds": self.holds,
        }


@dataclass
class ErrorLedger:
    """Error terms of an ``Img(T - a) + O(p^m)`` statement, each with a valuation bound."""

    entries: List[LedgerEntry] = field(default_factory=list)

    def add(self, tag: str, element: Optional[InductionElement], bound, scale_exponent: int = 0) -> LedgerEntry:
        obs = None
        if element is not None:
            v = element.min_valuation()
            obs = None if v is None else Fraction(v) - scale_exponent
        entry = LedgerEntry(tag, element, scale_exponent, Fraction(bound), obs)
        self.entries.append(entry)
        return entry

    def __getitem__(self, tag: str) -> LedgerEntry:
        for e in self.entries:
            if e.tag == tag:
                return e
        raise KeyError(tag)

    def __len__(self):
        return len(self.entries)

    @property
    def holds(self) -> bool:
        return all(e.holds for e in self.entries)

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries], "holds": self.holds}


def v_C(C: Mapping[int, object], p: int, lo: int, hi: int):
    return min((val_p(Fraction(C[l]), p) + l for l in range(lo, hi + 1) if C.get(l, 0)), default=math.inf)


def image_target(beta: int, gamma: int, C: Mapping[int, object], r: int, p: int, ring,
                 indices: Optional[Iterable[int]] = None) -> HomogPoly:
    """``sum_i (sum_l C_l binom(r-beta+l, i(p-1)+l)) x^(i(p-1)+beta) y^(r-i(p-1)-beta)``.

    ``indices`` restricts the sum to the given values of ``i``.
    """
    terms: Dict[int, Fraction] = {}
    top = (r - beta) // (p - 1)
    for i in (range(top + 1) if indices is None else sorted(set(indices))):
        if not 0 <= i <= top:
            continue
        tot = Fraction(0)
        for l in range(beta - gamma, beta + 1):
            c = C.get(l, 0)
            if c:
                tot += Fraction(c) * binom_int(r - beta + l, i * (p - 1) + l)
        if tot:
            terms[i * (p - 1) + beta] = tot
    return HomogPoly.from_dict(ring, r, terms)


def build_image_element(beta: int, gamma: int, C: Mapping[int, object], r: int, p: int,
                        a: EisensteinElement, M: int, n: Optional[int] = None,
                        nu: Optional[int] = None) -> Tuple[InductionElement, ErrorLedger]:
    """The element ``E`` of ``Img(T - a) + O(a p^(-beta+v_C) + p^(p-1))`` and its error ledger.

    The preimage ``P = (1/(p-1)) sum_alpha C_(beta-alpha) p^(-alpha) sum_(mu != 0)
    [mu]^(alpha-beta) g_mu [theta^n x^(alpha-n) y^(r-np-alpha)]`` is scaled by
    ``p^gamma`` so that it is integral; the ledger records ``(T-a)(p^gamma P)``
    decomposed as ``p^gamma (E + explicit) + residual``.
    """
    C = {int(k): Fraction(v) for k, v in dict(C).items() if v}
    if not 0 <= beta <= gamma:
        raise RegimeError("need 0 <= beta <= gamma")
    if any(l < beta - gamma or l > beta for l in C):
        raise RegimeError("C must be supported on [beta-gamma, beta]")
    if any(val_p(c, p) < 0 for c in C.values()):
        raise RegimeError("C must be p-integral")
    va = a.valuation()
    if nu is None:
        nu = math.floor(va) + 1 if va is not None else gamma + 1
    if gamma >= nu:
        raise RegimeError("need gamma < nu")
    if n is None:
        n = gamma + p - 1
    if r < n * p + gamma:
        raise RegimeError("need r >= n*p + gamma")
    residual_bound = gamma + min(p - 1, n - gamma)
    if M <= residual_bound:
        raise PrecisionError(f"precision {M} cannot resolve valuation {residual_bound}")

    R = _ring_for(a, M)
    E = InductionElement.single(image_target(beta, gamma, C, r, p, R), p)
    ledger = ErrorLedger()
    if not C:
        return E, ledger

    a_raw = R.coerce(a.coeffs)
    inv_pm1 = pow(p - 1, -1, R.modulus)
    pre: Dict[CosetRep, HomogPoly] = {}
    explicit = InductionElement.zero(R, r, p)
    for alpha in range(gamma + 1):
        c = C.get(beta - alpha)
        if not c:
            continue
        V = theta_shift_poly(R, p, r, alpha, n)
        for mu in range(1, p):
            t = teich(mu, p, M)
            coef = Fraction(c) * p ** (gamma - alpha) * Fraction(pow(t, (alpha - beta) % (p - 1), R.modulus)) * inv_pm1
            piece = act(((p, t), (0, 1)), InductionElement.single(V.scale(coef), p))
            for k, v in piece.terms:
                pre[k] = pre[k] + v if k in pre else v
            explicit = explicit - piece.scale(a_raw)
    P = InductionElement.from_dict(R, r, p, pre)
    image = T_minus_a(P, a_raw)
    scaled_E = E.scale(p**gamma)
    residual = image - scaled_E - explicit

    vc = v_C(C, p, beta - gamma, beta)
    ledger.add("preimage", P, -gamma, scale_exponent=gamma)
    ledger.add("explicit", explicit, (va if va is not None else 0) - beta + vc, scale_exponent=gamma)
    ledger.add("O(p^(p-1))", residual, residual_bound - gamma, scale_exponent=gamma)
    return E, ledger
