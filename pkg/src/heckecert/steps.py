"""Witness constants for the four steps and self-contained certificates.

Each step picks constants ``C_-1, ..., C_alpha``, forms

    D_i = [i=0] C_-1 + [0 < i(p-1) < r-2 alpha] sum_l C_l binom(r-alpha+l, i(p-1)+l)

and checks the valuation conditions on ``T_w(D) = sum_i D_i binom(i(p-1), w)``
that feed the smoothing lemma and the final dichotomy.  A certificate stores the
parameters, the constants and the ``T_w`` values; :func:`recheck_certificate`
recomputes every stored quantity from the parameters and constants alone.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .combinatorics import CoefficientFamily, NiceFamily, T_functional, default_family, falling
from .hecke import RegimeError, image_target
from .linalg import det_mod_p, mat_mul, mat_vec, solve_fraction, solve_mod_p
from .matrices import (DegeneratePoint, build_A, build_B, build_N, build_Q_bar, build_S, mc_vector,
                       verify_claim_one, verify_claim_two, verify_det_Q, step4_r)
from .numbers import RationalField, exact_str, parse_exact, val_p
from .report import canonical

CERTIFICATE_SCHEMA = 1


class FalsificationAlarm(AssertionError):
    """A construction that must succeed on theorem-compliant inputs did not."""


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class StepParams:
    step: int
    p: int
    nu: int
    s: int
    r: int
    alpha: int
    beta: Optional[int] = None
    m: Optional[int] = None
    iota: Optional[int] = None
    a_e: int = 2
    a_j: int = 0
    precision: int = 0
    allow_outside: bool = False

    @property
    def k(self) -> int:
        return self.r + 2

    @property
    def v_a(self) -> Fraction:
        return Fraction(self.a_j, self.a_e)

    @property
    def rows(self) -> int:
        return 2 * self.nu - self.alpha

    def to_dict(self) -> dict:
        return {
            "step": self.step, "p": self.p, "k": self.k, "r": self.r, "s": self.s, "nu": self.nu,
            "alpha": self.alpha, "beta": self.beta, "m": self.m, "iota": self.iota,
            "a_model": {"e": self.a_e, "j": self.a_j, "v_a": str(self.v_a)},
            "precision": self.precision, "allow_outside": self.allow_outside,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "StepParams":
        params = cls(
            step=int(d["step"]), p=int(d["p"]), nu=int(d["nu"]), s=int(d["s"]), r=int(d["r"]),
            alpha=int(d["alpha"]), beta=_opt_int(d.get("beta")), m=_opt_int(d.get("m")),
            iota=_opt_int(d.get("iota")), a_e=int(d["a_model"]["e"]), a_j=int(d["a_model"]["j"]),
            precision=int(d["precision"]), allow_outside=bool(d.get("allow_outside", False)),
        )
        if canonical(params.to_dict()) != canonical(dict(d)):
            raise ValueError("parameter block is not in canonical form")
        return params


def _opt_int(x):
    return None if x is None else int(x)


def make_params(step: int, p: int, nu: int, s: int, alpha: int = 0, beta: Optional[int] = None,
                m: Optional[int] = None, iota: Optional[int] = None, r: Optional[int] = None,
                a_e: int = 2, a_j: Optional[int] = None, precision: Optional[int] = None,
                allow_outside: bool = False) -> StepParams:
    """Fill in the default weight for ``step`` and validate the regime.

    Defaults: step 1 uses ``r = s + p(p-1)``; step 2 ``r = s + (alpha+1)(p-1)``;
    step 3 ``r = s + iota p^m + c p^(m+1)`` and step 4 ``r = s + beta(p-1) + iota p^m
    + c p^(m+1)``, with ``c`` chosen so that ``r = s mod p-1``.  The slope model is
    ``a = pi^j`` in a ramified extension of degree ``e``, with ``j = e nu - 1``.
    """
    if step in (3, 4):
        m = 1 if m is None else m
        iota = 1 if iota is None else iota
    if step == 4 and beta is None:
        beta = 1
    if r is None:
        if step == 1:
            r = s + p * (p - 1)
        elif step == 2:
            r = s + (alpha + 1) * (p - 1)
        elif step == 3:
            r = step4_r(s, 0, m, iota, p)
        elif step == 4:
            r = step4_r(s, beta, m, iota, p)
        else:
            raise RegimeError(f"unknown step {step}")
    if step in (3, 4) and iota % p:
        iota %= p
    # the flag only matters outside the residue range; normalising it keeps certificates canonical
    allow_outside = bool(allow_outside) and s > p - 1
    a_j = a_e * nu - 1 if a_j is None else a_j
    if precision is None:
        precision = _max_bound(step, p, s, r, alpha, m) + 4
    params = StepParams(step, p, nu, s, r, alpha, beta, m, iota, a_e, a_j, precision, allow_outside)
    check_regime(params)
    return params


def _max_bound(step, p, s, r, alpha, m) -> int:
    if step == 1:
        return val_p(s - r, p) + 2
    if step == 2:
        return 2
    return m + 2


def check_regime(params: StepParams) -> None:
    P = params
    p, s, r, nu, alpha = P.p, P.s, P.r, P.nu, P.alpha
    if not 1 <= nu <= (p - 1) // 2:
        raise RegimeError("need 1 <= nu <= (p-1)/2")
    if s < 2 * nu:
        raise RegimeError("need s >= 2 nu")
    if s > p - 1 and not P.allow_outside:
        raise RegimeError("s must be the residue of r in [1, p-1]")
    if P.allow_outside and s <= p - 1:
        raise RegimeError("allow_outside is set only when s > p-1")
    unused = {1: ("beta", "m", "iota"), 2: ("beta", "m", "iota"), 3: ("beta",), 4: ()}.get(P.step, ())
    if any(getattr(P, name) is not None for name in unused):
        raise RegimeError(f"step {P.step} takes no {'/'.join(unused)}")
    if P.step in (3, 4) and (P.iota is None or not 1 <= P.iota <= p - 1):
        raise RegimeError("iota must be a residue in [1, p-1]")
    if r <= s or (r - s) % (p - 1):
        raise RegimeError("need r > s and r = s mod p-1")
    if P.a_e < 1 or P.a_j % P.a_e == 0 or not nu - 1 < P.v_a < nu:
        raise RegimeError("need nu-1 < v(a) < nu with v(a) not an integer")
    if P.precision <= _max_bound(P.step, p, s, r, alpha, P.m):
        raise RegimeError("precision must exceed every checked bound")
    if P.step == 1:
        if alpha != 0:
            raise RegimeError("step 1 needs alpha = 0")
        return
    if not 0 < alpha < nu - 1:
        raise RegimeError("need 0 < alpha < nu-1")
    if P.step == 2:
        if val_p(falling(s - r, alpha + 1), p) != 0:
            raise RegimeError("step 2 needs val((s-r)_(alpha+1)) = 0")
    elif P.step == 3:
        if P.m is None or val_p(s - r, p) != P.m or (r - s) // p**P.m % p != P.iota % p:
            raise RegimeError("step 3 needs r = s + iota p^m + O(p^(m+1))")
    elif P.step == 4:
        if P.beta is None or not 1 <= P.beta <= alpha:
            raise RegimeError("step 4 needs 1 <= beta <= alpha")
        if val_p(falling(s - r - 1, alpha), p) <= 0:
            raise RegimeError("step 4 needs val((s-r-1)_alpha) > 0")
        if P.m is None or P.iota is None or P.m < 1 or P.iota % p == 0:
            raise RegimeError("step 4 needs m >= 1 and iota a unit")
        if (r - s - P.beta * (p - 1) - P.iota * p**P.m) % p ** (P.m + 1):
            raise RegimeError("step 4 needs r = s + beta(p-1) + iota p^m + O(p^(m+1))")
    else:
        raise RegimeError(f"unknown step {P.step}")


# ---------------------------------------------------------------------------
# D and T


def d_family(constants: Mapping[int, Fraction], r: int, alpha: int, p: int) -> CoefficientFamily:
    """The coefficients ``D_i`` built from ``C_-1, ..., C_alpha``."""
    D: Dict[int, Fraction] = {0: Fraction(constants.get(-1, 0))}
    for l in range(alpha + 1):
        C = Fraction(constants.get(l, 0))
        if not C:
            continue
        n = r - alpha + l
        c = 1
        for k in range(n + 1):
            if k > l and (k - l) % (p - 1) == 0 and k - l < r - 2 * alpha:
                i = (k - l) // (p - 1)
                D[i] = D.get(i, 0) + C * c
            c = c * (n - k) // (k + 1)
    return CoefficientFamily(D)


def t_values(D: CoefficientFamily, count: int, family: NiceFamily) -> List[Fraction]:
    return [T_functional(family, D, w) for w in range(count)]


def t_values_via_A(constants: Mapping[int, Fraction], params: StepParams) -> List[Fraction]:
    """``T_w`` through the matrix ``A``, with the range cut of ``D`` applied by hand."""
    P = params
    p, r, alpha = P.p, P.r, P.alpha
    A = build_A(r, P.s, alpha, P.nu, p)
    x = [Fraction(constants.get(0, 0))] + [Fraction(constants.get(j, 0)) / p for j in range(1, alpha + 1)]
    T = [p * t for t in mat_vec(A, x)]
    T[0] += Fraction(constants.get(-1, 0))
    # A sums every i > 0; D drops the indices with r-2 alpha <= i(p-1)
    i = max(1, -(-(r - 2 * alpha) // (p - 1)))
    while i * (p - 1) <= r - alpha:
        for l in range(alpha + 1):
            corr = Fraction(constants.get(l, 0)) * math.comb(r - alpha + l, i * (p - 1) + l)
            for w in range(len(T)):
                T[w] -= corr * math.comb(i * (p - 1), w)
        i += 1
    return T


def leading_coefficient_factor(family: NiceFamily, alpha: int) -> Fraction:
    """``c_alpha alpha!``; equals ``(p-1)^alpha`` for the default family."""
    return family.leading_coefficient(alpha) * math.factorial(alpha)


def smoothing_constants(D: CoefficientFamily, family: NiceFamily, alpha: int,
                        v=None) -> CoefficientFamily:
    """``Delta_j = (-1)^(alpha+j-1) binom(alpha, j-1) T_alpha(D) / (c_alpha alpha!)``.

    Checks ``v <= val T_alpha(Delta) <= val Delta_j`` with ``v`` defaulting to
    ``val T_alpha(D)``.
    """
    if alpha < 0:
        raise ValueError("need alpha >= 0")
    family.check_nice(alpha)
    p = family.p
    T_alpha = T_functional(family, D, alpha)
    scale = T_alpha / leading_coefficient_factor(family, alpha)
    delta = CoefficientFamily({j: (-1) ** (alpha + j - 1) * math.comb(alpha, j - 1) * scale
                               for j in range(1, alpha + 2)})
    T_delta = T_functional(family, delta, alpha)
    v = val_p(T_alpha, p) if v is None else v
    if T_delta != T_alpha:
        raise AssertionError("smoothing changed T_alpha")
    if not v <= val_p(T_delta, p) <= delta.min_valuation(p):
        raise AssertionError("smoothing valuations out of order")
    return delta


# ---------------------------------------------------------------------------
# constants per step


def _step23_constants(P: StepParams) -> Dict[int, Fraction]:
    X, Y = P.r - P.alpha, P.s - P.alpha
    den = falling(Y, P.alpha)
    if den % P.p == 0:
        raise DegeneratePoint("(s-alpha)_alpha vanishes mod p")
    c = mc_vector(P.alpha)
    out = {-1: Fraction(0), 0: Fraction(1)}
    for j in range(1, P.alpha + 1):
        out[j] = c[j].evaluate(X, Y) * P.p / den
    return out


def _unit_minor(rows: Sequence[Sequence[Fraction]], size: int, p: int) -> Tuple[int, ...]:
    ncols = len(rows[0])
    for J in itertools.combinations(range(ncols), size):
        if det_mod_p([[row[j] for j in J] for row in rows], p):
            return J
    raise FalsificationAlarm("no unit minor in the S rows")


def _step4_witness(P: StepParams) -> Tuple[Dict[int, Fraction], dict]:
    p, s, alpha, beta = P.p, P.s, P.alpha, P.beta
    eta = P.iota * p**P.m
    B = build_B(alpha, p)
    BS = mat_mul(B, build_S(s, beta, alpha, p))
    BN = mat_mul(B, build_N(s, beta, alpha, p))
    Q = build_Q_bar(p, s, alpha, beta)
    z = solve_mod_p(Q, [1] + [0] * alpha, p)
    if z is None or z[0] == 0:
        raise FalsificationAlarm(f"Q_bar z = e0 has no solution with z0 != 0 at {P}")
    top = BS[1:beta + 1]
    J = _unit_minor(top, beta, p)
    F = [j for j in range(alpha + 1) if j not in J]
    minor = [[row[j] for j in J] for row in top]
    u = [Fraction(0)] * (alpha + 1)
    for j in F:
        u[j] = Fraction(z[j])
    rhs = [-sum(row[j] * u[j] for j in F) for row in top]
    for j, val in zip(J, solve_fraction(minor, rhs)):
        u[j] = val
    Nu = mat_vec(BN, u)
    v = [Fraction(0)] * (alpha + 1)
    for j, val in zip(J, solve_fraction(minor, [-x for x in Nu[1:beta + 1]])):
        v[j] = val
    x = [ui + eta * vi for ui, vi in zip(u, v)]
    constants = {0: x[0]}
    for j in range(1, alpha + 1):
        constants[j] = p * x[j]
    constants[-1] = Fraction(0)
    D0 = d_family(constants, P.r, alpha, p)
    constants[-1] = -T_functional(default_family(p), D0, 0)
    witness = {"z": z, "u": u, "v": v, "minor_columns": list(J)}
    return constants, witness


def step_constants(P: StepParams) -> Tuple[Dict[int, Fraction], dict]:
    if P.step == 1:
        return {-1: Fraction(0), 0: Fraction(1)}, {}
    if P.step in (2, 3):
        return _step23_constants(P), {}
    return _step4_witness(P)


# ---------------------------------------------------------------------------
# assertions


@dataclass(frozen=True)
class Assertion:
    name: str
    description: str
    relation: str
    required: str
    achieved: str
    holds: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "description": self.description, "relation": self.relation,
                "required": self.required, "achieved": self.achieved, "holds": self.holds}


def _fmt(x) -> str:
    if x == math.inf:
        return "inf"
    if isinstance(x, bool):
        return "true" if x else "false"
    return exact_str(x) if not isinstance(x, str) else x


_RELATIONS = {
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "==": lambda a, b: a == b,
    "<=": lambda a, b: a <= b,
}


class _Collector:
    def __init__(self):
        self.items: List[Assertion] = []

    def add(self, name: str, description: str, relation: str, required, achieved) -> None:
        holds = _RELATIONS[relation](achieved, required)
        self.items.append(Assertion(name, description, relation, _fmt(required), _fmt(achieved), bool(holds)))


def _vec(xs) -> List[Fraction]:
    return [Fraction(x) for x in xs]


def evaluate_assertions(P: StepParams, constants: Mapping[int, Fraction], T: Sequence[Fraction],
                        witness: Mapping) -> List[Assertion]:
    """Every check of a certificate, recomputed from its parameters, constants and witness."""
    p, r, s, alpha = P.p, P.r, P.s, P.alpha
    fam = default_family(p)
    col = _Collector()
    vals = [val_p(t, p) for t in T]
    v_sr = val_p(s - r, p)
    col.add("precision", "the working precision exceeds every checked bound", ">",
            _max_bound(P.step, p, s, r, alpha, P.m), P.precision)

    if P.step == 1:
        lead0 = Fraction(s - r, s) * p
        col.add("T0_leading", "val(T_0 - (s-r)p/s) >= val(s-r)+2", ">=", v_sr + 2, val_p(T[0] - lead0, p))
        for w in range(1, len(T)):
            lead = p * (-1) ** w * math.comb(r, w) * Fraction((s - r) * math.factorial(w), falling(s, w + 1))
            col.add(f"T{w}_leading", f"val(T_{w} - p(-1)^w binom(r,w)(s-r)w!/s_(w+1)) >= val(s-r)+2", ">=",
                    v_sr + 2, val_p(T[w] - lead, p))
            col.add(f"T{w}_bound", f"val(T_{w}) >= val(s-r)+1", ">=", v_sr + 1, vals[w])
        v = vals[0]
        col.add("v_exact", "v = val(T_0) = val(s-r)+1", "==", v_sr + 1, v)
    elif P.step in (2, 3):
        extra = 0 if P.step == 2 else P.m
        expect = _step23_constants(P)
        col.add("constants_formula", "C_j = c_j p/(s-alpha)_alpha", "==", True,
                all(Fraction(constants.get(j, 0)) == expect[j] for j in range(-1, alpha + 1)))
        for j in range(1, alpha + 1):
            col.add(f"C{j}_in_pZp", f"val(C_{j}) >= 1", ">=", 1, val_p(constants[j], p))
        lead = p * Fraction(falling(s - r, alpha + 1), falling(s - alpha, alpha + 1))
        for w in range(alpha):
            col.add(f"T{w}_low", f"val(T_{w}) >= {extra + 2}", ">=", extra + 2, vals[w])
        col.add("Talpha_leading", "val(T_alpha - p(s-r)_(alpha+1)/(s-alpha)_(alpha+1)) >= bound", ">=",
                extra + 2, val_p(T[alpha] - lead, p))
        col.add("Talpha_exact", "val(T_alpha) is exactly the step valuation", "==", extra + 1, vals[alpha])
        for w in range(alpha + 1, len(T)):
            col.add(f"T{w}_high", f"val(T_{w}) >= {extra + 1}", ">=", extra + 1, vals[w])
        v = vals[alpha]
    else:
        m, beta = P.m, P.beta
        eta = P.iota * p**m
        c1 = verify_claim_one(p, s, alpha, beta, m, P.iota, rows=P.rows, r=r)
        col.add("claim_one", "val(A - S - eta N) >= m+1 on all 2nu-alpha rows", ">=", m + 1,
                c1.detail["min_valuation"])
        col.add("claim_two", "B S has the row structure of the row operations", "==", True,
                verify_claim_two(p, s, alpha, beta).passed)
        det = verify_det_Q(p, s, alpha, beta)
        col.add("det_Q", "det Q_bar by elimination equals the closed form and is nonzero", "==", True, det.passed)
        z, u, vv = list(witness["z"]), _vec(witness["u"]), _vec(witness["v"])
        Q = build_Q_bar(p, s, alpha, beta)
        col.add("Qz_e0", "Q_bar z = e0 over F_p", "==", True,
                [sum(a * b for a, b in zip(row, z)) % p for row in Q] == [1] + [0] * alpha)
        col.add("z0_nonzero", "z_0 != 0 mod p", "==", True, z[0] % p != 0)
        S = build_S(s, beta, alpha, p)
        top = mat_mul(build_B(alpha, p), S)[1:beta + 1]
        col.add("minor_columns", "the recorded columns are the first unit beta x beta minor of B S", "==", True,
                [int(j) for j in witness["minor_columns"]] == list(_unit_minor(top, beta, p)))
        col.add("Su_zero", "S u = 0 exactly", "==", True, all(x == 0 for x in mat_vec(S, u)))
        col.add("u_lifts_z", "u = z mod p", "==", True,
                all(val_p(ui - zi, p) >= 1 for ui, zi in zip(u, z)))
        x = [Fraction(constants[0])] + [Fraction(constants[j]) / p for j in range(1, alpha + 1)]
        col.add("constants_from_witness", "(C_0, C_1/p, ...) = u + eta v", "==", True,
                x == [ui + eta * vi for ui, vi in zip(u, vv)])
        col.add("C_minus1_exact", "C_-1 = -T_0(D with C_-1 = 0) has valuation m+1", "==", m + 1,
                val_p(constants[-1], p))
        col.add("T0_zero", "T_0 = 0 after the C_-1 correction", "==", True, T[0] == 0)
        for w in range(1, alpha + 1):
            col.add(f"T{w}_low", f"val(T_{w}) >= m+2", ">=", m + 2, vals[w])
        for w in range(alpha + 1, len(T)):
            col.add(f"T{w}_high", f"val(T_{w}) >= m+1", ">=", m + 1, vals[w])
        v = m + 1

    # shared: smoothing and the two lemmas' hypotheses
    v_prime = min(P.v_a - alpha, v)
    col.add("C0_unit", "C_0 is a unit", "==", 0, val_p(constants[0], p))
    col.add("v_le_Talpha", "v <= val(T_alpha)", "<=", vals[alpha], v)
    for w in range(alpha):
        col.add(f"X3_low_{w}", f"v' < val(T_{w})", ">", v_prime, vals[w])
    for w in range(alpha + 1, len(T)):
        col.add(f"X3_high_{w}", f"v' <= val(T_{w})", ">=", v_prime, vals[w])
    D = d_family(constants, r, alpha, p)
    try:
        smoothing_constants(D, fam, alpha, v)
        smooth_ok = True
    except AssertionError:
        smooth_ok = False
    col.add("smoothing", "v <= val T_alpha(Delta) <= val Delta_j", "==", True, smooth_ok)
    T_prime = (-1) ** alpha * T[alpha] / leading_coefficient_factor(fam, alpha) - Fraction(constants.get(-1, 0))
    vT = val_p(T_prime, p)
    col.add("X4_C_minus1", "val(C_-1) >= val(T')", ">=", vT, val_p(Fraction(constants.get(-1, 0)), p))
    if P.step == 4:
        col.add("T_prime_exact", "val(T') = m+1", "==", P.m + 1, vT)
    part1 = vT <= v_prime
    part2 = P.v_a - alpha < v
    route = "part1" if part1 and not part2 else "part2" if part2 and not part1 else "both" if part1 else "neither"
    col.add("dichotomy", "exactly one of val(T') <= v' and v(a)-alpha < v", "==", True, part1 != part2)
    col.items.append(Assertion("dichotomy_route", "route taken by the final lemma", "==", route, route, True))
    return col.items


# ---------------------------------------------------------------------------
# certificates


@dataclass
class StepCertificate:
    params: StepParams
    constants: Dict[int, Fraction]
    T: List[Fraction]
    assertions: List[Assertion]
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.holds for a in self.assertions)

    def to_dict(self) -> dict:
        return canonical({
            "schema": CERTIFICATE_SCHEMA,
            "kind": "step_certificate",
            "params": self.params.to_dict(),
            "family": default_family(self.params.p).name,
            "constants": {str(j): exact_str(self.constants[j]) for j in sorted(self.constants)},
            "T": [exact_str(t) for t in self.T],
            "witness": {k: [exact_str(x) for x in v] for k, v in self.witness.items()},
            "assertions": [a.to_dict() for a in self.assertions],
            "passed": self.passed,
        })


def run_step(step: int, params: Optional[StepParams] = None, **kwargs) -> StepCertificate:
    """Construct the constants for ``step`` and certify them."""
    P = params if params is not None else make_params(step, **kwargs)
    if P.step != step:
        raise RegimeError("params belong to a different step")
    check_regime(P)
    constants, witness = step_constants(P)
    D = d_family(constants, P.r, P.alpha, P.p)
    T = t_values(D, P.rows, default_family(P.p))
    if T != t_values_via_A(constants, P):
        raise FalsificationAlarm("the two routes to T_w disagree")
    _check_image_target(D, constants, P)
    return StepCertificate(P, constants, T, evaluate_assertions(P, constants, T, witness), witness)


IMAGE_TARGET_SAMPLE = 40


def _check_image_target(D: CoefficientFamily, constants, P: StepParams) -> None:
    """``D_i`` agrees with the coefficients of the image target built for ``(T-a)``.

    Every index is compared when there are at most ``IMAGE_TARGET_SAMPLE`` of them,
    otherwise an evenly spaced sample that includes both ends.
    """
    top = (P.r - 2 * P.alpha - 1) // (P.p - 1)
    if top < 1:
        return
    if top <= IMAGE_TARGET_SAMPLE:
        idx = list(range(1, top + 1))
    else:
        idx = sorted({1 + (top - 1) * k // (IMAGE_TARGET_SAMPLE - 1) for k in range(IMAGE_TARGET_SAMPLE)})
    C = {l: constants[l] for l in range(P.alpha + 1)}
    poly = image_target(P.alpha, P.alpha, C, P.r, P.p, RationalField(), indices=idx)
    for i in idx:
        if Fraction(poly.coeffs[i * (P.p - 1) + P.alpha]) != D[i]:
            raise FalsificationAlarm(f"D_{i} disagrees with the image target")


class CertificateError(ValueError):
    pass


def recheck_certificate(cert: Mapping) -> Tuple[bool, List[str]]:
    """Re-verify a serialized certificate from its parameters and constants.

    Returns ``(ok, problems)``; any tampering shows up as a mismatch between a
    stored value and its recomputation.
    """
    problems: List[str] = []
    try:
        if cert.get("schema") != exact_str(CERTIFICATE_SCHEMA) or cert.get("kind") != "step_certificate":
            return False, ["unknown schema or kind"]
        P = StepParams.from_dict(cert["params"])
        check_regime(P)
        if cert.get("family") != default_family(P.p).name:
            problems.append("family mismatch")
        constants = {int(k): parse_exact(v) for k, v in cert["constants"].items()}
        if sorted(constants) != list(range(-1, P.alpha + 1)):
            problems.append("constants must be indexed -1..alpha")
        witness = dict(cert.get("witness", {}))
        expected_keys = {"z", "u", "v", "minor_columns"} if P.step == 4 else set()
        if set(witness) != expected_keys:
            return False, ["witness fields do not match the step"]
        if P.step == 4:
            witness = {k: [parse_exact(x) for x in witness[k]] for k in ("z", "u", "v", "minor_columns")}
            witness["z"] = [int(x) for x in witness["z"]]
        D = d_family(constants, P.r, P.alpha, P.p)
        T = t_values(D, P.rows, default_family(P.p))
        if [exact_str(t) for t in T] != list(cert["T"]):
            problems.append("stored T values differ from the recomputation")
        if T != t_values_via_A(constants, P):
            problems.append("T routes disagree")
        assertions = evaluate_assertions(P, constants, T, witness)
        stored = list(cert["assertions"])
        if [a.to_dict() for a in assertions] != stored:
            problems.append("stored assertions differ from the recomputation")
        problems.extend(f"assertion {a.name} fails" for a in assertions if not a.holds)
        if cert.get("passed") is not (not any(not a.holds for a in assertions)):
            problems.append("stored verdict differs")
    except (KeyError, TypeError, ValueError, ArithmeticError, AssertionError, RegimeError) as exc:
        problems.append(f"malformed certificate: {exc!r}")
    return not problems, problems
