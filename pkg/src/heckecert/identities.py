"""Executable checks for the eleven binomial identities (c-a) ... (c-k).

Each identity has a point checker ``check(**params) -> (ok, detail)``, a side
condition and a default grid.  Congruences are decided by exact valuations,
equalities exactly, and the two identities in a formal variable are
compared coefficient by coefficient after expansion.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .combinatorics import bigM, binom_int, residue_one_based, residue_zero_based
from .numbers import is_prime, val_p
from .polynomials import Poly, binom_poly


class ConfigError(ValueError):
    """Malformed grid or configuration."""


Point = Dict[str, int]
Check = Callable[..., Tuple[bool, str]]


# ---------------------------------------------------------------------------
# point checks


def check_ca(p: int, m: int, n: int, u: int, shift: int) -> Tuple[bool, str]:
    v = u + shift * (p - 1) * p ** (m - 1)
    diff = bigM(u, n, p) - bigM(v, n, p)
    got = val_p(diff, p)
    return got >= m, f"v={v} val={got} need>={m}"


def check_cb(p: int, u: int) -> Tuple[bool, str]:
    s = residue_one_based(u, p)
    t = (u - s) // (p - 1)
    delta = 1 if u % (p - 1) == 0 else 0
    resid = bigM(u, 0, p) - 1 - delta - Fraction(t, s) * p
    need = val_p(t, p) + 2
    got = val_p(resid, p)
    return got >= need, f"val={got} need>={need}"


def check_cc(p: int, u: int, n: int) -> Tuple[bool, str]:
    lhs = bigM(u, n, p)
    rhs = sum((-1) ** i * binom_int(-n, i) * bigM(u - n - i, 0, p) for i in range(-n + 1))
    return lhs == rhs, f"lhs={lhs} rhs={rhs}"


def check_cd(p: int, u: int, n: int) -> Tuple[bool, str]:
    lhs = bigM(u, n, p)
    factor = 2 if (u % (p - 1) == 0 and n % (p - 1) == 0) else 1
    rhs = factor * binom_int(residue_one_based(u, p), residue_zero_based(n, p))
    return (lhs - rhs) % p == 0, f"lhs mod p={lhs % p} rhs mod p={rhs % p}"


def check_ce(b: int, l: int, n: int, w: int, u: int) -> Tuple[bool, str]:
    lhs = sum((-1) ** (j - b) * binom_int(l, j - b) * binom_int(u - n * j, w) for j in range(b, b + l + 1))
    rhs = n**l if w == l else 0
    return lhs == rhs, f"lhs={lhs} rhs={rhs}"


def check_cf(t: int, l: int, w: int) -> Tuple[bool, str]:
    lhs = binom_poly(t + l) * binom_int(t, w)
    rhs = Poly()
    for v in range(0, w + 1):
        coef = (-1) ** (w - v) * binom_int(l + w - v - 1, w - v)
        if coef:
            rhs = rhs + binom_poly(v) * binom_poly(t + l - v, 1, -v) * coef
    return lhs == rhs, f"deg lhs={lhs.degree} deg rhs={rhs.degree}"


def check_cg(p: int, u: int, m: int, l: int, w: int) -> Tuple[bool, str]:
    top = u - m + l
    q = p - 1
    # every i with 0 <= i(p-1)+l <= top, negative i included
    i_lo = -(l // q)
    i_hi = (top - l) // q
    lhs = 0
    for i in range(i_lo, i_hi + 1):
        k = i * q + l
        if 0 <= k <= top:
            lhs += math.comb(top, k) * binom_int(i * q, w)
    rhs = 0
    for v in range(0, w + 1):
        coef = (-1) ** (w - v) * binom_int(l + w - v - 1, w - v)
        if coef:
            rhs += coef * binom_int(top, v) * bigM(top - v, l - v, p)
    return lhs == rhs, f"lhs={lhs} rhs={rhs}"


def check_ch(u: int, v: int) -> Tuple[bool, str]:
    lhs = Poly()
    for w in range(0, v + 1):
        term = binom_poly(w).derivative() * binom_poly(v - w, 1, u - w)
        lhs = lhs + (term if w % 2 == 0 else -term)
    rhs = -sum((Fraction(binom_int(u - w, v - w), w) for w in range(1, v + 1)), Fraction(0))
    return lhs == Poly([rhs]), f"lhs={lhs!r} rhs={rhs}"


def check_ci(u: int, v: int) -> Tuple[bool, str]:
    lhs = Poly()
    for w in range(0, v + 1):
        term = binom_poly(w) * binom_poly(v - w, 1, u - w)
        lhs = lhs + (term if w % 2 == 0 else -term)
    rhs = (-1) ** v * binom_int(v - u - 1, v)
    return lhs == Poly([rhs]), f"lhs={lhs!r} rhs={rhs}"


def check_cj(l: int, j: int, v: int) -> Tuple[bool, str]:
    lhs = sum(binom_int(l - 1, w - 1) * binom_int(-j, w - v) for w in range(1, l + 1))
    rhs = (-1) ** (l - v) * binom_int(j - v, l - v)
    return lhs == rhs, f"lhs={lhs} rhs={rhs}"


def check_ck(i: int, u: int, v: int) -> Tuple[bool, str]:
    lhs = sum((-1) ** l * binom_int(l, i) * binom_int(u, l - v) for l in range(v, v + u + 1))
    rhs = (-1) ** (u + v) * binom_int(v, u + v - i)
    return lhs == rhs, f"lhs={lhs} rhs={rhs}"


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    params: Tuple[str, ...]
    check: Check
    condition: Callable[..., bool]
    needs_prime: bool


def _nonneg(*xs):
    return all(x >= 0 for x in xs)


IDENTITIES: Dict[str, IdentitySpec] = {
    "c-a": IdentitySpec("c-a", ("p", "m", "n", "u", "shift"), check_ca,
                        lambda p, m, n, u, shift: m >= 1 and u >= 1 and shift >= 1, True),
    "c-b": IdentitySpec("c-b", ("p", "u"), check_cb, lambda p, u: u >= 1, True),
    "c-c": IdentitySpec("c-c", ("p", "u", "n"), check_cc, lambda p, u, n: u >= 0 and n <= 0, True),
    "c-d": IdentitySpec("c-d", ("p", "u", "n"), check_cd, lambda p, u, n: u >= 1 and n >= 0, True),
    "c-e": IdentitySpec("c-e", ("b", "l", "n", "w", "u"), check_ce,
                        lambda b, l, n, w, u: _nonneg(b, l, n, w) and l >= w and u >= (b + l) * n, False),
    "c-f": IdentitySpec("c-f", ("t", "l", "w"), check_cf, lambda t, l, w: _nonneg(l, w), False),
    "c-g": IdentitySpec("c-g", ("p", "u", "m", "l", "w"), check_cg,
                        lambda p, u, m, l, w: _nonneg(u, m, l, w) and u + l >= m + w, True),
    "c-h": IdentitySpec("c-h", ("u", "v"), check_ch, lambda u, v: _nonneg(u, v), False),
    "c-i": IdentitySpec("c-i", ("u", "v"), check_ci, lambda u, v: _nonneg(u, v), False),
    "c-j": IdentitySpec("c-j", ("l", "j", "v"), check_cj, lambda l, j, v: l >= 1 and _nonneg(j, v), False),
    "c-k": IdentitySpec("c-k", ("i", "u", "v"), check_ck, lambda i, u, v: _nonneg(i, u, v), False),
}

IDENTITY_NAMES = tuple(IDENTITIES)


def default_grid(name: str, primes: Sequence[int] = (3, 5, 7, 11, 13), max_u: int = 60) -> Dict[str, List[int]]:
    """Grid exercising every quantifier of the identity on boundary and interior points."""
    small = list(range(0, 11))
    if name == "c-a":
        return {"p": list(primes), "m": [1, 2, 3], "n": list(range(-6, 7)),
                "u": [1 + 19 * k for k in range(20)], "shift": [1]}
    if name == "c-b":
        return {"p": list(primes), "u": list(range(1, max(max_u, 300) + 1))}
    if name == "c-c":
        return {"p": list(primes), "u": list(range(0, max_u + 1)), "n": list(range(-6, 1))}
    if name == "c-d":
        top = max(primes, default=3)
        return {"p": list(primes), "u": list(range(1, max(max_u, 200) + 1)), "n": list(range(0, 2 * (top - 1) + 1))}
    if name == "c-e":
        return {"b": small, "l": small, "n": small, "w": small, "u": list(range(0, max_u + 1))}
    if name == "c-f":
        return {"t": list(range(-10, 11)), "l": small, "w": small}
    if name == "c-g":
        return {"p": [q for q in primes if q <= 7], "u": list(range(0, max_u + 1)), "m": small, "l": small, "w": small}
    if name in ("c-h", "c-i"):
        return {"u": small, "v": small}
    if name == "c-j":
        return {"l": list(range(1, 11)), "j": small, "v": small}
    if name == "c-k":
        return {"i": small, "u": small, "v": small}
    raise ConfigError(f"unknown identity {name!r}")


def _validate_grid(spec: IdentitySpec, grid: Mapping[str, Iterable[int]]) -> Dict[str, List[int]]:
    if not isinstance(grid, Mapping):
        raise ConfigError("grid must be a mapping of parameter name to values")
    missing = set(spec.params) - set(grid)
    extra = set(grid) - set(spec.params)
    if missing or extra:
        raise ConfigError(f"{spec.name}: grid keys must be {spec.params}; missing={sorted(missing)} extra={sorted(extra)}")
    out = {}
    for k in spec.params:
        vals = list(grid[k])
        if any(isinstance(v, bool) or not isinstance(v, int) for v in vals):
            raise ConfigError(f"{spec.name}: values for {k!r} must be integers")
        out[k] = vals
    if spec.needs_prime:
        bad = [q for q in out["p"] if not is_prime(q) or q < 3]
        if bad:
            raise ConfigError(f"{spec.name}: {bad} are not odd primes")
    return out


def grid_points(name: str, grid: Mapping[str, Iterable[int]]) -> Tuple[List[Point], int]:
    """Cartesian product filtered by the side condition; returns (points, skipped)."""
    spec = _identity(name)
    g = _validate_grid(spec, grid)
    points, skipped = [], 0
    for combo in itertools.product(*(g[k] for k in spec.params)):
        pt = dict(zip(spec.params, combo))
        if spec.condition(**pt):
            points.append(pt)
        else:
            skipped += 1
    return points, skipped


def _identity(name: str) -> IdentitySpec:
    try:
        return IDENTITIES[name]
    except KeyError:
        raise ConfigError(f"unknown identity {name!r}; expected one of {IDENTITY_NAMES}") from None


@dataclass
class IdentityReport:
    identity: str
    checked: int
    skipped: int
    failures: int
    first_counterexample: Optional[Dict[str, object]]
    points: List[Point] = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def digest(self) -> str:
        blob = json.dumps(sorted(self.points, key=lambda d: tuple(sorted(d.items()))), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_dict(self) -> Dict[str, object]:
        return {
            "identity": self.identity,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": self.failures,
            "status": "pass" if self.passed else "fail",
            "points_sha256": self.digest(),
            "first_counterexample": self.first_counterexample,
        }

    @staticmethod
    def merge(reports: Sequence["IdentityReport"]) -> "IdentityReport":
        """Combine chunk reports; the result does not depend on chunk order."""
        if not reports:
            raise ValueError("nothing to merge")
        name = reports[0].identity
        points = [pt for r in reports for pt in r.points]
        ces = [r.first_counterexample for r in reports if r.first_counterexample]
        first = min(ces, key=lambda c: json.dumps(c["point"], sort_keys=True)) if ces else None
        return IdentityReport(name, sum(r.checked for r in reports), sum(r.skipped for r in reports),
                              sum(r.failures for r in reports), first, points)


def verify_points(name: str, points: Sequence[Point], skipped: int = 0) -> IdentityReport:
    spec = _identity(name)
    failures, first = 0, None
    for pt in points:
        ok, detail = spec.check(**pt)
        if not ok:
            failures += 1
            if first is None:
                first = {"point": dict(pt), "detail": detail}
    return IdentityReport(name, len(points), skipped, failures, first, list(points))


def verify_identity(name: str, grid: Mapping[str, Iterable[int]] | None = None) -> IdentityReport:
    """Check one identity on every point of ``grid`` (default grid when omitted).

    >>> verify_identity("c-k", {"i": [0, 1], "u": [2], "v": [3]}).passed
    True
    """
    if grid is None:
        grid = default_grid(name)
    points, skipped = grid_points(name, grid)
    return verify_points(name, points, skipped)
