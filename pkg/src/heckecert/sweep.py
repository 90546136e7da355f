"""Parameter grids and the per-target runners used by the command line driver.

Every runner returns a list of plain-dict records in a deterministic order
(sorted by parameter tuple), so a report depends only on the configuration.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import identities, matrices, steps
from .hecke import RegimeError, build_image_element, verify_lemma_Tma
from .numbers import PrimeField, eisenstein_make_a, is_prime
from .symmetric import HomogPoly, club_kernel_dimension, theta_criterion_routes, theta_power

TARGETS = ("identities", "lemmas", "matrices", "steps")


class ConfigError(ValueError):
    """Invalid sweep configuration (exit code 2)."""


@dataclass
class SweepConfig:
    primes: List[int] = field(default_factory=lambda: [5, 7, 11, 13])
    nu: Optional[List[int]] = None
    s: Optional[List[int]] = None
    alpha: Optional[List[int]] = None
    beta: Optional[List[int]] = None
    m: List[int] = field(default_factory=lambda: [1])
    iota: List[int] = field(default_factory=lambda: [1])
    precision: Optional[int] = None
    jobs: int = 1
    seed: int = 0
    max_u: int = 60
    theta_instances: int = 500
    allow_degenerate: bool = False

    def validate(self) -> "SweepConfig":
        for q in self.primes:
            if not isinstance(q, int) or q < 3 or not is_prime(q):
                raise ConfigError(f"{q!r} is not an odd prime")
        for name in ("nu", "s", "alpha", "beta", "m", "iota"):
            vals = getattr(self, name)
            if vals is not None and any(isinstance(v, bool) or not isinstance(v, int) for v in vals):
                raise ConfigError(f"{name} values must be integers")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.max_u < 1 or self.theta_instances < 0:
            raise ConfigError("max_u must be >= 1 and theta_instances >= 0")
        if self.precision is not None and self.precision < 2:
            raise ConfigError("precision must be >= 2")
        if any(v < 1 for v in self.m) or any(v % q == 0 for v in self.iota for q in self.primes):
            raise ConfigError("m must be >= 1 and iota a unit at every prime")
        if not self.allow_degenerate and self.nu is not None:
            for q in self.primes:
                if any(n > (q - 1) // 2 for n in self.nu):
                    raise ConfigError(f"nu must be <= (p-1)/2 (p={q}); pass --allow-degenerate to override")
        return self

    def to_dict(self) -> dict:
        # jobs only changes scheduling, so it is left out to keep reports identical
        d = asdict(self)
        d.pop("jobs")
        return d


def _map(fn: Callable, items: Sequence, jobs: int) -> List:
    """Ordered map; results come back in input order regardless of completion order."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _record(check_id: str, params: dict, status: str, required="", achieved="", detail=None) -> dict:
    return {"id": check_id, "params": params, "status": status, "required": required,
            "achieved": achieved, "detail": detail or {}}


# ---------------------------------------------------------------------------
# grids


def nu_values(cfg: SweepConfig, p: int, cap: int = 3) -> List[int]:
    top = (p - 1) // 2
    if cfg.nu is not None:
        return sorted(n for n in set(cfg.nu) if n >= 1 and (n <= top or cfg.allow_degenerate))
    return list(range(1, min(cap, top) + 1))


def s_values(cfg: SweepConfig, p: int, nu: int) -> List[int]:
    """``[2 nu, 2 nu + p - 2]`` cut to the residues ``s <= p-1`` unless degenerate points are allowed."""
    hi = 2 * nu + p - 2 if cfg.allow_degenerate else min(p - 1, 2 * nu + p - 2)
    vals = range(2 * nu, hi + 1)
    if cfg.s is not None:
        vals = [s for s in vals if s in set(cfg.s)]
    return list(vals)


def step4_grid(cfg: SweepConfig) -> List[Tuple[int, int, int, int, int]]:
    """``(p, nu, alpha, beta, s)`` with ``0 < alpha < nu-1`` and ``1 <= beta <= alpha``."""
    out = []
    for p in sorted(set(cfg.primes)):
        for nu in nu_values(cfg, p):
            for alpha in range(1, nu - 1):
                if cfg.alpha is not None and alpha not in cfg.alpha:
                    continue
                for beta in range(1, alpha + 1):
                    if cfg.beta is not None and beta not in cfg.beta:
                        continue
                    for s in s_values(cfg, p, nu):
                        out.append((p, nu, alpha, beta, s))
    return out


# ---------------------------------------------------------------------------
# identities


def _identity_chunk(args) -> identities.IdentityReport:
    name, points = args
    return identities.verify_points(name, points)


def run_identities(cfg: SweepConfig) -> List[dict]:
    records = []
    for name in identities.IDENTITY_NAMES:
        grid = identities.default_grid(name, tuple(sorted(set(cfg.primes))), cfg.max_u)
        if "p" in grid and not grid["p"]:
            records.append(_record(f"identity:{name}", {}, "pass", detail={"checked": 0}))
            continue
        points, skipped = identities.grid_points(name, grid)
        size = max(1, len(points) // (4 * cfg.jobs)) if cfg.jobs > 1 else max(1, len(points))
        chunks = [(name, points[i:i + size]) for i in range(0, len(points), size)] or [(name, [])]
        reports = _map(_identity_chunk, chunks, cfg.jobs)
        rep = identities.IdentityReport.merge(reports)
        rep.skipped = skipped
        d = rep.to_dict()
        records.append(_record(f"identity:{name}", {"grid": {k: [min(v), max(v), len(v)] if v else [] for k, v in grid.items()}},
                               d["status"], detail=d))
    return records


# ---------------------------------------------------------------------------
# lemmas


def random_theta_instance(rng: random.Random, p: int, max_alpha: int = 4):
    """A random ``(D, alpha, r)``; half are built from ``theta^alpha h`` so both answers occur."""
    alpha = rng.randint(0, min(max_alpha, p - 1))
    r = alpha * (p + 1) + rng.randint(0, 5 * (p - 1))
    if rng.random() < 0.5:
        F = PrimeField(p)
        deg = r - alpha * (p + 1)
        h = {k * (p - 1): rng.randrange(p) for k in range(deg // (p - 1) + 1)}
        f = theta_power(F, p, alpha) * HomogPoly.from_dict(F, deg, h)
        D = {i: int(f.coeffs[alpha + i * (p - 1)]) for i in range((r - 2 * alpha) // (p - 1) + 1)}
    else:
        D = {i: rng.randrange(p) for i in range((r - 2 * alpha) // (p - 1) + 1)}
    return {i: v for i, v in D.items() if v % p}, alpha, r


def _theta_batch(args) -> Tuple[int, int, int, Optional[dict]]:
    p, seed, count = args
    rng = random.Random(f"theta:{seed}:{p}")
    agree = positives = 0
    first_bad = None
    for _ in range(count):
        D, alpha, r = random_theta_instance(rng, p)
        routes = theta_criterion_routes(D, alpha, r, p)
        if routes.agree:
            agree += 1
        elif first_bad is None:
            first_bad = {"D": {str(k): str(v) for k, v in sorted(D.items())}, "alpha": alpha, "r": r}
        positives += bool(routes.division)
    return agree, positives, count, first_bad


LEMMA_NU = {5: 2, 7: 3, 11: 2}


def lemma_points(cfg: SweepConfig) -> List[Tuple[int, int, int, int]]:
    """``(p, nu, alpha, n)`` with ``n = 2 nu + 2`` and every ``alpha < nu``."""
    out = []
    for p in sorted(set(cfg.primes)):
        nus = cfg.nu if cfg.nu is not None else [LEMMA_NU.get(p, min(2, (p - 1) // 2))]
        for nu in sorted(set(nus)):
            if nu < 1 or (nu > (p - 1) // 2 and not cfg.allow_degenerate):
                continue
            for alpha in range(nu):
                out.append((p, nu, alpha, 2 * nu + 2))
    return out


def _lemma_point(args) -> dict:
    p, nu, alpha, n, precision = args
    r = n * p + alpha + p
    M = precision if precision is not None else n + 2
    a = eisenstein_make_a(p, 2, M, 2 * nu - 1)
    rep = verify_lemma_Tma(alpha, n, r, p, a, M, nu)
    params = {"p": p, "nu": nu, "alpha": alpha, "n": n, "r": r, "M": M, "a": f"pi^{2 * nu - 1} (e=2)"}
    return _record("lemma:Tma", params, "pass" if rep.passed else "fail", f">= {n}",
                   "inf" if rep.observed_valuation is None else str(rep.observed_valuation),
                   {k: str(v) for k, v in rep.checks.items()})


def _image_point(args) -> dict:
    p, nu, beta, precision = args
    M = precision if precision is not None else 2 * nu + 4
    a = eisenstein_make_a(p, 2, M, 2 * nu - 1)
    gamma = beta
    n = gamma + p - 1
    r = n * p + gamma + p
    C = {l: Fraction(1 + l) for l in range(0, beta + 1)}
    _, ledger = build_image_element(beta, gamma, C, r, p, a, M, nu=nu)
    params = {"p": p, "nu": nu, "beta": beta, "gamma": gamma, "r": r, "M": M}
    return _record("lemma:image_element", params, "pass" if ledger.holds else "fail",
                   detail=ledger.to_dict())


def run_lemmas(cfg: SweepConfig) -> List[dict]:
    records = []
    theta_primes = [q for q in sorted(set(cfg.primes)) if q <= 7] or []
    batches = _map(_theta_batch, [(q, cfg.seed, cfg.theta_instances) for q in theta_primes], cfg.jobs)
    for q, (agree, positives, count, bad) in zip(theta_primes, batches):
        records.append(_record("lemma:theta_criterion", {"p": q, "seed": cfg.seed, "instances": count},
                               "pass" if agree == count else "fail", str(count), str(agree),
                               {"divisible_instances": positives, "first_disagreement": bad}))
    for q in sorted(set(cfg.primes)):
        if q > 7:
            continue
        ok = all(club_kernel_dimension(q, h) == (h - 1) % (q - 1) + 2 for h in range(2 * (q - 1)))
        records.append(_record("lemma:club_kernel", {"p": q}, "pass" if ok else "fail",
                               detail={"rule": "dim ker = <h> + 1"}))
    pts = lemma_points(cfg)
    records.extend(_map(_lemma_point, [pt + (cfg.precision,) for pt in pts], cfg.jobs))
    img = []
    for p, nu, alpha, n in pts:
        if alpha >= 1 and p <= 7:
            img.append((p, nu, alpha, cfg.precision))
    records.extend(_map(_image_point, img, cfg.jobs))
    return records


# ---------------------------------------------------------------------------
# matrices


def _matrix_point(args) -> List[dict]:
    p, nu, alpha, beta, s, ms, iotas = args
    base = {"p": p, "nu": nu, "alpha": alpha, "beta": beta, "s": s}
    out = []
    try:
        for m in ms:
            for iota in iotas:
                rep = matrices.verify_claim_one(p, s, alpha, beta, m, iota, rows=2 * nu - alpha)
                out.append(_record("matrix:claim_one", dict(base, m=m, iota=iota, r=rep.params["r"]),
                                   "pass" if rep.passed else "fail", f">= {m + 1}",
                                   str(rep.detail["min_valuation"]),
                                   {"S_p_integral": rep.detail["S_integral"], "N_p_integral": rep.detail["N_integral"]}))
        rep = matrices.verify_claim_two(p, s, alpha, beta)
        out.append(_record("matrix:claim_two", base, "pass" if rep.passed else "fail",
                           detail={k: str(v) for k, v in rep.detail.items()}))
        try:
            rep = matrices.verify_det_Q(p, s, alpha, beta)
            out.append(_record("matrix:det_Q", base, "pass" if rep.passed else "fail", "nonzero",
                               str(rep.detail["det_elimination"]),
                               {"det_closed": str(rep.detail["det_closed"]), "z": [str(x) for x in rep.detail["z"] or []]}))
        except matrices.DegeneratePoint as exc:
            out.append(_record("matrix:det_Q", base, "degenerate", detail={"reason": str(exc)}))
        except AssertionError as exc:
            out.append(_record("matrix:det_Q", base, "fail", detail={"reason": str(exc)}))
    except (ValueError, RegimeError) as exc:
        out.append(_record("matrix:regime", base, "degenerate", detail={"reason": str(exc)}))
    return out


def run_matrices(cfg: SweepConfig) -> List[dict]:
    records = []
    for alpha in range(1, 9):
        records.append(_record("matrix:Mc_identity", {"alpha": alpha},
                               "pass" if matrices.verify_Mc_identity(alpha) else "fail"))
    pairs = sorted({(q - 1, 1) for q in cfg.primes} | {(1, q - 1) for q in cfg.primes} | {(2, 3)})
    for lam, mu in pairs:
        ok = all(matrices.verify_L_matrix(alpha, lam, mu) for alpha in range(0, 9))
        records.append(_record("matrix:L_matrix", {"lambda": lam, "mu": mu, "alpha_max": 8}, "pass" if ok else "fail"))
    args = [pt + (tuple(cfg.m), tuple(cfg.iota)) for pt in step4_grid(cfg)]
    for recs in _map(_matrix_point, args, cfg.jobs):
        records.extend(recs)
    return records


# ---------------------------------------------------------------------------
# steps


def step_points(cfg: SweepConfig) -> List[Tuple]:
    """``(step, p, nu, s, alpha, beta, m, iota)`` in a fixed order."""
    out = []
    for p in sorted(set(cfg.primes)):
        for nu in nu_values(cfg, p):
            for s in s_values(cfg, p, nu):
                out.append((1, p, nu, s, 0, None, None, None))
                for alpha in range(1, nu - 1):
                    if cfg.alpha is not None and alpha not in cfg.alpha:
                        continue
                    out.append((2, p, nu, s, alpha, None, None, None))
                    for m in cfg.m:
                        for iota in cfg.iota:
                            out.append((3, p, nu, s, alpha, None, m, iota))
                    for beta in range(1, alpha + 1):
                        if cfg.beta is not None and beta not in cfg.beta:
                            continue
                        for m in cfg.m:
                            for iota in cfg.iota:
                                out.append((4, p, nu, s, alpha, beta, m, iota))
    return out


def _step_point(args) -> Tuple[dict, Optional[dict]]:
    (step, p, nu, s, alpha, beta, m, iota), precision, allow = args
    base = {"step": step, "p": p, "nu": nu, "s": s, "alpha": alpha, "beta": beta, "m": m, "iota": iota}
    try:
        params = steps.make_params(step, p=p, nu=nu, s=s, alpha=alpha, beta=beta, m=m, iota=iota,
                                   precision=precision, allow_outside=allow)
        cert = steps.run_step(step, params)
    except (RegimeError, matrices.DegeneratePoint) as exc:
        return _record(f"step:{step}", base, "degenerate", detail={"reason": str(exc)}), None
    except steps.FalsificationAlarm as exc:
        return _record(f"step:{step}", base, "fail", detail={"alarm": str(exc)}), None
    failing = [a.name for a in cert.assertions if not a.holds]
    route = next(a.achieved for a in cert.assertions if a.name == "dichotomy_route")
    rec = _record(f"step:{step}", dict(base, r=params.r), "pass" if cert.passed else "fail",
                  detail={"assertions": len(cert.assertions), "failing": failing, "route": route})
    return rec, cert.to_dict()


def run_steps(cfg: SweepConfig) -> Tuple[List[dict], List[dict]]:
    args = [(pt, cfg.precision, cfg.allow_degenerate) for pt in step_points(cfg)]
    results = _map(_step_point, args, cfg.jobs)
    return [r for r, _ in results], [c for _, c in results if c is not None]
