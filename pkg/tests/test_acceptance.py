"""Acceptance suite: one test, and one PASS/FAIL line, per criterion.

Run ``pytest tests/test_acceptance.py -v``; the lines are repeated in the
"acceptance criteria" section of the terminal summary.
"""
import copy
import json
import math
import random
import time
from fractions import Fraction

import pytest

from heckecert import matrices as mx
from heckecert.cli import main
from heckecert.combinatorics import bigM
from heckecert.hecke import verify_lemma_Tma
from heckecert.identities import IDENTITY_NAMES
from heckecert.numbers import eisenstein_make_a, parse_exact
from heckecert.report import dumps
from heckecert.steps import recheck_certificate, run_step
from heckecert.sweep import SweepConfig, _theta_batch, run_identities, run_steps


def test_1_identity_suite(acceptance):
    t0 = time.perf_counter()
    records = run_identities(SweepConfig(primes=[3, 5, 7, 11, 13], max_u=60, jobs=1).validate())
    elapsed = time.perf_counter() - t0
    names = {r["id"].split(":", 1)[1] for r in records}
    checked = sum(int(r["detail"]["checked"]) for r in records)
    failed = [r["id"] for r in records if r["status"] != "pass"]
    ok = not failed and names == set(IDENTITY_NAMES) and elapsed < 120
    acceptance("1 identity suite (c-a)..(c-k)", ok,
               f"{len(names)} identities, {checked} points, {len(failed)} failing, {elapsed:.1f}s (< 120s)")
    assert ok, failed


def test_2_anchor_value(acceptance):
    # independent oracle: direct summation of binomials, no shared code with bigM or the step builder
    direct_M = sum(math.comb(24, k) for k in range(0, 25, 4))
    direct_T0 = sum(math.comb(24, 4 * i) for i in range(1, 6))
    cert = run_step(1, p=5, nu=2, s=4)
    T0 = cert.T[0]
    lead = Fraction(4 - 24, 4) * 5
    ok = (bigM(24, 0, 5) == direct_M == 4196352 and T0 == direct_T0 == 4196350
          and (T0 - lead) % 125 == 0 and T0 % 125 == (-25) % 125)
    acceptance("2 anchor value", ok, f"bigM(24,0,5)={bigM(24, 0, 5)}, T_0={T0}, T_0 mod 125={T0 % 125} (= -25)")
    assert ok


def test_3_theta_criterion(acceptance):
    t0 = time.perf_counter()
    summary = []
    ok = True
    for p in (3, 5, 7):
        agree, positives, count, bad = _theta_batch((p, 0, 500))
        ok &= agree == count == 500 and 0 < positives < count
        summary.append(f"p={p}: {agree}/{count} agree, {positives} divisible")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    acceptance("3 theta criterion equivalence", ok, "; ".join(summary) + f"; {elapsed:.1f}s (< 60s)")
    assert ok


def test_4_symbolic_matrix_identities(acceptance):
    t0 = time.perf_counter()
    mc = [a for a in range(1, 9) if not mx.verify_Mc_identity(a)]
    pairs = [(4, 1), (6, 1), (10, 1), (12, 1), (1, 3), (Fraction(2, 3), -5)]
    lm = [(a, l, m) for a in range(0, 9) for l, m in pairs if not mx.verify_L_matrix(a, l, m)]
    elapsed = time.perf_counter() - t0
    ok = not mc and not lm and elapsed < 10
    acceptance("4 symbolic matrix identities", ok,
               f"Mc alpha 1..8 failures={mc}, L alpha 0..8 x {len(pairs)} pairs failures={lm}, {elapsed:.1f}s (< 10s)")
    assert ok


LEMMA_POINTS = [(5, 2, 0, 6), (5, 2, 1, 6)] + [(7, 3, a, 8) for a in range(3)] + [(11, 2, a, 6) for a in range(2)]


def test_5_hecke_lemma(acceptance):
    t0 = time.perf_counter()
    results = []
    for p, nu, alpha, n in LEMMA_POINTS:
        r = n * p + alpha + p  # smallest r allowed
        M = n + 2
        rep = verify_lemma_Tma(alpha, n, r, p, eisenstein_make_a(p, 2, M, 2 * nu - 1), M, nu)
        results.append((p, nu, alpha, n, rep.passed, rep.observed_valuation))
    elapsed = time.perf_counter() - t0
    ok = all(r[4] for r in results) and elapsed < 300
    detail = ", ".join(f"(p={p},nu={nu},a={a},n={n}) val={v}" for p, nu, a, n, _, v in results)
    acceptance("5 Hecke lemma (T-a) expansion", ok, f"{detail}; {elapsed:.1f}s (< 300s)")
    assert ok


def _fourth_step_grid(in_regime: bool):
    pts = []
    for p in (5, 7, 11, 13):
        for nu in range(1, min(3, (p - 1) // 2) + 1):
            for alpha in range(1, nu - 1):
                for beta in range(1, alpha + 1):
                    for s in range(2 * nu, 2 * nu + p - 1):
                        if (s <= p - 1) == in_regime:
                            pts.append((p, nu, alpha, beta, s))
    return pts


def _fourth_step_point(p, nu, alpha, beta, s, ms=(1, 2), iotas=(1, 2)):
    """Outcome of every fourth-step check at one point; exceptions count as failures."""
    out = {}
    try:
        out["claim_one"] = all(mx.verify_claim_one(p, s, alpha, beta, m, i, rows=2 * nu - alpha).passed
                               for m in ms for i in iotas)
    except Exception as exc:  # noqa: BLE001
        out["claim_one"] = type(exc).__name__
    out["claim_two"] = mx.verify_claim_two(p, s, alpha, beta).passed
    try:
        out["det_Q"] = mx.verify_det_Q(p, s, alpha, beta).passed
    except mx.DegeneratePoint:
        out["det_Q"] = "degenerate"
    except AssertionError:
        out["det_Q"] = "closed-form mismatch"
    return out


def test_6_fourth_step_suite(acceptance):
    t0 = time.perf_counter()
    pts = _fourth_step_grid(in_regime=True)
    bad = [(pt, res) for pt in pts for res in [_fourth_step_point(*pt)] if not all(v is True for v in res.values())]
    elapsed = time.perf_counter() - t0
    ok = pts and not bad and elapsed < 600
    acceptance("6 fourth-step suite, s <= p-1", ok,
               f"{len(pts)} points x m in (1,2) x iota in (1,2), {len(bad)} failing, {elapsed:.1f}s (< 600s)")
    assert ok, bad


@pytest.mark.xfail(strict=True, reason="grid points with s > p-1 lie outside the theorem; see the decisions ledger")
def test_6_fourth_step_literal_grid(acceptance):
    pts = _fourth_step_grid(in_regime=False)
    outcomes = {pt: _fourth_step_point(*pt, ms=(1,), iotas=(1,)) for pt in pts}
    bad = {pt: res for pt, res in outcomes.items() if not all(v is True for v in res.values())}
    kinds = {}
    for res in bad.values():
        for k, v in res.items():
            if v is not True:
                kinds[f"{k}:{v}"] = kinds.get(f"{k}:{v}", 0) + 1
    acceptance("6 fourth-step suite, literal grid s in [p, 2nu+p-2]", not bad,
               f"{len(pts)} points, {len(bad)} failing ({', '.join(f'{k} x{n}' for k, n in sorted(kinds.items()))})")
    assert not bad


def _leaves(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _leaves(v, path + (i,))
    else:
        yield path, obj


def _perturb(value, rng):
    if isinstance(value, bool):
        return not value
    if value is None:
        return "0"
    try:
        x = parse_exact(value)
    except (ValueError, ZeroDivisionError):
        return "0" if value == "inf" else value + "~"
    return str(x + rng.choice([-1, 1]) * rng.choice([1, Fraction(1, 7), 7**3]))


def test_7_certificate_round_trip(acceptance):
    t0 = time.perf_counter()
    _, certs = run_steps(SweepConfig(primes=[7, 11, 13]).validate())
    certs = [json.loads(dumps(c)) for c in certs]
    fresh_ok = all(recheck_certificate(c)[0] for c in certs)
    rng = random.Random(2024)
    rejected = 0
    escaped = []
    for _ in range(100):
        cert = copy.deepcopy(rng.choice(certs))
        path, value = rng.choice(list(_leaves(cert)))
        target = cert
        for key in path[:-1]:
            target = target[key]
        target[path[-1]] = _perturb(value, rng)
        if not recheck_certificate(cert)[0]:
            rejected += 1
        else:
            escaped.append(path)
    elapsed = time.perf_counter() - t0
    ok = fresh_ok and rejected == 100 and elapsed < 30
    acceptance("7 certificate round trip", ok,
               f"{len(certs)} fresh certificates accepted={fresh_ok}, {rejected}/100 perturbations rejected, "
               f"{elapsed:.1f}s (< 30s)")
    assert ok, escaped


def test_8_determinism(acceptance, tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("HECKECERT_TIMESTAMP", raising=False)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    codes = [main(["verify", "all", "--seed", "7", "--out", str(path)]) for path in (a, b)]
    capsys.readouterr()
    same = a.read_bytes() == b.read_bytes()
    ok = codes == [0, 0] and same
    acceptance("8 determinism", ok, f"two 'verify all' runs exit {codes}, byte-identical={same}, "
                                    f"{len(a.read_bytes())} bytes")
    assert ok
