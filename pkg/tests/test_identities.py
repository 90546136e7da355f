import pytest
from hypothesis import given, settings, strategies as st

from heckecert import identities as ids
from heckecert.identities import ConfigError, IdentityReport, default_grid, grid_points, verify_identity, verify_points

PRIMES = st.sampled_from([3, 5, 7, 11, 13])


@pytest.mark.parametrize("name", ["c-b", "c-c", "c-h", "c-i", "c-j", "c-k"])
def test_small_default_grids_pass(name):
    rep = verify_identity(name)
    assert rep.passed and rep.checked > 0


@settings(max_examples=200)
@given(PRIMES, st.integers(1, 3), st.integers(-8, 8), st.integers(1, 120), st.integers(1, 3))
def test_ca_random(p, m, n, u, shift):
    assert ids.check_ca(p, m, n, u, shift)[0]


@settings(max_examples=200)
@given(PRIMES, st.integers(1, 500))
def test_cb_random(p, u):
    assert ids.check_cb(p, u)[0]


@settings(max_examples=200)
@given(PRIMES, st.integers(1, 300), st.integers(0, 30))
def test_cd_random(p, u, n):
    assert ids.check_cd(p, u, n)[0]


@settings(max_examples=200)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), st.integers(0, 40))
def test_ce_random(b, l, n, w, extra):
    if l < w:
        return
    assert ids.check_ce(b, l, n, w, (b + l) * n + extra)[0]


@settings(max_examples=100)
@given(st.integers(-10, 10), st.integers(0, 6), st.integers(0, 6))
def test_cf_random(t, l, w):
    assert ids.check_cf(t, l, w)[0]


@settings(max_examples=200)
@given(st.sampled_from([3, 5, 7]), st.integers(0, 80), st.integers(0, 10), st.integers(0, 10), st.integers(0, 10))
def test_cg_random(p, u, m, l, w):
    if u + l >= m + w:
        assert ids.check_cg(p, u, m, l, w)[0]


def test_ca_period_is_sharp():
    # a shift by (p-1)p^(m-1) preserves M mod p^m; a shift by (p-1)p^(m-2) does not always
    diffs = [ids.bigM(u, 0, 5) - ids.bigM(u + 4, 0, 5) for u in range(1, 30)]
    assert any(d % 25 for d in diffs)
    assert all(ids.check_ca(5, 2, 0, u, 1)[0] for u in range(1, 30))


def test_grid_validation():
    with pytest.raises(ConfigError):
        verify_identity("c-z")
    with pytest.raises(ConfigError):
        grid_points("c-b", {"p": [5]})
    with pytest.raises(ConfigError):
        grid_points("c-b", {"p": [4], "u": [1]})
    with pytest.raises(ConfigError):
        grid_points("c-b", {"p": [5], "u": [1.5]})


def test_side_conditions_skip_points():
    pts, skipped = grid_points("c-b", {"p": [5], "u": [0, 1, 2]})
    assert len(pts) == 2 and skipped == 1


def test_report_detects_counterexample():
    rep = verify_points("c-k", [{"i": 0, "u": 1, "v": 1}])
    assert rep.passed
    bad = ids.IDENTITIES["c-k"]
    ids.IDENTITIES["c-k"] = ids.IdentitySpec("c-k", bad.params, lambda **kw: (False, "forced"), bad.condition, False)
    try:
        rep = verify_points("c-k", [{"i": 0, "u": 1, "v": 1}])
    finally:
        ids.IDENTITIES["c-k"] = bad
    assert not rep.passed and rep.first_counterexample["detail"] == "forced"


def test_merge_is_order_independent():
    pts, _ = grid_points("c-j", default_grid("c-j"))
    a = verify_points("c-j", pts[:50])
    b = verify_points("c-j", pts[50:])
    m1, m2 = IdentityReport.merge([a, b]), IdentityReport.merge([b, a])
    assert m1.to_dict() == m2.to_dict()
    assert m1.to_dict() == verify_points("c-j", pts).to_dict()
