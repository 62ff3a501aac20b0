import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import decomposition
from vmoext.adversarial import (
    DELTA_PRIME_SUP,
    adversarial_norm,
    build_adversarial,
    cutoff_delta,
    cutoff_delta_prime,
    hypothesis_checks,
    plateau_d2,
    random_pairs,
    ratio_to_d2,
    resolved_family,
    separation,
    uniform_bmo_check,
)
from vmoext.dyadic import concentric_subcube, d2
from vmoext.metrics import d1


def test_delta_examples():
    assert cutoff_delta(0.5) == 0.0
    assert cutoff_delta(1.0) == 1.0
    assert cutoff_delta(0.75) == 0.5
    assert cutoff_delta(0.1) == 0.0 and cutoff_delta(7.0) == 1.0
    assert cutoff_delta_prime(0.75) == DELTA_PRIME_SUP


@given(st.floats(0, 3), st.floats(0, 3))
def test_delta_is_monotone_and_bounded(a, b):
    lo, hi = min(a, b), max(a, b)
    assert 0.0 <= cutoff_delta(lo) <= cutoff_delta(hi) <= 1.0
    assert 0.0 <= cutoff_delta_prime(a) <= DELTA_PRIME_SUP


@given(st.floats(0.05, 2.0))
def test_delta_derivative_matches_difference_quotient(t):
    h = 1e-6
    num = (cutoff_delta(t + h) - cutoff_delta(t - h)) / (2 * h)
    assert num == pytest.approx(cutoff_delta_prime(t), abs=1e-4)


@pytest.fixture(scope="module")
def disk6():
    return decomposition("disk", 6)


def test_build_examples(disk6):
    fld = build_adversarial(disk6, 3, 400)
    A = fld.d1_pair
    assert A == d1(disk6, 3, 400).length
    assert fld.lambdas[3] == 0.0
    assert fld.lambdas[400] == A
    far = fld.d1_from_s1 >= 2 * (1 + A) - 1
    assert np.all(fld.lambdas[far] == 0.0)
    assert np.array_equal(fld.mus, 1 + fld.d1_from_s1)
    with pytest.raises(ValueError):
        build_adversarial(disk6, 5, 5)


def test_field_values_are_bumps(disk6):
    fld = build_adversarial(disk6, 3, 400)
    c = disk6.E_centers()
    assert np.array_equal(fld(c), fld.lambdas)
    assert np.all(fld(np.array([[5.0, 5.0], [1.0, 0.0]])) == 0.0)


def test_adjacent_separation_is_one(disk6):
    j = int(disk6.neighbors(10)[0])
    assert separation(build_adversarial(disk6, 10, j)) == pytest.approx(1.0, abs=1e-12)


def test_separation_equals_d1(disk6):
    for s1, s2 in random_pairs(disk6, 20, seed=4):
        fld = build_adversarial(disk6, s1, s2)
        assert abs(separation(fld) - fld.d1_pair) <= 1e-9


def test_hypotheses_hold_exactly():
    for name in ("disk", "slit-disk"):
        dec = decomposition(name, 6)
        for s1, s2 in random_pairs(dec, 5, seed=1):
            chk = hypothesis_checks(build_adversarial(dec, s1, s2))
            assert chk["chain_vs_log_ratio"]
            assert chk["mu_adjacent_le_1"]
            assert chk["lambda_over_mu_le_delta_sup"]
            assert chk["adjacent_lambda_le_7"]
            assert chk["lambda_s1"] == 0.0


def test_plateau_distance(disk6):
    fld = build_adversarial(disk6, 3, 400)
    J1 = concentric_subcube(disk6.cube(3), 0.25)
    J2 = concentric_subcube(disk6.cube(400), 0.25)
    assert plateau_d2(fld) == d2(J1, J2)
    assert ratio_to_d2(fld) == pytest.approx(fld.d1_pair / d2(J1, J2))


def test_resolved_family_stays_in_whitney_cubes(disk6):
    fam = resolved_family(disk6)
    assert len(fam) > disk6.n_E
    rng = np.random.default_rng(0)
    k = rng.integers(0, len(fam), 200)
    pts = fam.lo[k] + fam.side[k, None] * rng.random((200, 2))
    assert np.all(disk6.E_index.locate(pts) >= 0)


def test_uniform_report(disk6):
    pairs = random_pairs(disk6, 6, seed=2) + [(7, 7)]
    rep = uniform_bmo_check(disk6, pairs)
    assert rep.norms[-1] == 0.0 and rep.d1[-1] == 0
    assert np.all(rep.norms[:-1] > 0)
    assert np.allclose(rep.separations[:-1], rep.d1[:-1], atol=1e-9)
    js = rep.to_json()
    assert len(js["pairs"]) == 7 and js["max_norm"] == rep.max_norm
    assert rep.spread >= 1.0


def test_norm_bounded_while_separation_grows(disk6):
    fam = resolved_family(disk6)
    rng_pairs = sorted(random_pairs(disk6, 8, seed=9), key=lambda p: d1(disk6, *p).length)
    fl = [build_adversarial(disk6, *p) for p in rng_pairs]
    norms = [adversarial_norm(f, fam) for f in fl]
    # separation grows with d1 while norms stay below a fixed multiple of the smallest
    assert fl[-1].d1_pair > fl[0].d1_pair
    assert max(norms) <= 3 * min(norms)
