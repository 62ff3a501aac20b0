import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vmoext.bump import (
    S0,
    BumpSpec,
    bump_family,
    bump_modulus_bound,
    bump_value,
    bump_values,
    measure_bump_modulus,
    plateau,
    support,
    support_margin_of,
)
from vmoext.dyadic import Box, DyadicCube
from vmoext.oscillation import FieldOracle, modulus_from_family, truncate, CubeFamily


def test_value_examples():
    for mu in (1, 2, 5):
        spec = BumpSpec(S0, mu)
        assert bump_value(spec, [0.0, 0.0]) == 1.0
        # distance 2^-mu from the left face
        assert bump_value(spec, [-2 + 2.0**-mu, 0.0]) == pytest.approx(0.0, abs=1e-15)
        assert bump_value(spec, [-1.5, 0.0]) == pytest.approx(1 - 1 / mu)
        assert bump_value(spec, [3.0, 0.0]) == 0.0


def test_spec_validation():
    with pytest.raises(ValueError):
        BumpSpec(S0, 0)
    with pytest.raises(ValueError):
        BumpSpec(S0, 1.5)
    assert BumpSpec(DyadicCube(0, (0, 0)), 2).S == Box((0.0, 0.0), 1.0)


@pytest.mark.parametrize("mu", [1, 2, 3, 6, 10])
def test_plateau_and_support_exactly(mu):
    spec = BumpSpec(Box((1.0, -3.0), 0.5), mu)
    rng = np.random.default_rng(mu)
    J = plateau(spec)
    x = J.lo + J.side * rng.random((1000, 2))
    assert np.all(bump_value(spec, x) == 1.0)
    K = support(spec)
    S = spec.S
    # points in the strip between K and the boundary, next to each face
    margin = float(support_margin_of(S.side, mu))
    u = rng.random(1000) * S.side
    d = rng.random(1000) * margin
    face = rng.integers(0, 4, 1000)
    y = np.where(
        (face < 2)[:, None],
        np.c_[np.where(face == 0, d, S.side - d), u],
        np.c_[u, np.where(face == 2, d, S.side - d)],
    ) + S.lo
    assert not K.contains_points(y).any() or np.all(np.isclose(np.minimum(y - S.lo, S.hi - y).min(1), margin))
    assert np.all(bump_value(spec, y) == 0.0)
    assert float((K.lo - S.lo)[0]) == pytest.approx(float(support_margin_of(S.side, mu)))


def test_support_margin_examples():
    assert support_margin_of(1.0, 1) == 1 / 8
    assert support_margin_of(0.5, 2) == 1 / 32


@given(
    st.floats(-3, 3),
    st.floats(-3, 3),
    st.integers(-3, 3),
    st.integers(1, 10),
    st.lists(st.floats(0.001, 0.999), min_size=2, max_size=2),
)
def test_scale_equivariance(cx, cy, k, mu, u):
    side = 2.0**k
    S = Box.centered((cx, cy), side)
    x = S.lo + side * np.asarray(u)
    y = 4 * (x - S.center) / side
    assert bump_value(BumpSpec(S, mu), x) == pytest.approx(bump_value(BumpSpec(S0, mu), y), abs=1e-12)


@given(st.integers(1, 8), st.lists(st.floats(-2, 2), min_size=2, max_size=2))
def test_range_and_monotone_in_mu(mu, p):
    a = bump_value(BumpSpec(S0, mu), p)
    b = bump_value(BumpSpec(S0, mu + 1), p)
    assert 0.0 <= a <= 1.0
    assert b >= a - 1e-15


def test_rowwise_evaluation():
    lo = np.array([[0.0, 0.0], [10.0, 10.0]])
    x = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert bump_values(lo, np.array([1.0, 1.0]), np.array([2, 2]), x).tolist() == [1.0, 0.0]


def test_bound_examples():
    spec = BumpSpec(S0, 3)
    assert bump_modulus_bound(spec, 0.0, 1.5) == 0.0
    t0 = 4.0 * 2.0 ** (-3 - 4)
    for t in (t0, 2 * t0, 100.0):
        assert bump_modulus_bound(spec, t, 1.5) == pytest.approx(1.5 / 6)
    assert bump_modulus_bound(spec, t0 / 2, 1.5) < 1.5 / 6
    with pytest.raises(ValueError):
        bump_modulus_bound(spec, -1.0, 1.0)


def test_probe_family_lies_in_the_cube():
    spec = BumpSpec(S0, 4)
    lo, side = bump_family(spec)
    assert np.all(lo >= S0.lo) and np.all(lo + side[:, None] <= S0.hi + 1e-12)
    assert side.min() < 4 * 2.0 ** -(4 + 4)


def test_bump_is_a_truncated_log_profile():
    mu = 3
    spec = BumpSpec(S0, mu)

    def raw(x):
        d = np.minimum(x - S0.lo, S0.hi - x).min(axis=1)
        with np.errstate(divide="ignore"):
            return 1 - np.log2(1.0 / np.maximum(d, 1e-300)) / mu

    prof = FieldOracle(raw, "profile")
    x = S0.lo + 4 * np.random.default_rng(0).random((2000, 2))
    assert np.allclose(truncate(prof, 0.0, 1.0)(x), bump_value(spec, x))
    lo, side = bump_family(spec)
    fam = CubeFamily(lo, side, np.zeros(len(side), int), np.ones(len(side), bool), 0, ("probe",))
    t = 4 * 2.0 ** -np.arange(10, -1, -1.0)
    cut = modulus_from_family(truncate(prof, 0.0, 1.0), fam, t)
    full = modulus_from_family(prof, fam, t)
    ok = ~full.absent
    assert np.all(cut.values[ok] <= full.values[ok] + 2 / (4 * 16**2))


def test_measured_modulus_is_order_one_over_mu():
    t = 4 * 2.0 ** -np.arange(14, -1, -1.0)
    sups = [mu * measure_bump_modulus(BumpSpec(S0, mu), t).sup for mu in (2, 4, 8)]
    assert max(sups) / min(sups) < 3
