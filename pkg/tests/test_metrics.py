import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import decomposition, fw_table
from vmoext.dyadic import concentric_subcube, d2, touches
from vmoext.functions import make_function
from vmoext.metrics import (
    DisconnectedError,
    check_chain_average_bound,
    d1,
    d1_from,
    d2_indices,
    distance_table,
    estimate_kappa,
    straddles_slit,
)
from vmoext.oscillation import modulus


def test_d1_trivial_cases():
    dec = decomposition("disk", 6)
    r = d1(dec, 5, 5)
    assert r.length == 0 and r.chain == (5,)
    j = int(dec.neighbors(5)[0])
    assert d1(dec, 5, j).length == 1
    with pytest.raises(IndexError):
        d1(dec, 0, dec.n_E)


@pytest.mark.parametrize("name", ["square", "disk", "l-shape", "slit-disk"])
def test_bfs_equals_floyd_warshall(name):
    dec = decomposition(name, 6)
    assert dec.n_E <= 2000
    fw = fw_table(name, 6)
    bfs = distance_table(dec, np.arange(dec.n_E))
    assert np.array_equal(bfs, fw.astype(np.int64))
    for s in (0, dec.n_E // 2, dec.n_E - 1):
        assert np.array_equal(d1_from(dec, s), bfs[s])


def test_antipodal_boundary_layer_pair():
    dec = decomposition("disk", 6)
    fine = np.nonzero(dec.E_levels == dec.E_levels.max())[0]
    c = dec.E_centers()[fine]
    i = int(fine[np.argmin(c[:, 0])])
    j = int(fine[np.argmax(c[:, 0])])
    fw = fw_table("disk", 6)
    res = d1(dec, i, j)
    assert res.length == fw[i, j]
    assert all(touches(dec.cube(a), dec.cube(b)) for a, b in zip(res.chain, res.chain[1:]))
    assert len(res.chain) == res.length + 1


def test_metric_axioms_exhaustive_on_small_graph():
    dec = decomposition("square", 4)
    D = distance_table(dec, np.arange(dec.n_E))
    assert np.array_equal(D, D.T)
    assert np.all(np.diag(D) == 0)
    # triangle inequality for every triple
    for j in range(dec.n_E):
        assert np.all(D <= D[:, j : j + 1] + D[j : j + 1, :])


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_chain_cube_bound(a, b):
    dec = decomposition("l-shape", 6)
    i, j = a % dec.n_E, b % dec.n_E
    res = d1(dec, i, j)
    assert dec.E_side[res.largest_cube] <= 4.0**res.length * dec.E_side[i]
    assert dec.E_side[res.largest_cube] == dec.E_side[list(res.chain)].max()


def test_d2_indices_matches_scalar():
    dec = decomposition("disk", 5)
    rng = np.random.default_rng(0)
    i, j = rng.integers(0, dec.n_E, (2, 50))
    v = d2_indices(dec, i, j)
    for k in range(50):
        assert v[k] == pytest.approx(d2(dec.cube(int(i[k])), dec.cube(int(j[k]))), rel=1e-12)


def test_kappa_stratified_is_a_lower_bound_of_exhaustive():
    dec = decomposition("l-shape", 5)
    ex = estimate_kappa(dec, sampler="exhaustive")
    st_ = estimate_kappa(dec, pairs=512, seed=3)
    assert st_.kappa_hat <= ex.kappa_hat + 1e-12
    assert st_.kappa_hat >= 0.8 * ex.kappa_hat
    i, j = ex.pair
    assert ex.kappa_hat == pytest.approx(d1(dec, i, j).length / d2(dec.cube(i), dec.cube(j)))


def test_kappa_is_seeded_and_diagonal_is_zero():
    dec = decomposition("disk", 6)
    a = estimate_kappa(dec, seed=7)
    b = estimate_kappa(dec, seed=7)
    assert a == b
    assert a.kappa_hat > 0
    assert d1(dec, 3, 3).length / float(d2_indices(dec, 3, 3)) == 0.0
    with pytest.raises(ValueError):
        estimate_kappa(dec, sampler="magic")


def test_slit_witness_straddles():
    dec = decomposition("slit-disk", 7)
    k = estimate_kappa(dec)
    assert straddles_slit(dec, *k.pair)


def test_disconnected_comb_is_reported():
    dec = decomposition("comb", 6)
    with pytest.raises(DisconnectedError):
        d1_from(dec, 0)


def test_chain_bound_constant_function():
    dec = decomposition("disk", 6)
    f = make_function("const:c=3", dec.domain)
    rep = check_chain_average_bound(dec, f, [(0, 10), (4, 99)], omega=lambda t: 0.0)
    assert rep.max_chain_constant == 0.0 and rep.cube_bound_ok


def chain_constant(level):
    dec = decomposition("disk", level)
    f = make_function("coord1", dec.domain)
    t = dec.domain.bounding_box.side * 2.0 ** -np.arange(12, -1, -1)
    curve = modulus(f, dec, t)
    rng = np.random.default_rng(11)
    pairs = rng.integers(0, dec.n_E, (50, 2))
    rep = check_chain_average_bound(dec, f, pairs, curve.value)
    assert rep.cube_bound_ok
    return rep.max_chain_constant


def test_chain_bound_coord1_stable_across_resolutions():
    c6, c7 = chain_constant(6), chain_constant(7)
    assert math.isfinite(c6) and c6 > 0
    assert abs(c7 / c6 - 1) <= 0.3


def test_nested_bound_logdist():
    dec = decomposition("disk", 6)
    f = make_function("logdist", dec.domain)
    t = dec.domain.bounding_box.side * 2.0 ** -np.arange(12, -1, -1)
    curve = modulus(f, dec, t)
    nested = [(dec.cube(i).box(), concentric_subcube(dec.cube(i), 0.25)) for i in range(0, dec.n_E, 97)]
    rep = check_chain_average_bound(dec, f, [], curve.value, nested=nested)
    assert 0 < rep.max_nested_constant < 10
