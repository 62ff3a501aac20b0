import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vmoext.dyadic import (
    Box,
    DyadicCube,
    concentric_subcube,
    cube_from_json,
    cube_to_json,
    d2,
    dist,
    side_of,
    touches,
)


def cubes(dim=2, max_level=4, span=6):
    return st.builds(
        lambda lev, cs: DyadicCube(lev, tuple(cs)),
        st.integers(-1, max_level),
        st.lists(st.integers(-span, span), min_size=dim, max_size=dim),
    )


def frac_interval(c: DyadicCube, axis: int):
    s = Fraction(2) ** -c.level
    return c.coords[axis] * s, (c.coords[axis] + 1) * s


def oracle_touch(a: DyadicCube, b: DyadicCube) -> bool:
    """Closed-interval overlap on every axis in exact rationals."""
    if a == b:
        return False
    for k in range(a.n):
        a0, a1 = frac_interval(a, k)
        b0, b1 = frac_interval(b, k)
        if a1 < b0 or b1 < a0:
            return False
    return True


def oracle_gap(a: DyadicCube, b: DyadicCube):
    gaps = []
    for k in range(a.n):
        a0, a1 = frac_interval(a, k)
        b0, b1 = frac_interval(b, k)
        gaps.append(max(Fraction(0), b0 - a1, a0 - b1))
    return gaps


def test_touches_examples():
    a = DyadicCube(0, (0, 0))
    assert not touches(a, a)
    assert touches(a, DyadicCube(0, (1, 0)))
    # [0,1/2]^2 against [1/2,3/4] x [1/4,1/2]: shared edge piece
    assert touches(DyadicCube(1, (0, 0)), DyadicCube(2, (2, 1)))
    # closures meeting only at the corner (1/2, 1/2)
    assert touches(DyadicCube(1, (0, 0)), DyadicCube(2, (2, 2)))
    # one grid cell of the finer level in between
    assert not touches(DyadicCube(1, (0, 0)), DyadicCube(2, (3, 0)))


@given(cubes(), cubes())
def test_touches_matches_interval_oracle(a, b):
    assert touches(a, b) == oracle_touch(a, b)
    assert touches(a, b) == touches(b, a)


@given(cubes(dim=3, max_level=3, span=4), cubes(dim=3, max_level=3, span=4))
def test_touches_matches_oracle_3d(a, b):
    assert touches(a, b) == oracle_touch(a, b)


def test_dist_examples():
    a = DyadicCube(0, (0, 0))
    assert dist(a, DyadicCube(0, (1, 0))) == 0.0
    b = DyadicCube(0, (2, 0))
    assert dist(a, b) == 1.0 and dist(a, b, "linf") == 1.0
    c = DyadicCube(0, (2, 2))
    assert dist(a, c) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert dist(a, c, "linf") == 1.0
    with pytest.raises(ValueError):
        dist(a, c, "l7")


@given(cubes(), cubes())
def test_dist_matches_oracle_and_is_symmetric(a, b):
    g = oracle_gap(a, b)
    assert dist(a, b) == pytest.approx(math.sqrt(float(sum(x * x for x in g))), rel=1e-14, abs=0)
    assert dist(a, b, "linf") == float(max(g))
    assert dist(a, b) == dist(b, a)
    overlap = all(x == 0 for x in g)
    assert (dist(a, b) == 0) == overlap
    # box path agrees with the integer path
    assert dist(a.box(), b.box()) == pytest.approx(dist(a, b), rel=1e-14, abs=1e-15)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        touches(DyadicCube(0, (0, 0)), DyadicCube(0, (0, 0, 0)))


def test_d2_examples():
    a = DyadicCube(0, (0, 0))
    assert d2(a, a) == 1.0
    assert d2(a, DyadicCube(-1, (-1, 0))) == pytest.approx(2.0)  # side 2, touching
    assert d2(a, DyadicCube(0, (7, 0))) == pytest.approx(math.log2(5))


@given(cubes(), cubes())
def test_d2_properties(a, b):
    v = d2(a, b)
    assert v == d2(b, a)
    assert v >= 1.0
    assert (v == 1.0) == (a.level == b.level and dist(a, b) == 0)


def test_concentric_subcube_examples():
    S = Box((-2.0, -2.0), 4.0)
    assert concentric_subcube(S, 1.0) == S
    assert concentric_subcube(S, 0.25) == Box((-0.5, -0.5), 1.0)
    assert concentric_subcube(DyadicCube(0, (0, 0)), 2.0) == Box((-0.5, -0.5), 2.0)
    with pytest.raises(ValueError):
        concentric_subcube(S, 0.0)


@given(cubes(), st.sampled_from([0.25, 0.5, 1.0, 2.0]))
def test_concentric_preserves_center(S, factor):
    J = concentric_subcube(S, factor)
    assert np.array_equal(J.center, S.center)
    assert J.side == factor * S.side


@given(cubes())
def test_tree_navigation(c):
    kids = c.children()
    assert len(kids) == 2**c.n
    assert all(k.parent() == c for k in kids)
    assert all(c.contains_cube(k) for k in kids)
    assert sum(k.side**c.n for k in kids) == c.side**c.n
    assert c.ancestor(c.level - 2) == c.parent().parent()
    assert DyadicCube.containing(c.center, c.level) == c
    assert cube_from_json(cube_to_json(c)) == c


def test_side_of_is_exact():
    assert side_of(3) == 0.125
    assert side_of(-2) == 4.0


def test_box_validation():
    with pytest.raises(ValueError):
        Box((0.0, 0.0), 0.0)
    b = Box((0.0, 1.0), 2.0)
    assert b.volume == 4.0 and b.diam == pytest.approx(2 * math.sqrt(2))
    assert b.contains_box(Box((0.5, 1.5), 1.0))
    assert b.contains_points(np.array([[1.0, 2.0], [3.0, 2.0]])).tolist() == [True, False]
