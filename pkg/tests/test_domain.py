import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from vmoext.domain import BUILTIN_DOMAINS, SampledDomain, disk, make_domain, slit_disk, square
from vmoext.dyadic import Box, DyadicCube


def seg(a, b, h):
    a, b = np.asarray(a, float), np.asarray(b, float)
    k = max(2, int(math.ceil(np.linalg.norm(b - a) / h)) + 1)
    t = np.linspace(0, 1, k)[:, None]
    return a + t * (b - a)


def arc(r, t0, t1, h, c=(0.0, 0.0)):
    k = max(2, int(math.ceil(r * abs(t1 - t0) / h)) + 1)
    t = np.linspace(t0, t1, k)
    return np.c_[c[0] + r * np.cos(t), c[1] + r * np.sin(t)]


def boundary_cloud(name, h):
    """Independent boundary samples with spacing <= h for the default shapes."""
    if name == "square":
        c = [(0, 0), (1, 0), (1, 1), (0, 1)]
        return np.vstack([seg(c[i], c[(i + 1) % 4], h) for i in range(4)])
    if name == "disk":
        return arc(1.0, 0, 2 * math.pi, h)
    if name == "l-shape":
        p = [(-1, -1), (1, -1), (1, 0), (0, 0), (0, 1), (-1, 1)]
        return np.vstack([seg(p[i], p[(i + 1) % 6], h) for i in range(6)])
    if name == "slit-disk":
        return np.vstack([arc(1.0, 0, 2 * math.pi, h), seg((0, 0), (1, 0), h)])
    if name == "annulus-sector":
        u = (0.0, 1.0)
        return np.vstack(
            [arc(1.0, 0, math.pi / 2, h), arc(0.5, 0, math.pi / 2, h), seg((0.5, 0), (1, 0), h), seg((0, 0.5), u, h)]
        )
    if name == "comb":
        W = 4 + 3 * 0.125
        parts = [seg((0, 1), (W, 1), h), seg((0, 0), (0, 1), h), seg((W, 0), (W, 1), h)]
        xs = [0.0]
        for k in range(3):
            x0 = (k + 1) + k * 0.125
            top = 1 - 0.25 * 0.5**k
            parts += [seg((x0, 0), (x0, top), h), seg((x0 + 0.125, 0), (x0 + 0.125, top), h), seg((x0, top), (x0 + 0.125, top), h)]
            xs += [x0, x0 + 0.125]
        xs.append(W)
        parts += [seg((xs[i], 0), (xs[i + 1], 0), h) for i in range(0, len(xs), 2)]
        return np.vstack(parts)
    raise KeyError(name)


def test_square_defaults():
    d = square()
    assert d.contains(np.array([[0.5, 0.5]]))[0]
    assert d.measure == 1.0


def test_disk_cube_distance_example():
    d = disk()
    lo, hi = d.dist_cube_to_complement(Box((-0.1, -0.1), 0.2))
    assert lo == pytest.approx(1 - 0.1 * math.sqrt(2), abs=1e-12)
    assert hi == pytest.approx(lo, abs=1e-12)


def test_corner_on_boundary_gives_zero():
    d = square()
    assert d.dist_cube_to_complement(DyadicCube(2, (0, 0)))[0] == 0.0
    c = math.sqrt(0.5)
    assert disk().dist_cube_to_complement(Box((c - 0.25, c - 0.25), 0.25)) == (0.0, 0.0)


def test_slit_distance_against_million_point_cloud():
    d = slit_disk()
    # a small cube just above the slit, clear of the circle
    S = Box((0.4, 0.03), 0.02)
    lo, hi = d.dist_cube_to_complement(S)
    assert lo == pytest.approx(0.03, abs=1e-12)
    cloud = boundary_cloud("slit-disk", 7e-6)
    assert len(cloud) >= 10**6
    tree = cKDTree(cloud)
    # distance from the closed box to the cloud via a dense sample of the box boundary
    g = np.linspace(0, 1, 401)
    edge = np.vstack([np.c_[g, 0 * g], np.c_[g, 0 * g + 1], np.c_[0 * g, g], np.c_[0 * g + 1, g]])
    pts = S.lo + S.side * edge
    dc, _ = tree.query(pts)
    assert abs(dc.min() - lo) <= 1e-5


@pytest.mark.parametrize("name", sorted(BUILTIN_DOMAINS))
def test_point_distance_against_cloud(name):
    d = make_domain(name)
    h = 2e-4
    tree = cKDTree(boundary_cloud(name, h))
    rng = np.random.default_rng(1)
    bb = d.bounding_box
    x = bb.lo + bb.side * rng.random((4000, 2))
    exact = d.dist_to_boundary(x)
    approx, _ = tree.query(x)
    assert np.all(approx >= exact - 1e-12)
    assert np.all(approx <= exact + h)


@pytest.mark.parametrize("name", sorted(BUILTIN_DOMAINS))
def test_membership_agrees_with_distance_bracket(name):
    d = make_domain(name)
    rng = np.random.default_rng(2)
    bb = d.bounding_box
    x = bb.lo + bb.side * rng.random((10**4, 2))
    inside = d.contains(x)
    lo, hi = d.dist_to_complement(x)
    assert np.all((lo > 0) == inside)
    assert np.all(lo <= hi)


@pytest.mark.parametrize("name", sorted(BUILTIN_DOMAINS))
def test_box_classification_against_sampling(name):
    d = make_domain(name)
    rng = np.random.default_rng(3)
    bb = d.bounding_box
    side = bb.side * 2.0 ** -rng.integers(4, 9, size=300)
    lo = bb.lo + (bb.side - side[:, None]) * rng.random((300, 2))
    inside, outside, dlo, dhi = d.classify_boxes(lo, side)
    assert not np.any(inside & outside)
    g = (np.arange(12) + 0.5) / 12
    grid = np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
    for i in range(300):
        mem = d.contains(lo[i] + side[i] * grid)
        if inside[i]:
            assert mem.all()
        if outside[i]:
            assert not mem.any()


def test_contains_cube_examples():
    d = disk()
    assert not d.contains_cube(d.bounding_box)
    assert d.contains_cube(Box((-1e-3, -1e-3), 2e-3))
    s = slit_disk()
    crossing = Box((0.5, -0.01), 0.02)
    g = np.linspace(0, 1, 41)
    pts = crossing.lo + crossing.side * np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
    assert not s.contains(pts).all()
    assert not s.contains_cube(crossing)


def test_dist_cube_outside_bbox_is_an_error():
    d = disk()
    with pytest.raises(ValueError):
        d.dist_cube_to_complement(Box((50.0, 50.0), 1.0))


@pytest.mark.parametrize("name", sorted(BUILTIN_DOMAINS))
def test_bounding_box_strictly_contains_closure(name):
    d = make_domain(name)
    bb = d.bounding_box
    a, b = (np.asarray(v) for v in d.extent)
    assert np.all(bb.lo < a) and np.all(bb.hi > b)
    assert bb.side >= 2 * d.diam
    q = bb.side / 8
    assert np.all(np.mod(bb.lo, q) == 0)
    assert d.root_level == 3 - round(math.log2(bb.side))


def test_unknown_domain_lists_names():
    with pytest.raises(KeyError, match="available"):
        make_domain("moebius")
    assert make_domain("slit_disk").name == "slit-disk"


def test_invalid_shape_parameters():
    with pytest.raises(ValueError):
        make_domain("annulus-sector", angle=4.0)
    with pytest.raises(ValueError):
        make_domain("comb", rooms=1)


def test_sampled_domain_brackets_exact_distance():
    h = 1e-3
    pts = arc(1.0, 0, 2 * math.pi, h)
    sd = SampledDomain(
        "sampled-disk",
        lambda x: (x**2).sum(axis=1) < 1,
        pts,
        spacing=h,
        extent=((-1, -1), (1, 1)),
        measure=math.pi,
        diam=2.0,
        inradius=1.0,
    )
    ref = disk()
    rng = np.random.default_rng(4)
    side = 2.0 ** -rng.integers(3, 7, size=200)
    lo = -1.2 + (2.4 - side[:, None]) * rng.random((200, 2))
    slo, shi = sd.boundary_dist(lo, side)
    exact, _ = ref.boundary_dist(lo, side)
    assert np.all(slo <= exact + 1e-12)
    assert np.all(shi >= exact - 1e-12)
    assert np.all(shi - slo <= h / 2 + 1e-12)
