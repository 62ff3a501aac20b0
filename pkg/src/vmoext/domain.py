"""Bounded domains given by membership and boundary-distance oracles.

Every domain answers two vectorised queries:

``contains(x)``
    membership of points in the open set.
``boundary_dist(lo, side)``
    a bracket ``(lower, upper)`` for the distance from the closed boxes
    ``lo + [0, side]^n`` to the boundary.  Points are boxes of side 0.

From these the cube-level predicates follow: a closed cube lies in the
domain iff its center does and it misses the boundary; it lies in the
exterior of the closure iff its center is outside and it misses the
boundary.  In both cases its distance to the complement (resp. to the
closure) is its distance to the boundary.

The built-in planar domains describe their boundary as a finite list of
segments and circular arcs, so all distances are closed-form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dyadic import Box, DyadicCube

__all__ = [
    "Domain",
    "BoxDomain",
    "BallDomain",
    "Segment",
    "Arc",
    "PlanarDomain",
    "SampledDomain",
    "square",
    "disk",
    "l_shape",
    "annulus_sector",
    "slit_disk",
    "comb",
    "BUILTIN_DOMAINS",
    "make_domain",
]

TWO_PI = 2.0 * math.pi


def _as_boxes(lo, side):
    lo = np.atleast_2d(np.asarray(lo, dtype=float))
    side = np.broadcast_to(np.asarray(side, dtype=float), (lo.shape[0],)).copy()
    return lo, side


class Domain:
    """Base class; subclasses provide ``contains`` and ``boundary_dist``."""

    name: str = "domain"
    dim: int = 2
    #: axis-aligned extent of the closure, ``(lower, upper)``
    extent: tuple[np.ndarray, np.ndarray]
    measure: float
    diam: float
    inradius: float
    exact: bool = True

    def contains(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def boundary_dist(self, lo: np.ndarray, side) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    # -- point queries -------------------------------------------------
    def dist_to_boundary(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        lo, _ = self.boundary_dist(x, 0.0)
        return lo

    def dist_to_complement(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Bracket for ``dist(x, complement)``; zero outside the domain."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        lo, hi = self.boundary_dist(x, 0.0)
        inside = self.contains(x)
        return np.where(inside, lo, 0.0), np.where(inside, hi, 0.0)

    # -- box queries ---------------------------------------------------
    def classify_boxes(self, lo, side):
        """Return ``(inside, outside, dist_lo, dist_hi)`` for closed boxes.

        ``inside``: box contained in the domain; ``outside``: box disjoint
        from the closure; ``dist_*`` bracket the distance to the boundary.
        """
        lo, side = _as_boxes(lo, side)
        dlo, dhi = self.boundary_dist(lo, side)
        centers = lo + 0.5 * side[:, None]
        cin = self.contains(centers)
        clear = dlo > 0
        return cin & clear, ~cin & clear, dlo, dhi

    def dist_cube_to_complement(self, S: DyadicCube | Box) -> tuple[float, float]:
        B = S.box()
        if not self.bounding_box.contains_box(B):
            raise ValueError(f"cube {S} is not inside the bounding box of {self.name}")
        inside, _, dlo, dhi = self.classify_boxes(B.lo[None, :], B.side)
        if not inside[0]:
            return 0.0, 0.0
        return float(dlo[0]), float(dhi[0])

    def dist_cube_to_closure(self, S: DyadicCube | Box) -> tuple[float, float]:
        B = S.box()
        _, outside, dlo, dhi = self.classify_boxes(B.lo[None, :], B.side)
        if not outside[0]:
            return 0.0, 0.0
        return float(dlo[0]), float(dhi[0])

    def contains_cube(self, S: DyadicCube | Box) -> bool:
        B = S.box()
        inside, _, _, _ = self.classify_boxes(B.lo[None, :], B.side)
        return bool(inside[0])

    # -- geometry ------------------------------------------------------
    @property
    def center(self) -> np.ndarray:
        a, b = self.extent
        return 0.5 * (np.asarray(a) + np.asarray(b))

    @property
    def bounding_box(self) -> Box:
        """Dyadic box of side ``2^p >= max(4 * width, 2 * diam)`` around the domain.

        The lower corner is snapped to multiples of ``side / 8`` so the box
        is tiled by ``8^n`` lattice cubes.
        """
        a, b = (np.asarray(v, dtype=float) for v in self.extent)
        width = float(np.max(b - a))
        p = math.ceil(math.log2(max(4.0 * width, 2.0 * self.diam)))
        side = math.ldexp(1.0, p)
        q = side / 8.0
        lower = np.round((0.5 * (a + b) - 0.5 * side) / q) * q
        return Box(tuple(lower.tolist()), side)

    @property
    def root_level(self) -> int:
        """Level of the lattice cubes tiling :attr:`bounding_box` (side/8)."""
        return 3 - int(round(math.log2(self.bounding_box.side)))

    def describe(self) -> dict:
        return {"name": self.name, "dim": self.dim, "params": dict(getattr(self, "params", {}))}


# ---------------------------------------------------------------------------
# n-dimensional convex built-ins


class BoxDomain(Domain):
    """Open axis-parallel cube ``(a, a + side)^n``."""

    def __init__(self, side: float = 1.0, origin: Sequence[float] | None = None, n: int = 2, name: str = "square"):
        self.dim = n
        self.a = np.zeros(n) if origin is None else np.asarray(origin, dtype=float)
        self.b = self.a + side
        self.side = float(side)
        self.name = name
        self.params = {"side": self.side, "origin": self.a.tolist()}
        self.extent = (self.a.copy(), self.b.copy())
        self.measure = self.side**n
        self.diam = math.sqrt(n) * self.side
        self.inradius = 0.5 * self.side

    def contains(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.all((x > self.a) & (x < self.b), axis=1)

    def boundary_dist(self, lo, side):
        lo, side = _as_boxes(lo, side)
        hi = lo + side[:, None]
        inner = np.minimum(lo - self.a, self.b - hi)
        inside = np.all(inner > 0, axis=1)
        gaps = np.maximum(0.0, np.maximum(self.a - hi, lo - self.b))
        outside = np.any(gaps > 0, axis=1)
        d = np.where(inside, inner.min(axis=1), np.where(outside, np.sqrt((gaps**2).sum(axis=1)), 0.0))
        return d, d


class BallDomain(Domain):
    """Open Euclidean ball."""

    def __init__(self, radius: float = 1.0, center: Sequence[float] | None = None, n: int = 2, name: str = "disk"):
        self.dim = n
        self.c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
        self.r = float(radius)
        self.name = name
        self.params = {"radius": self.r, "center": self.c.tolist()}
        self.extent = (self.c - self.r, self.c + self.r)
        self.measure = math.pi ** (n / 2) / math.gamma(n / 2 + 1) * self.r**n
        self.diam = 2 * self.r
        self.inradius = self.r

    def contains(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.sum((x - self.c) ** 2, axis=1) < self.r**2

    def boundary_dist(self, lo, side):
        lo, side = _as_boxes(lo, side)
        hi = lo + side[:, None]
        far = np.maximum(np.abs(lo - self.c), np.abs(hi - self.c))
        dmax = np.sqrt((far**2).sum(axis=1))
        gaps = np.maximum(0.0, np.maximum(lo - self.c, self.c - hi))
        dmin = np.sqrt((gaps**2).sum(axis=1))
        d = np.where(dmax < self.r, self.r - dmax, np.where(dmin > self.r, dmin - self.r, 0.0))
        return d, d


# ---------------------------------------------------------------------------
# planar piecewise boundaries


def _box_corners(lo, side):
    """(N, 4, 2) corners of planar boxes."""
    offs = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
    return lo[:, None, :] + side[:, None, None] * offs[None, :, :]


def _point_box_dist(p, lo, side):
    """Distance from a fixed point ``p`` to each box."""
    hi = lo + side[:, None]
    g = np.maximum(0.0, np.maximum(lo - p, p - hi))
    return np.sqrt((g**2).sum(axis=1))


@dataclass(frozen=True)
class Segment:
    p0: tuple[float, float]
    p1: tuple[float, float]

    def point_dist(self, q: np.ndarray) -> np.ndarray:
        p0, p1 = np.asarray(self.p0), np.asarray(self.p1)
        d = p1 - p0
        dd = float(d @ d)
        t = np.clip(((q - p0) @ d) / dd, 0.0, 1.0)
        foot = p0 + t[..., None] * d
        return np.sqrt(((q - foot) ** 2).sum(axis=-1))

    def intersects(self, lo, side) -> np.ndarray:
        p0, p1 = np.asarray(self.p0), np.asarray(self.p1)
        d = p1 - p0
        hi = lo + side[:, None]
        t0 = np.zeros(lo.shape[0])
        t1 = np.ones(lo.shape[0])
        ok = np.ones(lo.shape[0], dtype=bool)
        for k in range(2):
            if d[k] == 0.0:
                ok &= (lo[:, k] <= p0[k]) & (p0[k] <= hi[:, k])
            else:
                ta = (lo[:, k] - p0[k]) / d[k]
                tb = (hi[:, k] - p0[k]) / d[k]
                t0 = np.maximum(t0, np.minimum(ta, tb))
                t1 = np.minimum(t1, np.maximum(ta, tb))
        return ok & (t0 <= t1)

    def box_dist(self, lo, side) -> np.ndarray:
        corners = _box_corners(lo, side)
        d = self.point_dist(corners).min(axis=1)
        d = np.minimum(d, _point_box_dist(np.asarray(self.p0), lo, side))
        d = np.minimum(d, _point_box_dist(np.asarray(self.p1), lo, side))
        return np.where(self.intersects(lo, side), 0.0, d)


@dataclass(frozen=True)
class Arc:
    """Circular arc from angle ``a0`` counter-clockwise to ``a1`` (radians)."""

    center: tuple[float, float]
    radius: float
    a0: float = 0.0
    a1: float = TWO_PI

    @property
    def full(self) -> bool:
        return self.a1 - self.a0 >= TWO_PI

    def _in_range(self, theta):
        if self.full:
            return np.ones(np.shape(theta), dtype=bool)
        return np.mod(theta - self.a0, TWO_PI) <= (self.a1 - self.a0) + 1e-15

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        c = np.asarray(self.center)
        e0 = c + self.radius * np.array([math.cos(self.a0), math.sin(self.a0)])
        e1 = c + self.radius * np.array([math.cos(self.a1), math.sin(self.a1)])
        return e0, e1

    def point_dist(self, q: np.ndarray) -> np.ndarray:
        c = np.asarray(self.center)
        v = q - c
        rho = np.sqrt((v**2).sum(axis=-1))
        radial = np.abs(rho - self.radius)
        if self.full:
            return radial
        theta = np.arctan2(v[..., 1], v[..., 0])
        e0, e1 = self.endpoints()
        ends = np.minimum(np.sqrt(((q - e0) ** 2).sum(axis=-1)), np.sqrt(((q - e1) ** 2).sum(axis=-1)))
        return np.where(self._in_range(theta) & (rho > 0), radial, ends)

    def intersects(self, lo, side) -> np.ndarray:
        c = np.asarray(self.center)
        r = self.radius
        hi = lo + side[:, None]
        far = np.maximum(np.abs(lo - c), np.abs(hi - c))
        dmax = np.sqrt((far**2).sum(axis=1))
        g = np.maximum(0.0, np.maximum(lo - c, c - hi))
        dmin = np.sqrt((g**2).sum(axis=1))
        circle_hits = (dmin <= r) & (r <= dmax)
        if self.full:
            return circle_hits
        e0, e1 = self.endpoints()
        hit = np.zeros(lo.shape[0], dtype=bool)
        for e in (e0, e1):
            hit |= np.all((lo <= e) & (e <= hi), axis=1)
        # crossings of the circle with the four box edges
        for k in range(2):
            j = 1 - k
            for fixed in (lo[:, k], hi[:, k]):
                disc = r * r - (fixed - c[k]) ** 2
                ok = disc >= 0
                root = np.sqrt(np.where(ok, disc, 0.0))
                for sgn in (-1.0, 1.0):
                    other = c[j] + sgn * root
                    on_edge = ok & (lo[:, j] <= other) & (other <= hi[:, j])
                    vk = fixed - c[k]
                    vj = other - c[j]
                    theta = np.arctan2(vj, vk) if k == 0 else np.arctan2(vk, vj)
                    hit |= on_edge & self._in_range(theta)
        return circle_hits & hit

    def box_dist(self, lo, side) -> np.ndarray:
        c = np.asarray(self.center)
        corners = _box_corners(lo, side)
        d = self.point_dist(corners).min(axis=1)
        if not self.full:
            e0, e1 = self.endpoints()
            d = np.minimum(d, _point_box_dist(e0, lo, side))
            d = np.minimum(d, _point_box_dist(e1, lo, side))
        hi = lo + side[:, None]
        # feet of the perpendiculars from the center onto the edge lines
        for k in range(2):
            j = 1 - k
            for fixed in (lo[:, k], hi[:, k]):
                foot = np.empty_like(lo)
                foot[:, k] = fixed
                foot[:, j] = c[j]
                within = (lo[:, j] <= c[j]) & (c[j] <= hi[:, j])
                fd = self.point_dist(foot)
                d = np.where(within, np.minimum(d, fd), d)
        return np.where(self.intersects(lo, side), 0.0, d)


class PlanarDomain(Domain):
    """Planar domain with a boundary made of segments and arcs."""

    def __init__(
        self,
        name: str,
        pieces: Sequence[Segment | Arc],
        contains: Callable[[np.ndarray], np.ndarray],
        extent: tuple[Sequence[float], Sequence[float]],
        measure: float,
        diam: float,
        inradius: float,
        params: dict | None = None,
    ):
        self.name = name
        self.dim = 2
        self.pieces = tuple(pieces)
        self._contains = contains
        self.extent = (np.asarray(extent[0], dtype=float), np.asarray(extent[1], dtype=float))
        self.measure = float(measure)
        self.diam = float(diam)
        self.inradius = float(inradius)
        self.params = dict(params or {})

    def contains(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.asarray(self._contains(x), dtype=bool)

    def boundary_dist(self, lo, side):
        lo, side = _as_boxes(lo, side)
        d = np.full(lo.shape[0], np.inf)
        for piece in self.pieces:
            d = np.minimum(d, piece.box_dist(lo, side))
        return d, d


# ---------------------------------------------------------------------------
# membership-only domains


class SampledDomain(Domain):
    """Domain known through membership plus a boundary point cloud.

    ``spacing`` must bound the gap between consecutive boundary samples, so
    every boundary point lies within ``spacing / 2`` of a sample.  Distances
    are then bracketed by ``[d_sample - spacing / 2, d_sample]``.
    """

    exact = False

    def __init__(self, name, contains, boundary_points, spacing, extent, measure, diam, inradius):
        from scipy.spatial import cKDTree

        self.name = name
        self._contains = contains
        self.points = np.asarray(boundary_points, dtype=float)
        self.dim = self.points.shape[1]
        self.spacing = float(spacing)
        self._tree = cKDTree(self.points)
        self.extent = (np.asarray(extent[0], dtype=float), np.asarray(extent[1], dtype=float))
        self.measure = float(measure)
        self.diam = float(diam)
        self.inradius = float(inradius)
        self.params = {"samples": len(self.points), "spacing": self.spacing}

    def contains(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.asarray(self._contains(x), dtype=bool)

    def boundary_dist(self, lo, side):
        lo, side = _as_boxes(lo, side)
        centers = lo + 0.5 * side[:, None]
        half_diag = 0.5 * math.sqrt(self.dim) * side
        dc, _ = self._tree.query(centers)
        d = np.empty(lo.shape[0])
        for i in range(lo.shape[0]):
            idx = self._tree.query_ball_point(centers[i], dc[i] + half_diag[i] + 1e-12)
            p = self.points[idx]
            g = np.maximum(0.0, np.maximum(lo[i] - p, p - (lo[i] + side[i])))
            d[i] = np.sqrt((g**2).sum(axis=1)).min()
        return np.maximum(0.0, d - 0.5 * self.spacing), d


# ---------------------------------------------------------------------------
# built-in factories


def square(side: float = 1.0, origin: Sequence[float] | None = None, n: int = 2) -> BoxDomain:
    return BoxDomain(side=side, origin=origin, n=n, name="square")


def disk(radius: float = 1.0, center: Sequence[float] | None = None, n: int = 2) -> BallDomain:
    return BallDomain(radius=radius, center=center, n=n, name="disk")


def l_shape(size: float = 1.0) -> PlanarDomain:
    """``(-s, s)^2`` with the closed quadrant ``[0, s]^2`` removed."""
    s = float(size)
    pts = [(-s, -s), (s, -s), (s, 0.0), (0.0, 0.0), (0.0, s), (-s, s)]
    pieces = [Segment(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    def contains(x):
        inside = np.all(np.abs(x) < s, axis=1)
        return inside & ~((x[:, 0] >= 0) & (x[:, 1] >= 0))

    return PlanarDomain(
        "l-shape", pieces, contains, ((-s, -s), (s, s)),
        measure=3 * s * s, diam=2 * math.sqrt(2) * s, inradius=s / 2, params={"size": s},
    )


def annulus_sector(r_inner: float = 0.5, r_outer: float = 1.0, angle: float = math.pi / 2) -> PlanarDomain:
    """``{r_inner < |x| < r_outer, 0 < arg x < angle}`` with ``angle <= pi``."""
    if not 0 < angle <= math.pi:
        raise ValueError("annulus_sector needs 0 < angle <= pi")
    if not 0 < r_inner < r_outer:
        raise ValueError("annulus_sector needs 0 < r_inner < r_outer")
    u = (math.cos(angle), math.sin(angle))
    pieces = [
        Arc((0.0, 0.0), r_outer, 0.0, angle),
        Arc((0.0, 0.0), r_inner, 0.0, angle),
        Segment((r_inner, 0.0), (r_outer, 0.0)),
        Segment((r_inner * u[0], r_inner * u[1]), (r_outer * u[0], r_outer * u[1])),
    ]

    def contains(x):
        r2 = (x**2).sum(axis=1)
        theta = np.arctan2(x[:, 1], x[:, 0])
        return (r2 > r_inner**2) & (r2 < r_outer**2) & (theta > 0) & (theta < angle)

    # extent of the closed sector: endpoints plus axis extremes inside the span
    cand = [(r * math.cos(a), r * math.sin(a)) for r in (r_inner, r_outer) for a in (0.0, angle)]
    for a in (math.pi / 2, math.pi):
        if a <= angle:
            cand.append((r_outer * math.cos(a), r_outer * math.sin(a)))
    cand = np.array(cand)
    lo, hi = cand.min(axis=0), cand.max(axis=0)
    chord = max(
        math.dist(p, q) for p in cand for q in cand
    )
    return PlanarDomain(
        "annulus-sector", pieces, contains, (lo, hi),
        measure=0.5 * angle * (r_outer**2 - r_inner**2),
        diam=max(chord, 2 * r_outer * math.sin(angle / 2), r_outer - r_inner),
        inradius=_sector_inradius(r_inner, r_outer, angle),
        params={"r_inner": r_inner, "r_outer": r_outer, "angle": angle},
    )


def _sector_inradius(r1, r2, angle):
    # largest disk: on the bisector, touching both arcs or both rays
    best = 0.0
    for r in np.linspace(r1, r2, 2001):
        best = max(best, min(r - r1, r2 - r, r * math.sin(angle / 2)))
    return best


def slit_disk(radius: float = 1.0) -> PlanarDomain:
    """Open disk minus the closed radius ``[0, radius] x {0}``."""
    R = float(radius)
    pieces = [Arc((0.0, 0.0), R), Segment((0.0, 0.0), (R, 0.0))]

    def contains(x):
        inside = (x**2).sum(axis=1) < R * R
        on_slit = (x[:, 1] == 0.0) & (x[:, 0] >= 0.0)
        return inside & ~on_slit

    return PlanarDomain(
        "slit-disk", pieces, contains, ((-R, -R), (R, R)),
        measure=math.pi * R * R, diam=2 * R, inradius=R / 2, params={"radius": R},
    )


def comb(rooms: int = 4, wall: float = 0.125, first_gap: float = 0.25, ratio: float = 0.5) -> PlanarDomain:
    """Unit-height rooms in a row separated by walls; corridor widths shrink.

    Room ``k`` and ``k+1`` communicate through a gap of height
    ``first_gap * ratio**k`` at the top of the wall between them.
    """
    if rooms < 2:
        raise ValueError("comb needs at least two rooms")
    W = rooms + (rooms - 1) * wall
    walls = []
    for k in range(rooms - 1):
        x0 = (k + 1) + k * wall
        g = first_gap * ratio**k
        walls.append((x0, x0 + wall, 1.0 - g))
    pieces = [Segment((0.0, 1.0), (W, 1.0)), Segment((0.0, 0.0), (0.0, 1.0)), Segment((W, 0.0), (W, 1.0))]
    xs = [0.0]
    for x0, x1, top in walls:
        xs += [x0, x1]
        pieces += [Segment((x0, 0.0), (x0, top)), Segment((x1, 0.0), (x1, top)), Segment((x0, top), (x1, top))]
    xs.append(W)
    for i in range(0, len(xs), 2):
        pieces.append(Segment((xs[i], 0.0), (xs[i + 1], 0.0)))

    def contains(x):
        inside = (x[:, 0] > 0) & (x[:, 0] < W) & (x[:, 1] > 0) & (x[:, 1] < 1)
        for x0, x1, top in walls:
            inside &= ~((x[:, 0] >= x0) & (x[:, 0] <= x1) & (x[:, 1] <= top))
        return inside

    area = W - sum((x1 - x0) * top for x0, x1, top in walls)
    return PlanarDomain(
        "comb", pieces, contains, ((0.0, 0.0), (W, 1.0)),
        measure=area, diam=math.hypot(W, 1.0), inradius=0.5,
        params={"rooms": rooms, "wall": wall, "first_gap": first_gap, "ratio": ratio},
    )


BUILTIN_DOMAINS: dict[str, Callable[..., Domain]] = {
    "square": square,
    "disk": disk,
    "l-shape": l_shape,
    "annulus-sector": annulus_sector,
    "slit-disk": slit_disk,
    "comb": comb,
}


def make_domain(name: str, **params) -> Domain:
    key = name.replace("_", "-").lower()
    if key not in BUILTIN_DOMAINS:
        raise KeyError(f"unknown domain {name!r}; available: {', '.join(sorted(BUILTIN_DOMAINS))}")
    return BUILTIN_DOMAINS[key](**params)
