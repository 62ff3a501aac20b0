"""Mean oscillation, moduli of mean oscillation and concave majorants.

Averages use the midpoint rule on an ``m^n`` subgrid of each cube.  The
modulus ``omega(f, t)`` is a supremum over all cubes of side ``< t``; here it
is a maximum over a finite, seeded family of boxes, hence a lower bound.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .domain import Domain
from .dyadic import Box, side_of

__all__ = [
    "EvaluationError",
    "FieldOracle",
    "ModulusCurve",
    "CubeFamily",
    "ConcaveMajorant",
    "threads",
    "quadrature_nodes",
    "cube_average",
    "mean_oscillation",
    "oscillations",
    "domain_family",
    "region_family",
    "modulus",
    "modulus_from_family",
    "bmo_norm",
    "truncate",
    "least_concave_majorant",
    "is_vmo",
]

DEFAULT_M = 16
SUBCUBES, INTERIOR = "subcubes", "interior"


class EvaluationError(ValueError):
    """The field returned NaN at a quadrature node."""


def threads() -> int:
    try:
        return max(1, int(os.environ.get("VMOEXT_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class FieldOracle:
    """A real function on points of shape ``(N, n)`` with optional exact averages."""

    fn: Callable[[np.ndarray], np.ndarray]
    name: str = "f"
    m: int = DEFAULT_M
    exact_average: Optional[Callable[[Box], float]] = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.asarray(self.fn(x), dtype=float).reshape(x.shape[0])

    def scaled(self, a: float, name: str | None = None) -> "FieldOracle":
        return FieldOracle(lambda x: a * self.fn(x), name or f"{a}*{self.name}", self.m)


def quadrature_nodes(n: int, m: int) -> np.ndarray:
    """Midpoints of the ``m^n`` subcells of the unit cube, shape ``(m^n, n)``."""
    g = (np.arange(m) + 0.5) / m
    return np.array(list(itertools.product(g, repeat=n)))


def _values(f: FieldOracle, lo: np.ndarray, side: np.ndarray, m: int) -> np.ndarray:
    lo = np.atleast_2d(lo)
    nodes = quadrature_nodes(lo.shape[1], m)
    pts = lo[:, None, :] + side[:, None, None] * nodes[None, :, :]
    v = f(pts.reshape(-1, lo.shape[1])).reshape(lo.shape[0], nodes.shape[0])
    if np.isnan(v).any():
        c, k = np.argwhere(np.isnan(v))[0]
        raise EvaluationError(f"{f.name} is NaN at {pts[c, k].tolist()}")
    return v


def cube_average(f: FieldOracle, Q: Box, m: int | None = None) -> float:
    if f.exact_average is not None:
        return float(f.exact_average(Q))
    m = m or f.m
    return float(_values(f, Q.lo[None, :], np.array([Q.side]), m).mean())


def mean_oscillation(f: FieldOracle, Q: Box, m: int | None = None) -> float:
    m = m or f.m
    v = _values(f, Q.lo[None, :], np.array([Q.side]), m)[0]
    return float(np.abs(v - cube_average(f, Q, m)).mean())


def _osc_block(v: np.ndarray, mode: str) -> np.ndarray:
    if mode == SUBCUBES:
        return np.abs(v - v.mean(axis=1, keepdims=True)).mean(axis=1)
    # mean of |f(x) - f(y)| over node pairs, via the sorted-sample identity
    N = v.shape[1]
    s = np.sort(v, axis=1)
    w = 2.0 * np.arange(1, N + 1) - N - 1
    return 2.0 * (s @ w) / (N * N)


def oscillations(f: FieldOracle, lo, side, m: int | None = None, mode: str = SUBCUBES, chunk: int = 2048) -> np.ndarray:
    """Mean oscillation of ``f`` on each box ``(lo[k], side[k])``."""
    if mode not in (SUBCUBES, INTERIOR):
        raise ValueError(f"unknown mode {mode!r}")
    m = m or f.m
    lo = np.atleast_2d(np.asarray(lo, dtype=float))
    side = np.broadcast_to(np.asarray(side, dtype=float), (lo.shape[0],))
    blocks = [(k, min(k + chunk, lo.shape[0])) for k in range(0, lo.shape[0], chunk)]
    work = lambda b: _osc_block(_values(f, lo[b[0] : b[1]], side[b[0] : b[1]], m), mode)
    nt = threads()
    if nt > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(nt) as ex:
            parts = list(ex.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    return np.concatenate(parts) if parts else np.zeros(0)


# ---------------------------------------------------------------------------
# cube families


@dataclass
class CubeFamily:
    """A finite family of boxes over which suprema are taken."""

    lo: np.ndarray
    side: np.ndarray
    source: np.ndarray
    interior: np.ndarray
    seed: int = 0
    labels: tuple = ()

    def __len__(self) -> int:
        return len(self.side)

    def counts(self) -> dict:
        return {lab: int((self.source == k).sum()) for k, lab in enumerate(self.labels)}


def _cap(coords: np.ndarray, cap: int, rng: np.random.Generator) -> np.ndarray:
    if cap is None or len(coords) <= cap:
        return coords
    keep = np.sort(rng.choice(len(coords), size=cap, replace=False))
    return coords[keep]


def _random_boxes(rng, region: Box, scales, per_scale: int, accept, attempts: int = 16):
    """``per_scale`` admissible boxes of side ``s*u``, ``u`` in [1/2, 1), per scale ``s``."""
    n = region.n
    los, sides = [], []
    for s in scales:
        u = rng.uniform(0.5, 1.0, size=per_scale * attempts)
        c = rng.uniform(0.0, 1.0, size=(per_scale * attempts, n))
        side = s * u
        lo = region.lo + region.side * c - 0.5 * side[:, None]
        ok = accept(lo, side)
        idx = np.nonzero(ok)[0][:per_scale]
        los.append(lo[idx])
        sides.append(side[idx])
    if not los:
        return np.zeros((0, n)), np.zeros(0)
    return np.concatenate(los), np.concatenate(sides)


def _interior_flags(domain: Domain, lo: np.ndarray, side: np.ndarray) -> np.ndarray:
    if len(side) == 0:
        return np.zeros(0, dtype=bool)
    inside, _, dlo, _ = domain.classify_boxes(lo - 0.5 * side[:, None], 2 * side)
    return inside & (dlo > 0)


def _in_domain(domain: Domain, lo: np.ndarray, side: np.ndarray) -> np.ndarray:
    if len(side) == 0:
        return np.zeros(0, dtype=bool)
    inside, _, dlo, _ = domain.classify_boxes(lo, side)
    return inside & (dlo > 0)


def domain_family(dec, n_random: int = 64, seed: int = 0, layer_cap: int = 512, random_region: Box | None = None) -> CubeFamily:
    """Cubes inside the domain: Whitney cubes, boundary-layer tree nodes, random cubes.

    Random cubes are drawn per dyadic scale ``bb.side * 2^-k`` with centres
    uniform in the cube spanned by the domain's extent, so the family of a
    dilated domain is the dilated family.
    """
    domain = dec.domain
    rng = np.random.default_rng(seed)
    los, sides, src = [dec.E_lower], [dec.E_side], [np.zeros(dec.n_E, dtype=np.int64)]
    for lev in sorted(dec.layers):
        inner = _cap(dec.layers[lev]["inner"], layer_cap, rng)
        if len(inner):
            s = side_of(lev)
            lo = np.ldexp(inner.astype(float), -lev)
            los.append(lo)
            sides.append(np.full(len(inner), s))
            src.append(np.ones(len(inner), dtype=np.int64))
    bb = domain.bounding_box
    a, b = (np.asarray(v, dtype=float) for v in domain.extent)
    region = random_region or Box(tuple(a.tolist()), float(np.max(b - a)))
    scales = [bb.side * 2.0 ** -(3 + j) for j in range(dec.max_level - dec.root_level + 1)]
    rlo, rside = _random_boxes(rng, region, scales, n_random, lambda lo, s: _in_domain(domain, lo, s))
    los.append(rlo)
    sides.append(rside)
    src.append(np.full(len(rside), 2, dtype=np.int64))
    lo = np.concatenate(los)
    side = np.concatenate(sides)
    return CubeFamily(
        lo, side, np.concatenate(src), _interior_flags(domain, lo, side), seed, ("whitney", "layer", "random")
    )


def region_family(dec, region: Box, n_random: int = 64, seed: int = 0, layer_cap: int = 512) -> CubeFamily:
    """Cubes in an ambient box around the enlarged region, for fields on R^n.

    Contains both Whitney families, the discarded large exterior cubes,
    capped tree nodes of every boundary layer (including cubes straddling
    the boundary), random cubes centred in ``B~`` per dyadic scale, and the
    region box itself.  Every member lies inside ``region``.
    """
    rng = np.random.default_rng(seed)
    n = dec.n
    los = [dec.E_lower, dec.Ep_lower, np.ldexp(dec.big_coords.astype(float), -dec.big_levels[:, None])]
    sides = [dec.E_side, dec.Ep_side, np.ldexp(1.0, -dec.big_levels)]
    src = [np.zeros(dec.n_E, dtype=np.int64), np.ones(dec.n_Ep, dtype=np.int64), np.full(len(dec.big_levels), 2)]
    for lev in sorted(dec.layers):
        for kind, code in (("straddle", 3), ("inner", 4), ("outer", 4)):
            c = _cap(dec.layers[lev][kind], layer_cap, rng)
            if len(c):
                los.append(np.ldexp(c.astype(float), -lev))
                sides.append(np.full(len(c), side_of(lev)))
                src.append(np.full(len(c), code))
    bt = dec.btilde
    scales = [bt.side * 2.0**-j for j in range(0, dec.max_level - dec.root_level + 5)]
    rlo, rside = _random_boxes(rng, bt, scales, n_random, lambda lo, s: np.ones(len(s), dtype=bool))
    los += [rlo, region.lo[None, :], bt.lo[None, :]]
    sides += [rside, np.array([region.side]), np.array([bt.side])]
    src += [np.full(len(rside), 5), np.array([6]), np.array([6])]
    lo = np.concatenate(los).reshape(-1, n)
    side = np.concatenate(sides)
    src = np.concatenate(src).astype(np.int64)
    keep = np.all(lo >= region.lo - 1e-12, axis=1) & np.all(lo + side[:, None] <= region.hi + 1e-12, axis=1)
    lo, side, src = lo[keep], side[keep], src[keep]
    interior = np.all(lo - 0.5 * side[:, None] >= region.lo, axis=1) & np.all(lo + 1.5 * side[:, None] <= region.hi, axis=1)
    labels = ("E", "E'", "big", "straddle", "layer", "random", "box")
    return CubeFamily(lo, side, src, interior, seed, labels)


# ---------------------------------------------------------------------------
# modulus curves


@dataclass
class ModulusCurve:
    """Sampled ``t -> omega(f, t)``; NaN marks breakpoints with no admissible cube."""

    t: np.ndarray
    values: np.ndarray
    mode: str = SUBCUBES
    meta: dict = field(default_factory=dict)
    sides: Optional[np.ndarray] = None
    osc: Optional[np.ndarray] = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        # monotone envelope; absent breakpoints stay NaN
        v = self.values.copy()
        ok = ~np.isnan(v)
        v[ok] = np.maximum.accumulate(v[ok])
        self.values = v

    @property
    def absent(self) -> np.ndarray:
        return np.isnan(self.values)

    @property
    def sup(self) -> float:
        v = self.values[~self.absent]
        return float(v.max()) if len(v) else 0.0

    def value(self, t: float) -> float:
        """``omega(t)``: exact family maximum if per-cube data is kept, else a step lookup."""
        if self.osc is not None:
            sel = self.sides < t
            return float(self.osc[sel].max()) if sel.any() else 0.0
        k = np.searchsorted(self.t, t, side="right") - 1
        v = self.values[~self.absent]
        if len(v) == 0:
            return 0.0
        if k < 0:
            return float(v[0])
        w = self.values[: k + 1]
        w = w[~np.isnan(w)]
        return float(w[-1]) if len(w) else float(v[0])

    def rows(self):
        return [(float(t), None if np.isnan(v) else float(v)) for t, v in zip(self.t, self.values)]


def modulus_from_family(f: FieldOracle, family: CubeFamily, t_grid, mode: str = SUBCUBES, m: int | None = None) -> ModulusCurve:
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be positive and strictly increasing")
    sel = np.ones(len(family), dtype=bool) if mode == SUBCUBES else family.interior
    lo, side = family.lo[sel], family.side[sel]
    osc = oscillations(f, lo, side, m, mode)
    order = np.argsort(side, kind="stable")
    s_sorted, o_run = side[order], np.maximum.accumulate(osc[order]) if len(osc) else osc
    k = np.searchsorted(s_sorted, t_grid, side="left")
    vals = np.where(k > 0, o_run[np.maximum(k - 1, 0)] if len(o_run) else np.nan, np.nan)
    meta = {"n_cubes": int(len(side)), "seed": family.seed, "m": m or f.m, "counts": family.counts()}
    return ModulusCurve(t_grid, vals, mode, meta, side, osc)


def modulus(
    f: FieldOracle,
    dec,
    t_grid,
    mode: str = SUBCUBES,
    n_random: int = 64,
    seed: int = 0,
    m: int | None = None,
    family: CubeFamily | None = None,
) -> ModulusCurve:
    """Sampled modulus of mean oscillation of ``f`` on the decomposed domain."""
    family = family or domain_family(dec, n_random=n_random, seed=seed)
    return modulus_from_family(f, family, t_grid, mode, m)


def bmo_norm(f: FieldOracle, dec, family: CubeFamily | None = None, m: int | None = None, seed: int = 0) -> float:
    t = 2 * dec.domain.bounding_box.diam
    return modulus(f, dec, [t], SUBCUBES, seed=seed, m=m, family=family).sup


def truncate(f: FieldOracle, lo: float = -math.inf, hi: float = math.inf) -> FieldOracle:
    if lo > hi:
        raise ValueError("truncation needs lo <= hi")
    if lo == -math.inf and hi == math.inf:
        return f
    return FieldOracle(lambda x: np.clip(f.fn(x), lo, hi), f"clip({f.name},{lo},{hi})", f.m)


# ---------------------------------------------------------------------------
# least concave majorant


@dataclass(frozen=True)
class ConcaveMajorant:
    """Piecewise linear concave function through ``(tv, vv)``, constant afterwards."""

    tv: np.ndarray
    vv: np.ndarray

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.tv, self.vv)

    @property
    def sup(self) -> float:
        return float(self.vv.max())


def _upper_hull(t: np.ndarray, v: np.ndarray) -> list[int]:
    hull: list[int] = []
    for k in range(len(t)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b when it lies on or below the chord a -> k
            if (v[b] - v[a]) * (t[k] - t[a]) <= (v[k] - v[a]) * (t[b] - t[a]):
                hull.pop()
            else:
                break
        hull.append(k)
    return hull


def least_concave_majorant(curve) -> ConcaveMajorant:
    """Upper concave envelope of ``{(0,0)}`` and the breakpoints, flat after the maximum.

    Accepts a :class:`ModulusCurve` or a pair of arrays ``(t, values)``.
    """
    if isinstance(curve, ModulusCurve):
        t, v = curve.t, curve.values
    else:
        t, v = (np.asarray(a, dtype=float) for a in curve)
    ok = ~np.isnan(v)
    t, v = t[ok], v[ok]
    if np.any(v < 0) or np.any(t < 0):
        raise ValueError("breakpoints must be nonnegative")
    if len(t) == 0:
        return ConcaveMajorant(np.array([0.0]), np.array([0.0]))
    top = int(np.argmax(v))
    tt = np.concatenate([[0.0], t[: top + 1]])
    vv = np.concatenate([[0.0], v[: top + 1]])
    if tt[1] == 0.0:
        tt, vv = tt[1:], np.maximum(vv[1:], 0.0)
    h = _upper_hull(tt, vv)
    return ConcaveMajorant(tt[h], vv[h])


def is_vmo(curve: ModulusCurve, epsilon: float, t_small: float) -> tuple[bool, dict]:
    """Numerical proxy for ``omega(t) -> 0``: is ``omega(t_small) < epsilon``?"""
    if not np.any(curve.t <= t_small):
        raise ValueError("curve has no breakpoint at or below t_small")
    val = curve.value(t_small)
    return val < epsilon, {
        "omega_t_small": val,
        "t_small": t_small,
        "epsilon": epsilon,
        "note": "finite-resolution proxy for lim omega(t) = 0",
    }
