"""Whitney decompositions of a domain and of the exterior of its closure.

The refinement descends the dyadic tree level by level.  A cube contained
in the domain is accepted once ``sqrt(n) * side <= dist(cube, complement)``;
since its parent failed the same test, accepted cubes satisfy
``side <= dist <= 4 sqrt(n) side``.  The exterior family uses the distance
to the closure instead and keeps only cubes of side at most ``L``, the
largest interior sidelength.  Cubes still undecided at ``max_level`` are
dropped; their interior share is reported as ``residual_measure``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .domain import Domain
from .dyadic import Box, DyadicCube, side_of

__all__ = [
    "ResolutionError",
    "CubeIndex",
    "WhitneyDecomposition",
    "decompose",
    "matching_cube",
    "omega_tilde_region",
    "OmegaTilde",
    "touching_pairs",
    "locate_exterior_cells",
    "check_invariants",
    "to_json",
    "to_svg",
]


class ResolutionError(RuntimeError):
    """No interior cube could be accepted at the requested resolution."""


def _sort_cubes(levels: np.ndarray, coords: np.ndarray) -> np.ndarray:
    keys = [coords[:, k] for k in range(coords.shape[1] - 1, -1, -1)] + [levels]
    return np.lexsort(keys)


class CubeIndex:
    """Lookup of lattice cubes by ``(level, coords)`` and of points by cell."""

    def __init__(self, levels: np.ndarray, coords: np.ndarray):
        self.levels = np.asarray(levels, dtype=np.int64)
        self.coords = np.asarray(coords, dtype=np.int64).reshape(len(self.levels), -1)
        self.n = self.coords.shape[1] if len(self.levels) else 0
        self._groups = {}
        for lev in np.unique(self.levels):
            idx = np.nonzero(self.levels == lev)[0]
            c = self.coords[idx]
            base = c.min(axis=0) - 2
            span = c.max(axis=0) - base + 3
            strides = np.cumprod(np.concatenate([[1], span[:-1]]))
            keys = ((c - base) * strides).sum(axis=1)
            order = np.argsort(keys, kind="stable")
            self._groups[int(lev)] = (base, span, strides, keys[order], idx[order])

    @property
    def level_set(self) -> list[int]:
        return sorted(self._groups)

    def lookup(self, level: int, coords: np.ndarray) -> np.ndarray:
        coords = np.atleast_2d(np.asarray(coords, dtype=np.int64))
        out = np.full(coords.shape[0], -1, dtype=np.int64)
        g = self._groups.get(int(level))
        if g is None or coords.shape[0] == 0:
            return out
        base, span, strides, keys, idx = g
        rel = coords - base
        ok = np.all((rel >= 0) & (rel < span), axis=1)
        k = (np.where(ok[:, None], rel, 0) * strides).sum(axis=1)
        pos = np.searchsorted(keys, k)
        pos = np.minimum(pos, len(keys) - 1)
        hit = ok & (keys[pos] == k)
        out[hit] = idx[pos[hit]]
        return out

    def locate(self, x: np.ndarray) -> np.ndarray:
        """Index of the cube whose half-open cell contains each point, or -1."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.full(x.shape[0], -1, dtype=np.int64)
        for lev in self._groups:
            todo = out < 0
            if not todo.any():
                break
            cells = np.floor(np.ldexp(x[todo], lev)).astype(np.int64)
            found = self.lookup(lev, cells)
            sub = np.nonzero(todo)[0]
            out[sub[found >= 0]] = found[found >= 0]
        return out


def touching_pairs(levA, coordsA, index_B: CubeIndex, coarser_only: bool = True) -> np.ndarray:
    """All pairs ``(a, b)`` with cube ``a`` of set A touching cube ``b`` of set B.

    Only B cubes at the same or a coarser level than ``a`` are examined; for
    ``A == B`` this still yields every unordered pair once from its finer
    member (equal-level pairs appear in both orders).
    """
    levA = np.asarray(levA, dtype=np.int64)
    coordsA = np.asarray(coordsA, dtype=np.int64).reshape(len(levA), -1)
    n = coordsA.shape[1]
    offsets = np.array(list(itertools.product((-1, 0, 1), repeat=n)), dtype=np.int64)
    pairs = []
    for la in np.unique(levA):
        ia = np.nonzero(levA == la)[0]
        ca = coordsA[ia]
        for lb in index_B.level_set:
            if coarser_only and lb > la:
                continue
            if lb > la:
                raise ValueError("finer B levels are not supported")
            d = int(la - lb)
            p = ca >> d
            size = 1 << d
            for off in offsets:
                cand = p + off
                lo = cand << d
                touch = np.all((lo <= ca + 1) & (ca <= lo + size), axis=1)
                if not touch.any():
                    continue
                found = index_B.lookup(lb, cand[touch])
                sel = found >= 0
                if sel.any():
                    pairs.append(np.stack([ia[touch][sel], found[sel]], axis=1))
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(pairs)


def _csr_from_pairs(pairs: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    if len(pairs):
        p = np.concatenate([pairs, pairs[:, ::-1]])
        p = p[p[:, 0] != p[:, 1]]
        p = np.unique(p, axis=0)
    else:
        p = np.zeros((0, 2), dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, p[:, 0] + 1, 1)
    indptr = np.cumsum(indptr)
    return indptr, p[:, 1].astype(np.int64)


@dataclass
class WhitneyDecomposition:
    domain: Domain
    max_level: int
    root_level: int
    E_levels: np.ndarray
    E_coords: np.ndarray
    Ep_levels: np.ndarray
    Ep_coords: np.ndarray
    big_levels: np.ndarray
    big_coords: np.ndarray
    L: float
    btilde: Box
    residual_measure: float
    E_dist: np.ndarray
    Ep_dist: np.ndarray
    layers: dict = field(default_factory=dict)
    E_indptr: np.ndarray = None
    E_indices: np.ndarray = None
    Ep_indptr: np.ndarray = None
    Ep_indices: np.ndarray = None
    matching: np.ndarray = None
    matching_dist: np.ndarray = None
    boundary_flags: np.ndarray = None

    def __post_init__(self):
        self.n = self.E_coords.shape[1]
        self.E_side = np.ldexp(1.0, -self.E_levels)
        self.Ep_side = np.ldexp(1.0, -self.Ep_levels)
        self.E_lower = np.ldexp(self.E_coords.astype(float), -self.E_levels[:, None])
        self.Ep_lower = np.ldexp(self.Ep_coords.astype(float), -self.Ep_levels[:, None])
        self.E_index = CubeIndex(self.E_levels, self.E_coords)
        self.Ep_index = CubeIndex(self.Ep_levels, self.Ep_coords)

    # -- accessors -------------------------------------------------------
    @property
    def n_E(self) -> int:
        return len(self.E_levels)

    @property
    def n_Ep(self) -> int:
        return len(self.Ep_levels)

    def cube(self, i: int) -> DyadicCube:
        return DyadicCube(int(self.E_levels[i]), tuple(int(c) for c in self.E_coords[i]))

    def cube_prime(self, j: int) -> DyadicCube:
        return DyadicCube(int(self.Ep_levels[j]), tuple(int(c) for c in self.Ep_coords[j]))

    def neighbors(self, i: int) -> np.ndarray:
        return self.E_indices[self.E_indptr[i] : self.E_indptr[i + 1]]

    def neighbors_prime(self, j: int) -> np.ndarray:
        return self.Ep_indices[self.Ep_indptr[j] : self.Ep_indptr[j + 1]]

    def E_edges(self) -> np.ndarray:
        rows = np.repeat(np.arange(self.n_E), np.diff(self.E_indptr))
        e = np.stack([rows, self.E_indices], axis=1)
        return e[e[:, 0] < e[:, 1]]

    def Ep_edges(self) -> np.ndarray:
        rows = np.repeat(np.arange(self.n_Ep), np.diff(self.Ep_indptr))
        e = np.stack([rows, self.Ep_indices], axis=1)
        return e[e[:, 0] < e[:, 1]]

    def largest_index(self) -> int:
        """Lexicographically first cube of maximal sidelength (``S_L``)."""
        return int(np.nonzero(self.E_side == self.E_side.max())[0][0])

    @property
    def finest_side(self) -> float:
        return side_of(self.max_level)

    def E_centers(self) -> np.ndarray:
        return self.E_lower + 0.5 * self.E_side[:, None]

    def Ep_centers(self) -> np.ndarray:
        return self.Ep_lower + 0.5 * self.Ep_side[:, None]

    def eval_box(self) -> Box:
        """Box of side ``4 diam(B~)`` centred on ``B~``: stand-in for R^n."""
        return Box.centered(self.btilde.center, 4.0 * self.btilde.diam)


def _children(coords: np.ndarray, n: int) -> np.ndarray:
    offs = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
    return (2 * coords[:, None, :] + offs[None, :, :]).reshape(-1, n)


def _root_cells(box: Box, level: int) -> np.ndarray:
    side = side_of(level)
    lo = np.round(box.lo / side).astype(np.int64)
    count = int(round(box.side / side))
    grids = np.meshgrid(*[np.arange(count, dtype=np.int64)] * box.n, indexing="ij")
    return lo + np.stack([g.ravel() for g in grids], axis=1)


def _refine(domain: Domain, roots: np.ndarray, root_level: int, max_level: int, exterior: bool, L: float | None):
    n = roots.shape[1]
    rn = math.sqrt(n)
    acc_lev, acc_coords, acc_dist = [], [], []
    big_lev, big_coords = [], []
    layers = {}
    frontier = roots
    for lev in range(root_level, max_level + 1):
        if frontier.shape[0] == 0:
            break
        side = side_of(lev)
        lo = np.ldexp(frontier.astype(float), -lev)
        inside, outside, dlo, _ = domain.classify_boxes(lo, side)
        target = outside if exterior else inside
        passed = target & (rn * side <= dlo)
        if passed.any():
            if exterior and L is not None and side > L:
                big_lev.append(np.full(passed.sum(), lev))
                big_coords.append(frontier[passed])
            else:
                acc_lev.append(np.full(passed.sum(), lev))
                acc_coords.append(frontier[passed])
                acc_dist.append(dlo[passed])
        straddle = ~inside & ~outside
        failing = target & ~passed
        layers[lev] = {"straddle": frontier[straddle], "layer": frontier[failing]}
        split = failing | straddle
        if lev < max_level:
            frontier = _children(frontier[split], n)
        else:
            frontier = frontier[:0]
    cat = lambda parts, shape: np.concatenate(parts) if parts else np.zeros(shape, dtype=np.int64)
    return (
        cat(acc_lev, (0,)).astype(np.int64),
        cat(acc_coords, (0, n)).astype(np.int64),
        cat(acc_dist, (0,)).astype(float),
        cat(big_lev, (0,)).astype(np.int64),
        cat(big_coords, (0, n)).astype(np.int64),
        layers,
    )


def _btilde(domain: Domain, L: float) -> Box:
    R = side_of(domain.root_level)
    a, b = (np.asarray(v, dtype=float) for v in domain.extent)
    m = 6.0 * math.sqrt(domain.dim) * L
    lo = np.floor((a - m) / R) * R
    hi = np.ceil((b + m) / R) * R
    side = float(np.max(hi - lo))
    return Box(tuple(lo.tolist()), side)


def decompose(domain: Domain, max_level: int) -> WhitneyDecomposition:
    """Whitney cubes of the domain (E) and of the exterior up to side L (E')."""
    bb = domain.bounding_box
    a, b = (np.asarray(v, dtype=float) for v in domain.extent)
    if not (np.all(bb.lo < a) and np.all(b < bb.hi)):
        raise ValueError(f"domain {domain.name} is not strictly inside its bounding box")
    r0 = domain.root_level
    if max_level < r0:
        raise ValueError(f"max_level must be at least the root level {r0}")
    roots = _root_cells(bb, r0)
    E_lev, E_c, E_d, _, _, layers_in = _refine(domain, roots, r0, max_level, exterior=False, L=None)
    if len(E_lev) == 0:
        raise ResolutionError(
            f"no Whitney cube of {domain.name} accepted by level {max_level}; "
            f"finest side {side_of(max_level)} vs inradius {domain.inradius}"
        )
    order = _sort_cubes(E_lev, E_c)
    E_lev, E_c, E_d = E_lev[order], E_c[order], E_d[order]
    L = side_of(int(E_lev.min()))
    bt = _btilde(domain, L)
    ext_roots = _root_cells(bt, r0)
    P_lev, P_c, P_d, B_lev, B_c, layers_out = _refine(domain, ext_roots, r0, max_level, exterior=True, L=L)
    order = _sort_cubes(P_lev, P_c)
    P_lev, P_c, P_d = P_lev[order], P_c[order], P_d[order]
    order = _sort_cubes(B_lev, B_c)
    B_lev, B_c = B_lev[order], B_c[order]
    layers = {}
    for lev in set(layers_in) | set(layers_out):
        li = layers_in.get(lev, {})
        lo_ = layers_out.get(lev, {})
        n = domain.dim
        empty = np.zeros((0, n), dtype=np.int64)
        layers[lev] = {
            "inner": li.get("layer", empty),
            "straddle": li.get("straddle", empty),
            "outer": lo_.get("layer", empty),
        }
    covered = float(np.sum(np.ldexp(1.0, -E_lev * domain.dim)))
    dec = WhitneyDecomposition(
        domain=domain,
        max_level=max_level,
        root_level=r0,
        E_levels=E_lev,
        E_coords=E_c,
        Ep_levels=P_lev,
        Ep_coords=P_c,
        big_levels=B_lev,
        big_coords=B_c,
        L=L,
        btilde=bt,
        residual_measure=max(0.0, domain.measure - covered),
        E_dist=E_d,
        Ep_dist=P_d,
        layers=layers,
    )
    dec.E_indptr, dec.E_indices = _csr_from_pairs(touching_pairs(E_lev, E_c, dec.E_index), dec.n_E)
    dec.Ep_indptr, dec.Ep_indices = _csr_from_pairs(touching_pairs(P_lev, P_c, dec.Ep_index), dec.n_Ep)
    dec.matching, dec.matching_dist = _all_matchings(dec)
    dec.boundary_flags = _boundary_flags(dec)
    return dec


# ---------------------------------------------------------------------------
# matching cubes


def _gap_norm(lo1, s1, lo2, s2):
    g = np.maximum(0.0, np.maximum(lo2 - (lo1 + s1[..., None]), lo1 - (lo2 + s2[..., None])))
    return np.sqrt((g**2).sum(axis=-1))


def _all_matchings(dec: WhitneyDecomposition) -> tuple[np.ndarray, np.ndarray]:
    m = dec.n_Ep
    best = np.full(m, np.inf)
    best_idx = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return best_idx, best
    Pc = dec.Ep_centers()
    rn = math.sqrt(dec.n)
    for lev in dec.E_index.level_set:
        gi = np.nonzero(dec.E_levels == lev)[0]
        s = side_of(lev)
        q = np.nonzero(dec.Ep_side <= s)[0]
        if len(q) == 0:
            continue
        tree = cKDTree(dec.E_centers()[gi])
        dc, _ = tree.query(Pc[q])
        radius = dc + rn * 0.5 * (s + dec.Ep_side[q]) + 1e-12
        cand_lists = tree.query_ball_point(Pc[q], radius)
        for t, j in enumerate(q):
            cand = gi[np.asarray(cand_lists[t], dtype=np.int64)]
            g = _gap_norm(dec.E_lower[cand], dec.E_side[cand], dec.Ep_lower[j], np.full(len(cand), dec.Ep_side[j]))
            gmin = g.min()
            k = int(cand[g == gmin].min())
            if gmin < best[j] or (gmin == best[j] and k < best_idx[j]):
                best[j], best_idx[j] = gmin, k
    if np.any(best_idx < 0):
        bad = int(np.nonzero(best_idx < 0)[0][0])
        raise RuntimeError(f"no interior cube at least as large as exterior cube {dec.cube_prime(bad)}")
    return best_idx, best


def matching_cube(dec: WhitneyDecomposition, s_prime: int) -> int:
    """Index into E of the fixed matching cube of exterior cube ``s_prime``."""
    return int(dec.matching[s_prime])


def matching_candidates(dec: WhitneyDecomposition, s_prime: int) -> np.ndarray:
    """All admissible E cubes for ``s_prime`` ordered by (distance, index)."""
    ok = np.nonzero(dec.E_side >= dec.Ep_side[s_prime])[0]
    g = _gap_norm(dec.E_lower[ok], dec.E_side[ok], dec.Ep_lower[s_prime], np.full(len(ok), dec.Ep_side[s_prime]))
    order = np.lexsort((ok, g))
    return ok[order]


# ---------------------------------------------------------------------------
# the enlarged region


def _boundary_flags(dec: WhitneyDecomposition) -> np.ndarray:
    flags = np.zeros(dec.n_Ep, dtype=bool)
    if dec.n_Ep == 0:
        return flags
    if len(dec.big_levels):
        big_index = CubeIndex(dec.big_levels, dec.big_coords)
        pairs = touching_pairs(dec.Ep_levels, dec.Ep_coords, big_index)
        flags[pairs[:, 0]] = True
    bt = dec.btilde
    hi = dec.Ep_lower + dec.Ep_side[:, None]
    flags |= np.any((dec.Ep_lower <= bt.lo) | (hi >= bt.hi), axis=1)
    return flags


@dataclass
class OmegaTilde:
    """Closure of the domain together with the exterior cubes of side <= L."""

    dec: WhitneyDecomposition

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        dom = self.dec.domain
        inside = dom.contains(x) | (dom.dist_to_boundary(x) == 0)
        rest = ~inside
        if rest.any():
            inside[rest] = self.dec.Ep_index.locate(x[rest]) >= 0
        return inside

    @property
    def boundary_cubes(self) -> np.ndarray:
        return np.nonzero(self.dec.boundary_flags)[0]


def omega_tilde_region(dec: WhitneyDecomposition) -> OmegaTilde:
    return OmegaTilde(dec)


# ---------------------------------------------------------------------------
# cells below the resolution limit


def locate_exterior_cells(domain: Domain, x: np.ndarray, from_level: int, to_level: int):
    """Continue the exterior refinement rule for individual points.

    For each point, walk the dyadic cells containing it from ``from_level``
    to ``to_level`` and return ``(level, coords)`` of the first cell lying
    outside the closure with ``sqrt(n) side <= dist``.  Points never
    resolved get level ``-10**6``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = x.shape[1]
    rn = math.sqrt(n)
    lev_out = np.full(x.shape[0], -(10**6), dtype=np.int64)
    coords_out = np.zeros(x.shape, dtype=np.int64)
    todo = np.arange(x.shape[0])
    for lev in range(from_level, to_level + 1):
        if len(todo) == 0:
            break
        side = side_of(lev)
        cells = np.floor(np.ldexp(x[todo], lev)).astype(np.int64)
        lo = np.ldexp(cells.astype(float), -lev)
        _, outside, dlo, _ = domain.classify_boxes(lo, side)
        ok = outside & (rn * side <= dlo)
        lev_out[todo[ok]] = lev
        coords_out[todo[ok]] = cells[ok]
        todo = todo[~ok]
    return lev_out, coords_out


# ---------------------------------------------------------------------------
# invariant report


def _connected(indptr, indices, n) -> bool:
    if n == 0:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        i = stack.pop()
        for j in indices[indptr[i] : indptr[i + 1]]:
            if not seen[j]:
                seen[j] = True
                stack.append(int(j))
    return bool(seen.all())


def check_invariants(dec: WhitneyDecomposition) -> dict:
    """Fractions of cubes, pairs and matchings satisfying the Whitney bounds."""
    rn = math.sqrt(dec.n)
    E_ok = (dec.E_side <= dec.E_dist) & (dec.E_dist <= 4 * rn * dec.E_side)
    P_ok = (dec.Ep_side <= dec.Ep_dist) & (dec.Ep_dist <= 4 * rn * dec.Ep_side)
    e = dec.E_edges()
    r = dec.E_side[e[:, 1]] / dec.E_side[e[:, 0]] if len(e) else np.ones(0)
    adj_ok = (r >= 0.25) & (r <= 4)
    ep = dec.Ep_edges()
    rp = dec.Ep_side[ep[:, 1]] / dec.Ep_side[ep[:, 0]] if len(ep) else np.ones(0)
    adjp_ok = (rp >= 0.25) & (rp <= 4)
    ms = dec.E_side[dec.matching]
    match_ok = (dec.Ep_side <= ms) & (ms <= 2 * dec.Ep_side)
    fl = dec.boundary_flags
    flag_ok = (dec.Ep_side[fl] >= dec.L / 2) & (dec.Ep_side[fl] <= dec.L)
    frac = lambda a: float(a.mean()) if len(a) else 1.0
    return {
        "n_E": dec.n_E,
        "n_Eprime": dec.n_Ep,
        "L": dec.L,
        "whitney_E": frac(E_ok),
        "whitney_Eprime": frac(P_ok),
        "adjacent_E": frac(adj_ok),
        "adjacent_Eprime": frac(adjp_ok),
        "matching_sandwich": frac(match_ok),
        "boundary_flags": frac(flag_ok),
        "n_boundary_flagged": int(fl.sum()),
        "connected": _connected(dec.E_indptr, dec.E_indices, dec.n_E),
        "residual_measure": dec.residual_measure,
        "residual_fraction": dec.residual_measure / dec.domain.measure,
    }


# ---------------------------------------------------------------------------
# serialisation


def to_json(dec: WhitneyDecomposition) -> dict:
    cubes = []
    for i in range(dec.n_E):
        cubes.append({"kind": "E", "level": int(dec.E_levels[i]), "coords": [int(c) for c in dec.E_coords[i]]})
    for j in range(dec.n_Ep):
        cubes.append(
            {
                "kind": "E'",
                "level": int(dec.Ep_levels[j]),
                "coords": [int(c) for c in dec.Ep_coords[j]],
                "matching": int(dec.matching[j]),
                "boundary": bool(dec.boundary_flags[j]),
            }
        )
    return {
        "domain": dec.domain.describe(),
        "max_level": dec.max_level,
        "L": dec.L,
        "btilde": {"lower": list(dec.btilde.lower), "side": dec.btilde.side},
        "residual_measure": dec.residual_measure,
        "counts": {"E": dec.n_E, "E'": dec.n_Ep},
        "cubes": cubes,
    }


def to_svg(dec: WhitneyDecomposition, size: int = 800) -> str:
    """Standalone SVG 1.1 picture of both cube families."""
    if dec.n != 2:
        raise ValueError("SVG rendering is planar only")
    bt = dec.btilde
    scale = size / bt.side

    def rect(lo, s, style):
        x = (lo[0] - bt.lo[0]) * scale
        y = (bt.hi[1] - lo[1] - s) * scale
        w = s * scale
        return f'<rect x="{x:.3f}" y="{y:.3f}" width="{w:.3f}" height="{w:.3f}" {style}/>'

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>Whitney cubes of {dec.domain.name}, max_level {dec.max_level}</title>",
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
    ]
    for i in range(dec.n_E):
        out.append(rect(dec.E_lower[i], dec.E_side[i], 'fill="#cfe3f7" stroke="#2b5d8a" stroke-width="0.4"'))
    for j in range(dec.n_Ep):
        style = 'fill="#f7e3cf" stroke="#8a5d2b" stroke-width="0.4"'
        if dec.boundary_flags[j]:
            style = 'fill="#f2b8b8" stroke="#b01818" stroke-width="0.8"'
        out.append(rect(dec.Ep_lower[j], dec.Ep_side[j], style))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def dumps(dec: WhitneyDecomposition) -> str:
    return json.dumps(to_json(dec), indent=1, sort_keys=True)
