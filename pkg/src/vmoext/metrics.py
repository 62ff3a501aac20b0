"""Whitney-chain distance d1, shortest chains and the Jones ratio d1/d2.

``d1`` runs a plain breadth-first search over the sorted adjacency lists, so
the chain returned among several shortest ones is the one whose
predecessors were discovered first (smallest neighbour index).  Bulk
distance tables for the Jones estimate come from scipy's compiled BFS.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import floyd_warshall, shortest_path

from .whitney import WhitneyDecomposition

__all__ = [
    "ChainResult",
    "DisconnectedError",
    "d1",
    "d1_from",
    "distance_table",
    "floyd_warshall_table",
    "d2_indices",
    "KappaEstimate",
    "estimate_kappa",
    "ChainBoundReport",
    "check_chain_average_bound",
    "straddles_slit",
]


class DisconnectedError(RuntimeError):
    """The adjacency graph of E is not connected."""


@dataclass(frozen=True)
class ChainResult:
    length: int
    chain: tuple[int, ...]
    largest_cube: int


def _bfs(dec: WhitneyDecomposition, source: int, target: int | None = None):
    n = dec.n_E
    dist = np.full(n, -1, dtype=np.int64)
    pred = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    q = deque([source])
    indptr, indices = dec.E_indptr, dec.E_indices
    while q:
        i = q.popleft()
        if i == target:
            break
        di = dist[i] + 1
        for j in indices[indptr[i] : indptr[i + 1]].tolist():
            if dist[j] < 0:
                dist[j] = di
                pred[j] = i
                q.append(j)
    return dist, pred


def d1(dec: WhitneyDecomposition, i: int, j: int) -> ChainResult:
    """Shortest Whitney chain from cube ``i`` to cube ``j``."""
    if not (0 <= i < dec.n_E and 0 <= j < dec.n_E):
        raise IndexError(f"cube index out of range 0..{dec.n_E - 1}")
    dist, pred = _bfs(dec, i, j)
    if dist[j] < 0:
        raise DisconnectedError(f"cubes {i} and {j} are not joined by a Whitney chain")
    chain = [j]
    while chain[-1] != i:
        chain.append(int(pred[chain[-1]]))
    chain.reverse()
    sides = dec.E_side[chain]
    largest = chain[int(np.argmax(sides))]
    return ChainResult(int(dist[j]), tuple(chain), int(largest))


def d1_from(dec: WhitneyDecomposition, source: int) -> np.ndarray:
    """All chain distances from one cube; raises if some cube is unreachable."""
    dist, _ = _bfs(dec, source)
    if np.any(dist < 0):
        raise DisconnectedError(f"{int((dist < 0).sum())} cubes unreachable from cube {source}")
    return dist


def _graph(dec: WhitneyDecomposition) -> csr_matrix:
    data = np.ones(len(dec.E_indices), dtype=np.float64)
    return csr_matrix((data, dec.E_indices, dec.E_indptr), shape=(dec.n_E, dec.n_E))


def distance_table(dec: WhitneyDecomposition, sources, batch: int = 256) -> np.ndarray:
    """Integer d1 from each source to every cube (rows follow ``sources``)."""
    sources = np.asarray(sources, dtype=np.int64)
    G = _graph(dec)
    out = np.empty((len(sources), dec.n_E), dtype=np.int64)
    for k in range(0, len(sources), batch):
        rows = shortest_path(G, method="D", unweighted=True, directed=False, indices=sources[k : k + batch])
        if np.isinf(rows).any():
            raise DisconnectedError("Whitney adjacency graph is disconnected")
        out[k : k + batch] = rows.astype(np.int64)
    return out


def floyd_warshall_table(dec: WhitneyDecomposition) -> np.ndarray:
    """All-pairs chain lengths by Floyd–Warshall, used as an oracle."""
    return floyd_warshall(_graph(dec), directed=False, unweighted=True)


def d2_indices(dec: WhitneyDecomposition, i, j) -> np.ndarray:
    """Vectorised d2 between E cubes ``i`` and ``j`` (Euclidean gaps)."""
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    si, sj = dec.E_side[i], dec.E_side[j]
    g = np.maximum(
        0.0,
        np.maximum(dec.E_lower[j] - (dec.E_lower[i] + si[..., None]), dec.E_lower[i] - (dec.E_lower[j] + sj[..., None])),
    )
    gap = np.sqrt((g**2).sum(axis=-1))
    return np.abs(np.log2(si / sj)) + np.log2(2.0 + gap / (si + sj))


@dataclass
class KappaEstimate:
    kappa_hat: float
    pair: tuple[int, int]
    d1: int
    d2: float
    n_pairs: int
    sampler: str
    seed: int | None = None
    meta: dict = field(default_factory=dict)


def _stratified_pairs(dec: WhitneyDecomposition, n_pairs: int, rng: np.random.Generator) -> np.ndarray:
    lev = dec.E_levels
    levels = np.unique(lev)
    by_level = {int(k): np.nonzero(lev == k)[0] for k in levels}
    spread = int(levels.max() - levels.min())
    buckets = list(range(spread + 1))
    quota = np.full(len(buckets), n_pairs // len(buckets))
    quota[: n_pairs - quota.sum()] += 1
    out = []
    for b, q in zip(buckets, quota):
        # pairs of cubes whose level difference is exactly b
        lo_levels = [k for k in by_level if k + b in by_level]
        if not lo_levels or q == 0:
            continue
        weights = np.array([len(by_level[k]) * len(by_level[k + b]) for k in lo_levels], dtype=float)
        pick = rng.choice(len(lo_levels), size=q, p=weights / weights.sum())
        for t in np.unique(pick):
            k = lo_levels[t]
            c = int((pick == t).sum())
            a = rng.choice(by_level[k], size=c)
            z = rng.choice(by_level[k + b], size=c)
            out.append(np.stack([a, z], axis=1))
    pairs = np.concatenate(out) if out else np.zeros((0, 2), dtype=np.int64)
    return pairs[pairs[:, 0] != pairs[:, 1]]


def estimate_kappa(
    dec: WhitneyDecomposition,
    sampler: str = "stratified",
    pairs: int = 4096,
    seed: int = 0,
    refine_sources: int = 32,
) -> KappaEstimate:
    """Lower estimate of the Jones constant ``sup d1/d2`` over E.

    ``sampler="exhaustive"`` scans every pair.  ``"stratified"`` draws
    ``pairs`` pairs spread evenly over level differences, then sweeps the
    ``refine_sources`` best-scoring cubes against all targets; the result
    is still only a lower bound of the true supremum.
    """
    if dec.n_E < 2:
        raise ValueError("need at least two Whitney cubes")
    if sampler == "exhaustive":
        sources = np.arange(dec.n_E)
        best = (-1.0, 0, 0)
        for k in range(0, dec.n_E, 256):
            src = sources[k : k + 256]
            D = distance_table(dec, src)
            ratio = D / d2_indices(dec, src[:, None], np.arange(dec.n_E)[None, :])
            a, b = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
            if ratio[a, b] > best[0]:
                best = (float(ratio[a, b]), int(src[a]), int(b))
        n_eval = dec.n_E * dec.n_E
    elif sampler == "stratified":
        rng = np.random.default_rng(seed)
        P = _stratified_pairs(dec, pairs, rng)
        src, inv = np.unique(P[:, 0], return_inverse=True)
        D = distance_table(dec, src)
        d1s = D[inv, P[:, 1]]
        r = d1s / d2_indices(dec, P[:, 0], P[:, 1])
        # sweep the best sources (and their partners) against every cube
        top = np.argsort(-r, kind="stable")[:refine_sources]
        sweep = np.unique(np.concatenate([P[top, 0], P[top, 1]]))
        Ds = distance_table(dec, sweep)
        rs = Ds / d2_indices(dec, sweep[:, None], np.arange(dec.n_E)[None, :])
        a, b = np.unravel_index(int(np.argmax(rs)), rs.shape)
        best = (float(rs[a, b]), int(sweep[a]), int(b))
        k = int(np.argmax(r))
        if r[k] > best[0]:
            best = (float(r[k]), int(P[k, 0]), int(P[k, 1]))
        n_eval = len(P) + rs.size
    else:
        raise ValueError(f"unknown sampler {sampler!r}; use 'exhaustive' or 'stratified'")
    _, i, j = best
    i, j = min(i, j), max(i, j)
    m = d1(dec, i, j).length
    dd = float(d2_indices(dec, i, j))
    return KappaEstimate(m / dd, (i, j), m, dd, int(n_eval), sampler, seed if sampler == "stratified" else None)


def straddles_slit(dec: WhitneyDecomposition, i: int, j: int) -> bool:
    """True when cubes ``i`` and ``j`` lie on opposite sides of the slit line."""
    ci, cj = dec.E_centers()[[i, j]]
    return bool(ci[1] * cj[1] < 0 and min(ci[0], cj[0]) > 0)


# ---------------------------------------------------------------------------
# chain-average bounds


@dataclass
class ChainBoundReport:
    pairs: list
    chain_constants: np.ndarray
    nested_constants: np.ndarray
    cube_bound_ok: bool

    @property
    def max_chain_constant(self) -> float:
        c = self.chain_constants[np.isfinite(self.chain_constants)]
        return float(c.max()) if len(c) else 0.0

    @property
    def max_nested_constant(self) -> float:
        c = self.nested_constants[np.isfinite(self.nested_constants)]
        return float(c.max()) if len(c) else 0.0


def _ratio(num: float, den: float) -> float:
    if num <= 1e-12:
        return 0.0
    return num / den if den > 0 else math.inf


def check_chain_average_bound(dec: WhitneyDecomposition, f, pairs, omega, nested=(), m: int = 16) -> ChainBoundReport:
    """Smallest constants making the chain and nested-cube average bounds hold.

    ``omega`` maps a sidelength ``t`` to the modulus ``omega_Omega(f, t)``
    (for example ``ModulusCurve.value``).  ``nested`` lists pairs of boxes
    ``(Q1, Q2)`` with ``Q2 ⊂ Q1 ⊂ Omega``.
    """
    from .oscillation import cube_average

    chain_c, ok = [], True
    for i, j in pairs:
        res = d1(dec, int(i), int(j))
        Q = res.largest_cube
        ok &= dec.E_side[Q] <= 4.0**res.length * dec.E_side[i]
        diff = abs(cube_average(f, dec.cube(int(i)).box(), m) - cube_average(f, dec.cube(int(j)).box(), m))
        chain_c.append(_ratio(diff, res.length * omega(dec.E_side[Q])))
    nested_c = []
    for Q1, Q2 in nested:
        diff = abs(cube_average(f, Q1, m) - cube_average(f, Q2, m))
        nested_c.append(_ratio(diff, math.log2(2 + Q1.side / Q2.side) * omega(Q1.side)))
    return ChainBoundReport(list(pairs), np.asarray(chain_c, dtype=float), np.asarray(nested_c, dtype=float), bool(ok))
