"""Bounded-oscillation functions whose averages separate two Whitney cubes.

Given interior Whitney cubes ``S1, S2`` with ``A = d1(S1, S2)`` and
``B_i = d1(S1, S_i)``, the field is ``lambda_i * psi^{mu_i}_{S_i}`` on every
Whitney cube with

    lambda_i = delta((1 + A) / (1 + B_i)) * B_i,     mu_i = 1 + B_i.

Its averages over the plateaus ``J(S1)``, ``J(S2)`` differ by exactly ``A``,
while its BMO norm stays bounded independently of the pair.  When
``d1 / d2`` is unbounded, no bounded linear extension can exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import spearmanr

from .bump import BumpSpec, bump_values, plateau
from .metrics import d1_from, d2_indices, estimate_kappa
from .oscillation import CubeFamily, FieldOracle, cube_average, domain_family, oscillations, quadrature_nodes
from .whitney import WhitneyDecomposition

__all__ = [
    "cutoff_delta",
    "cutoff_delta_prime",
    "AdversarialField",
    "build_adversarial",
    "separation",
    "hypothesis_checks",
    "resolved_family",
    "adversarial_norm",
    "UniformReport",
    "uniform_bmo_check",
    "random_pairs",
    "witness_pair",
    "plateau_d2",
    "ratio_to_d2",
]

DELTA_SUP = 1.0
DELTA_PRIME_SUP = 3.0


def cutoff_delta(t):
    """Smoothstep: 0 for ``t <= 1/2``, 1 for ``t >= 1``, ``u^2 (3 - 2u)`` with ``u = 2t - 1`` between."""
    u = np.clip(2.0 * np.asarray(t, dtype=float) - 1.0, 0.0, 1.0)
    v = u * u * (3.0 - 2.0 * u)
    return float(v) if v.ndim == 0 else v


def cutoff_delta_prime(t):
    t = np.asarray(t, dtype=float)
    u = 2.0 * t - 1.0
    v = np.where((u > 0) & (u < 1), 12.0 * u * (1.0 - u), 0.0)
    return float(v) if v.ndim == 0 else v


@dataclass
class AdversarialField:
    dec: WhitneyDecomposition
    s1: int
    s2: int
    d1_pair: int
    d1_from_s1: np.ndarray
    lambdas: np.ndarray
    mus: np.ndarray
    meta: dict = field(default_factory=dict)

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        dec = self.dec
        out = np.zeros(x.shape[0])
        k = dec.E_index.locate(x)
        hit = k >= 0
        if hit.any():
            kk = k[hit]
            out[hit] = self.lambdas[kk] * bump_values(dec.E_lower[kk], dec.E_side[kk], self.mus[kk], x[hit])
        return out

    def oracle(self, m: int = 16) -> FieldOracle:
        return FieldOracle(self.__call__, f"phi[{self.s1},{self.s2}]", m)


def build_adversarial(dec: WhitneyDecomposition, s1: int, s2: int) -> AdversarialField:
    if s1 == s2:
        raise ValueError("the two cubes must differ")
    B = d1_from(dec, s1)
    A = int(B[s2])
    lam = cutoff_delta((1.0 + A) / (1.0 + B)) * B
    return AdversarialField(dec, int(s1), int(s2), A, B, lam, (1 + B).astype(np.int64))


def separation(fld: AdversarialField, m: int = 16) -> float:
    """``|phi_{J(S1)} - phi_{J(S2)}|`` by quadrature over the plateaus."""
    f = fld.oracle(m)
    dec = fld.dec
    J1 = plateau(BumpSpec(dec.cube(fld.s1).box(), int(fld.mus[fld.s1])))
    J2 = plateau(BumpSpec(dec.cube(fld.s2).box(), int(fld.mus[fld.s2])))
    return abs(cube_average(f, J1, m) - cube_average(f, J2, m))


def plateau_d2(fld: AdversarialField) -> float:
    """``d2(J(S1), J(S2))``."""
    dec = fld.dec
    from .dyadic import concentric_subcube, d2

    return d2(concentric_subcube(dec.cube(fld.s1), 0.25), concentric_subcube(dec.cube(fld.s2), 0.25))


def hypothesis_checks(fld: AdversarialField) -> dict:
    """Exact checks of the gluing hypotheses for the adversarial data."""
    dec = fld.dec
    B = fld.d1_from_s1
    e = dec.E_edges()
    log_ratio = np.abs(np.log2(dec.E_side[fld.s1] / dec.E_side))
    lam_gap = np.abs(fld.lambdas[e[:, 0]] - fld.lambdas[e[:, 1]]) if len(e) else np.zeros(0)
    bound = DELTA_SUP + 2 * DELTA_PRIME_SUP
    return {
        "chain_vs_log_ratio": bool(np.all(B >= 0.5 * log_ratio)),
        "mu_adjacent_le_1": bool(np.all(np.abs(fld.mus[e[:, 0]] - fld.mus[e[:, 1]]) <= 1)) if len(e) else True,
        "lambda_over_mu_le_delta_sup": bool(np.all(np.abs(fld.lambdas) / fld.mus <= DELTA_SUP)),
        "adjacent_lambda_le_7": bool(np.all(lam_gap <= bound)),
        "max_adjacent_lambda_gap": float(lam_gap.max()) if len(lam_gap) else 0.0,
        "lambda_s1": float(fld.lambdas[fld.s1]),
        "lambda_s2": float(fld.lambdas[fld.s2]),
    }


def resolved_family(dec: WhitneyDecomposition, family: CubeFamily | None = None, m: int = 16, seed: int = 0) -> CubeFamily:
    """Members of a domain family whose quadrature nodes all lie in Whitney cubes."""
    family = family or domain_family(dec, seed=seed)
    nodes = quadrature_nodes(dec.n, m)
    keep = np.zeros(len(family), dtype=bool)
    for k in range(0, len(family), 1024):
        lo, s = family.lo[k : k + 1024], family.side[k : k + 1024]
        pts = (lo[:, None, :] + s[:, None, None] * nodes[None]).reshape(-1, dec.n)
        keep[k : k + 1024] = (dec.E_index.locate(pts) >= 0).reshape(len(s), -1).all(axis=1)
    return CubeFamily(
        family.lo[keep], family.side[keep], family.source[keep], family.interior[keep], family.seed, family.labels
    )


def adversarial_norm(fld: AdversarialField, family: CubeFamily, m: int = 16) -> float:
    osc = oscillations(fld.oracle(m), family.lo, family.side, m)
    return float(osc.max()) if len(osc) else 0.0


@dataclass
class UniformReport:
    pairs: list
    d1: np.ndarray
    norms: np.ndarray
    separations: np.ndarray
    spearman: float

    @property
    def max_norm(self) -> float:
        return float(self.norms.max()) if len(self.norms) else 0.0

    @property
    def spread(self) -> float:
        pos = self.norms[self.norms > 0]
        return float(pos.max() / pos.min()) if len(pos) else 1.0

    def to_json(self) -> dict:
        return {
            "pairs": [[int(a), int(b)] for a, b in self.pairs],
            "d1": [int(v) for v in self.d1],
            "norms": [float(v) for v in self.norms],
            "separations": [float(v) for v in self.separations],
            "max_norm": self.max_norm,
            "spread": self.spread,
            "spearman_d1_norm": self.spearman,
        }


def random_pairs(dec: WhitneyDecomposition, count: int, seed: int = 0) -> list[tuple[int, int]]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a, b = (int(v) for v in rng.choice(dec.n_E, size=2, replace=False))
        out.append((a, b))
    return out


def uniform_bmo_check(dec: WhitneyDecomposition, pairs, m: int = 16, family: CubeFamily | None = None, seed: int = 0) -> UniformReport:
    """BMO norms of the adversarial field for each pair, restricted to the resolved union."""
    family = family or resolved_family(dec, m=m, seed=seed)
    d1s, norms, seps = [], [], []
    for s1, s2 in pairs:
        if s1 == s2:
            d1s.append(0)
            norms.append(0.0)
            seps.append(0.0)
            continue
        fld = build_adversarial(dec, s1, s2)
        d1s.append(fld.d1_pair)
        norms.append(adversarial_norm(fld, family, m))
        seps.append(separation(fld, m))
    d1s, norms = np.asarray(d1s), np.asarray(norms)
    rho = float(spearmanr(d1s, norms).statistic) if len(set(d1s.tolist())) > 1 else 0.0
    return UniformReport(list(pairs), d1s, norms, np.asarray(seps), rho)


def witness_pair(dec: WhitneyDecomposition, seed: int = 0, pairs: int = 4096) -> tuple[int, int]:
    """The maximising pair of the Jones ratio estimate."""
    return estimate_kappa(dec, pairs=pairs, seed=seed).pair


def ratio_to_d2(fld: AdversarialField, m: int = 16) -> float:
    return separation(fld, m) / plateau_d2(fld)
