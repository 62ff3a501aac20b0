"""The bump-function extension of a VMO function from a uniform domain.

After subtracting the average over the largest Whitney cube ``S_L``, the
field on each exterior Whitney cube ``S'_i`` (side ``<= L``) is
``lambda_i * psi^{mu_i}_{S'_i}`` where ``lambda_i`` is the normalised average
over the matching interior cube and ``mu_i = 1 + log2(L / side_i)``.  The
field vanishes outside the enlarged region.

Exterior points closer to the boundary than the finest stored cubes are
handled by continuing the exterior refinement rule below ``max_level``
(``virtual`` cubes) and matching each such cube to its nearest interior
cube, so the extension has no artificial zero sliver along the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .bump import bump_values, support_margin_of
from .dyadic import Box, side_of
from .oscillation import (
    FieldOracle,
    ModulusCurve,
    _values,
    domain_family,
    modulus_from_family,
    region_family,
)
from .whitney import WhitneyDecomposition, locate_exterior_cells

__all__ = [
    "BuildError",
    "ExtensionOperator",
    "build",
    "evaluate",
    "extension_field",
    "support_margin",
    "l1_norm",
    "BoundednessReport",
    "boundedness_report",
    "proposition_checks",
    "second_matching",
    "matching_robustness",
]


class BuildError(RuntimeError):
    pass


@dataclass
class ExtensionOperator:
    dec: WhitneyDecomposition
    f: FieldOracle
    s_L: int
    base_constant: float
    lambdas: np.ndarray
    mus: np.ndarray
    averages: np.ndarray
    matching: np.ndarray
    m: int = 16
    virtual_depth: int = 10
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._tree = cKDTree(self.dec.E_centers())

    @property
    def L(self) -> float:
        return self.dec.L


def _cube_averages(f: FieldOracle, lo, side, m, chunk=2048) -> np.ndarray:
    out = np.empty(len(side))
    for k in range(0, len(side), chunk):
        out[k : k + chunk] = _values(f, lo[k : k + chunk], side[k : k + chunk], m).mean(axis=1)
    return out


def build(
    f: FieldOracle,
    dec: WhitneyDecomposition,
    m: int | None = None,
    matching: np.ndarray | None = None,
    s_L: int | None = None,
) -> ExtensionOperator:
    """Averages, ``lambda_i`` and ``mu_i`` for every exterior Whitney cube."""
    m = m or f.m
    s_L = dec.largest_index() if s_L is None else int(s_L)
    if dec.E_side[s_L] != dec.L:
        raise BuildError(f"cube {dec.cube(s_L)} does not have the largest sidelength {dec.L}")
    matching = dec.matching if matching is None else np.asarray(matching, dtype=np.int64)
    try:
        avg = _cube_averages(f, dec.E_lower, dec.E_side, m)
    except ValueError as exc:
        raise BuildError(f"averaging {f.name} failed: {exc}") from None
    if not np.all(np.isfinite(avg)):
        bad = int(np.nonzero(~np.isfinite(avg))[0][0])
        raise BuildError(f"average of {f.name} over {dec.cube(bad)} is not finite")
    base = float(avg[s_L])
    lam = avg[matching] - base if dec.n_Ep else np.zeros(0)
    mus = np.maximum(1, np.rint(1 + np.log2(dec.L / dec.Ep_side))).astype(np.int64)
    return ExtensionOperator(dec, f, s_L, base, lam, mus, avg, matching, m)


def _virtual(op: ExtensionOperator, x: np.ndarray):
    """``(lambda, mu, lo, side)`` of continued exterior cubes holding ``x``."""
    dec = op.dec
    lev, coords = locate_exterior_cells(dec.domain, x, dec.max_level + 1, dec.max_level + op.virtual_depth)
    ok = lev > -(10**6)
    side = np.where(ok, np.ldexp(1.0, -np.where(ok, lev, 0)), 0.0)
    lo = np.ldexp(coords.astype(float), -np.where(ok, lev, 0)[:, None])
    mu = np.where(ok, 1 + (lev - int(round(-math.log2(dec.L)))), 1)
    lam = np.zeros(len(x))
    if ok.any():
        c = lo[ok] + 0.5 * side[ok, None]
        k = min(8, dec.n_E)
        _, cand = op._tree.query(c, k=k)
        cand = cand.reshape(len(c), k)
        g = np.maximum(
            0.0,
            np.maximum(
                dec.E_lower[cand] - (lo[ok][:, None, :] + side[ok][:, None, None]),
                lo[ok][:, None, :] - (dec.E_lower[cand] + dec.E_side[cand][..., None]),
            ),
        )
        gap = np.sqrt((g**2).sum(axis=-1))
        # nearest by gap, ties to the smallest index
        key = np.where(gap == gap.min(axis=1, keepdims=True), cand, np.iinfo(np.int64).max)
        best = key.min(axis=1)
        lam[ok] = op.averages[best] - op.base_constant
    return ok, lam, mu, lo, side


def evaluate(op: ExtensionOperator, x, shifted: bool = False) -> np.ndarray:
    """The extension ``F`` at points ``x`` (normalised so ``F_{S_L} = 0``).

    ``shifted=True`` adds back the base constant everywhere.
    """
    dec = op.dec
    x = np.atleast_2d(np.asarray(x, dtype=float))
    out = np.zeros(x.shape[0])
    inside = dec.domain.contains(x)
    if inside.any():
        out[inside] = op.f(x[inside]) - op.base_constant
    rest = np.nonzero(~inside)[0]
    if len(rest):
        j = dec.Ep_index.locate(x[rest])
        hit = j >= 0
        if hit.any():
            jj = j[hit]
            out[rest[hit]] = op.lambdas[jj] * bump_values(
                dec.Ep_lower[jj], dec.Ep_side[jj], op.mus[jj], x[rest[hit]]
            )
        miss = rest[~hit]
        if len(miss):
            d = dec.domain.dist_to_boundary(x[miss])
            near = miss[(d > 0) & (d < 2.5 * math.sqrt(dec.n) * dec.finest_side)]
            if len(near):
                ok, lam, mu, lo, side = _virtual(op, x[near])
                v = np.zeros(len(near))
                if ok.any():
                    v[ok] = lam[ok] * bump_values(lo[ok], side[ok], mu[ok], x[near][ok])
                out[near] = v
    if shifted:
        out = out + op.base_constant
    return out


def extension_field(op: ExtensionOperator, shifted: bool = False) -> FieldOracle:
    return FieldOracle(lambda x: evaluate(op, x, shifted), f"ext({op.f.name})", op.m)


def support_margin(op: ExtensionOperator) -> float:
    """Smallest gap between a bump support ``K(S')`` and ``S'`` over cubes meeting the boundary of the region."""
    fl = op.dec.boundary_flags
    if not fl.any():
        raise BuildError("no exterior cube meets the boundary of the enlarged region")
    return float(support_margin_of(op.dec.Ep_side[fl], op.mus[fl]).min())


def l1_norm(op: ExtensionOperator, grid: int = 256) -> float:
    """Midpoint estimate of ``||F||_1``; ``F`` vanishes outside ``B~``."""
    bt = op.dec.btilde
    g = (np.arange(grid) + 0.5) / grid
    mesh = np.stack(np.meshgrid(*[g] * op.dec.n, indexing="ij"), axis=-1).reshape(-1, op.dec.n)
    pts = bt.lo + bt.side * mesh
    return float(np.abs(evaluate(op, pts)).mean() * bt.volume)


@dataclass
class BoundednessReport:
    function: str
    norm_F: float
    norm_f: float
    ratio: float | None
    tail_bound: float
    eval_box: Box
    curve_F: ModulusCurve | None = None
    curve_f: ModulusCurve | None = None
    exempt: bool = False

    def to_json(self) -> dict:
        return {
            "function": self.function,
            "norm_F": self.norm_F,
            "norm_f": self.norm_f,
            "ratio": self.ratio,
            "exempt": self.exempt,
            "tail_bound": self.tail_bound,
            "eval_box": {"lower": list(self.eval_box.lower), "side": self.eval_box.side},
        }


def boundedness_report(
    op: ExtensionOperator,
    eval_box: Box | None = None,
    t_grid=None,
    n_random: int = 64,
    seed: int = 0,
    layer_cap: int = 256,
    families=None,
) -> BoundednessReport:
    """``||F||_BMO`` over cubes in the evaluation box against ``||f||_BMO(Omega)``.

    Cubes larger than the box are covered by the bound
    ``osc_Q(F) <= 2 ||F||_1 / |Q| <= 2 ||F||_1 / |box|``.
    """
    dec = op.dec
    box = eval_box or dec.eval_box()
    if families is None:
        families = (
            region_family(dec, box, n_random=n_random, seed=seed, layer_cap=layer_cap),
            domain_family(dec, n_random=n_random, seed=seed, layer_cap=layer_cap),
        )
    fam_F, fam_f = families
    if t_grid is None:
        t_grid = box.side * 2.0 ** -np.arange(dec.max_level - dec.root_level + 6, -1, -1.0)
    F = extension_field(op)
    curve_F = modulus_from_family(F, fam_F, t_grid, m=op.m)
    curve_f = modulus_from_family(op.f, fam_f, t_grid, m=op.m)
    nF, nf = curve_F.sup, curve_f.sup
    tail = 2.0 * l1_norm(op) / box.volume
    exempt = nf <= 1e-12
    ratio = None if exempt else max(nF, tail) / nf
    return BoundednessReport(op.f.name, nF, nf, ratio, tail, box, curve_F, curve_f, exempt)


# ---------------------------------------------------------------------------
# hypotheses of the gluing propositions


def _bucket_max(levels: np.ndarray, values: np.ndarray) -> dict:
    out = {}
    for lev in np.unique(levels):
        out[int(lev)] = float(values[levels == lev].max())
    return out


def _nonincreasing(table: dict, rtol: float = 1e-9) -> bool:
    """Bucket maxima never grow towards finer levels once past their peak.

    The normalisation at ``S_L`` pins ``lambda`` near zero on the coarsest
    buckets, so the rise before the peak is not evidence against decay.
    """
    v = [table[k] for k in sorted(table)]
    if not v:
        return True
    v = v[int(np.argmax(v)) :]
    return all(b <= a * (1 + rtol) + 1e-12 for a, b in zip(v, v[1:]))


def proposition_checks(op: ExtensionOperator) -> dict:
    """Exact checks on ``mu`` and bucketed decay of ``lambda`` data by level."""
    dec = op.dec
    lev = dec.Ep_levels
    log_ratio = np.log2(dec.L / dec.Ep_side)
    e = dec.Ep_edges()
    mu_lower = bool(np.all(op.mus >= log_ratio + 1))
    mu_adjacent = bool(np.all(np.abs(op.mus[e[:, 0]] - op.mus[e[:, 1]]) <= 2)) if len(e) else True
    lam_mu = _bucket_max(lev, np.abs(op.lambdas) / op.mus)
    fine = np.maximum(lev[e[:, 0]], lev[e[:, 1]]) if len(e) else np.zeros(0, dtype=np.int64)
    adj = _bucket_max(fine, np.abs(op.lambdas[e[:, 0]] - op.lambdas[e[:, 1]])) if len(e) else {}
    # F averaged over S' is lambda times the bump average
    from .oscillation import quadrature_nodes

    nodes = quadrature_nodes(dec.n, op.m)
    psi_bar = np.empty(dec.n_Ep)
    for mu in np.unique(op.mus):
        sel = op.mus == mu
        psi_bar[sel] = bump_values(
            np.zeros((len(nodes), dec.n)), np.ones(len(nodes)), np.full(len(nodes), mu), nodes
        ).mean()
    gap = np.abs(op.lambdas * (1.0 - psi_bar))
    avg_gap = _bucket_max(lev, gap)
    return {
        "mu_lower_bound": mu_lower,
        "mu_adjacent": mu_adjacent,
        "lambda_over_mu": lam_mu,
        "lambda_over_mu_decay": _nonincreasing(lam_mu),
        "adjacent_lambda_gap": adj,
        "adjacent_lambda_decay": _nonincreasing(adj),
        "average_gap": avg_gap,
        "average_gap_decay": _nonincreasing(avg_gap),
    }


def second_matching(dec: WhitneyDecomposition, chunk: int = 256) -> np.ndarray:
    """The second admissible matching cube of each exterior cube."""
    out = np.empty(dec.n_Ep, dtype=np.int64)
    idx = np.arange(dec.n_E)
    for k in range(0, dec.n_Ep, chunk):
        sl = slice(k, k + chunk)
        lo, s = dec.Ep_lower[sl], dec.Ep_side[sl]
        g = np.maximum(
            0.0,
            np.maximum(
                dec.E_lower[None, :, :] - (lo[:, None, :] + s[:, None, None]),
                lo[:, None, :] - (dec.E_lower[None, :, :] + dec.E_side[None, :, None]),
            ),
        )
        gap = np.sqrt((g**2).sum(axis=-1))
        gap[dec.E_side[None, :] < s[:, None]] = np.inf
        for r in range(gap.shape[0]):
            order = np.lexsort((idx, gap[r]))
            out[k + r] = order[1] if order[0] == dec.matching[k + r] else order[0]
    return out


def matching_robustness(op: ExtensionOperator, families=None, seed: int = 0) -> dict:
    """Change of ``||F||`` when every exterior cube uses its second matching cube."""
    dec = op.dec
    alt = build(op.f, dec, op.m, matching=second_matching(dec), s_L=op.s_L)
    r0 = boundedness_report(op, families=families, seed=seed)
    r1 = boundedness_report(alt, families=families, seed=seed)
    L_match = float(max(dec.E_side[dec.matching].max(), dec.E_side[alt.matching].max()))
    omega = r0.curve_f.value(2 * L_match)
    delta = abs(r1.norm_F - r0.norm_F)
    return {
        "norm_F": r0.norm_F,
        "norm_F_alt": r1.norm_F,
        "delta": delta,
        "omega_2L": omega,
        "constant": delta / omega if omega > 0 else (0.0 if delta == 0 else math.inf),
        "L_match": L_match,
    }
