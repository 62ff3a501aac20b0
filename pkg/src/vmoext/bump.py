"""Logarithmic bump functions on cubes and their oscillation bound.

For a cube ``S`` with side ``l`` and ``d = dist(x, boundary of S)``::

    psi(x) = 1                                   if d >= l/4
    psi(x) = (1 - log2(l / (4 d)) / mu)_+        otherwise

so ``psi = 1`` on the concentric quarter cube ``J(S)`` and ``psi = 0`` within
``2^-mu * l/4`` of the boundary.  Outside ``S`` the value is 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dyadic import Box, concentric_subcube

__all__ = [
    "BumpSpec",
    "S0",
    "bump_value",
    "bump_values",
    "plateau",
    "support",
    "support_margin_of",
    "bump_modulus_bound",
    "bump_family",
    "measure_bump_modulus",
    "calibrate_c0",
]

S0 = Box((-2.0, -2.0), 4.0)


@dataclass(frozen=True)
class BumpSpec:
    S: Box
    mu: int

    def __post_init__(self):
        if int(self.mu) != self.mu or self.mu < 1:
            raise ValueError(f"mu must be an integer >= 1, got {self.mu}")
        if not isinstance(self.S, Box):
            object.__setattr__(self, "S", self.S.box())


def bump_values(lo: np.ndarray, side: np.ndarray, mu: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Row-wise ``psi^{mu_k}_{S_k}(x_k)`` for boxes ``S_k = (lo_k, side_k)``."""
    lo = np.atleast_2d(lo)
    x = np.atleast_2d(x)
    side = np.asarray(side, dtype=float)
    mu = np.asarray(mu, dtype=float)
    d = np.minimum(x - lo, lo + side[..., None] - x).min(axis=-1)
    out = np.zeros(d.shape)
    inside = d > 0
    q = side / 4.0
    full = inside & (d >= q)
    out[full] = 1.0
    part = inside & ~full
    with np.errstate(divide="ignore"):
        v = 1.0 - np.log2(np.broadcast_to(q, d.shape)[part] / d[part]) / np.broadcast_to(mu, d.shape)[part]
    out[part] = np.maximum(v, 0.0)
    return out


def bump_value(spec: BumpSpec, x) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    S = spec.S
    pts = np.atleast_2d(x)
    v = bump_values(
        np.broadcast_to(S.lo, pts.shape), np.full(pts.shape[0], S.side), np.full(pts.shape[0], spec.mu), pts
    )
    return float(v[0]) if x.ndim == 1 else v


def plateau(spec: BumpSpec) -> Box:
    """``J(S)``: where the bump equals 1."""
    return concentric_subcube(spec.S, 0.25)


def support(spec: BumpSpec) -> Box:
    """``K(S)``: the closed cube outside of which the bump vanishes."""
    return concentric_subcube(spec.S, 1.0 - 2.0 ** (-spec.mu - 1))


def support_margin_of(side, mu):
    """``dist(K(S), boundary of S) = 2^(-mu-2) side``."""
    return np.ldexp(np.asarray(side, dtype=float), -np.asarray(mu, dtype=np.int64) - 2)


def bump_modulus_bound(spec: BumpSpec, t, c0: float):
    """``(c0 / mu) min(1/2, 2^(mu+3) t / side)``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    v = (c0 / spec.mu) * np.minimum(0.5, math.ldexp(1.0, spec.mu + 3) * t / spec.S.side)
    return float(v) if v.ndim == 0 else v


def bump_family(spec: BumpSpec, per_octave: int = 4, min_exp: int | None = None):
    """Cubes inside ``S`` probing the bump at all relevant scales and offsets.

    For each side ``s`` on a geometric grid, cubes sit at boundary distances
    ``d`` on a geometric grid (and flush with the boundary), both in the
    middle of a face and at a corner.  Returns ``(lo, side)`` arrays.
    """
    S = spec.S
    n = S.n
    ell = S.side
    min_exp = min_exp if min_exp is not None else spec.mu + 6
    exps = np.arange(0, (min_exp + 1) * per_octave) / per_octave
    sides = ell * 2.0 ** -(exps + 0.0)
    sides = sides[sides <= ell]
    los, ss = [], []
    for s in sides:
        offsets = np.concatenate([[0.0], ell * 2.0 ** -(exps + 2)])
        offsets = offsets[offsets + s <= ell]
        for d in offsets:
            mid = np.full(n, 0.5 * (ell - s))
            mid[0] = d
            los.append(S.lo + mid)
            ss.append(s)
            corner = np.full(n, d)
            los.append(S.lo + corner)
            ss.append(s)
    return np.array(los), np.array(ss)


def measure_bump_modulus(spec: BumpSpec, t_grid, m: int = 16):
    """Sampled ``omega_S(psi, t)`` over :func:`bump_family`."""
    from .oscillation import FieldOracle, modulus_from_family, CubeFamily

    lo, side = bump_family(spec)
    fam = CubeFamily(lo, side, np.zeros(len(side), dtype=np.int64), np.ones(len(side), dtype=bool), 0, ("probe",))
    f = FieldOracle(lambda x: bump_value(spec, x), f"bump{spec.mu}", m)
    return modulus_from_family(f, fam, t_grid, m=m)


def calibrate_c0(t_grid, mu: int = 2, S: Box = S0, m: int = 16) -> float:
    """Smallest ``c0`` making the bound hold on ``t_grid`` for the given ``mu``."""
    spec = BumpSpec(S, mu)
    curve = measure_bump_modulus(spec, t_grid, m)
    shape = bump_modulus_bound(spec, curve.t, 1.0)
    v = np.nan_to_num(curve.values)
    return float(np.max(v / shape))
