"""Named test functions so that reports are reproducible without user code.

Spec strings look like ``name`` or ``name:key=value,...``; for example
``const:c=2``, ``bump:mu=4``.  Every function is built for a domain because
several depend on its boundary distance or centre.
"""

from __future__ import annotations

import math

import numpy as np

from .bump import BumpSpec, bump_value
from .domain import Domain
from .dyadic import Box
from .oscillation import FieldOracle

__all__ = ["REGISTRY", "ALIASES", "parse_spec", "make_function", "available"]


def _const(domain: Domain, c: float = 1.0) -> FieldOracle:
    c = float(c)
    return FieldOracle(lambda x: np.full(x.shape[0], c), f"const:c={c:g}", exact_average=lambda Q: c)


def _coord1(domain: Domain) -> FieldOracle:
    return FieldOracle(lambda x: x[:, 0].copy(), "coord1", exact_average=lambda Q: float(Q.center[0]))


def _halfstep(domain: Domain) -> FieldOracle:
    c = float(domain.center[0])
    return FieldOracle(lambda x: (x[:, 0] > c).astype(float), "halfstep")


def _logdist(domain: Domain) -> FieldOracle:
    def fn(x):
        d = domain.dist_to_boundary(x)
        with np.errstate(divide="ignore"):
            return np.log2(np.maximum(d, 1e-300))

    return FieldOracle(fn, "logdist")


def _sqrtlogdist(domain: Domain) -> FieldOracle:
    r = float(domain.inradius)

    def fn(x):
        d = np.maximum(domain.dist_to_boundary(x), 1e-300)
        return np.sqrt(np.maximum(np.log2(2.0 * r / d), 0.0))

    return FieldOracle(fn, "sqrtlogdist")


def _deepest_point(domain: Domain, k: int = 65) -> np.ndarray:
    """Grid point of the extent farthest from the boundary (the centre when it is inside)."""
    c = np.asarray(domain.center, dtype=float)
    if domain.contains(c[None, :])[0]:
        return c
    a, b = (np.asarray(v, dtype=float) for v in domain.extent)
    axes = [np.linspace(a[i], b[i], k) for i in range(domain.dim)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, domain.dim)
    d = np.where(domain.contains(pts), domain.dist_to_boundary(pts), -1.0)
    return pts[int(np.argmax(d))]


def _bump(domain: Domain, mu: int = 2) -> FieldOracle:
    c = _deepest_point(domain)
    half = float(domain.dist_to_boundary(c[None, :])[0]) / math.sqrt(domain.dim)
    spec = BumpSpec(Box.centered(c, 2 * half), int(mu))
    return FieldOracle(lambda x: bump_value(spec, x), f"bump:mu={int(mu)}")


REGISTRY = {
    "const": _const,
    "coord1": _coord1,
    "halfstep": _halfstep,
    "logdist": _logdist,
    "sqrtlogdist": _sqrtlogdist,
    "bump": _bump,
}
ALIASES = {"const1": "const:c=1", "sqrtlog": "sqrtlogdist", "log": "logdist", "x1": "coord1"}
VMO_BATTERY = ("coord1", "halfstep", "sqrtlogdist")


def available() -> list[str]:
    return sorted(REGISTRY) + sorted(ALIASES)


def parse_spec(spec: str) -> tuple[str, dict]:
    spec = ALIASES.get(spec, spec)
    name, _, rest = spec.partition(":")
    if name not in REGISTRY:
        raise KeyError(f"unknown function {name!r}; available: {', '.join(available())}")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad parameter {item!r} in {spec!r}; expected key=value")
        params[key.strip()] = float(val) if key.strip() != "mu" else int(val)
    return name, params


def make_function(spec: str, domain: Domain) -> FieldOracle:
    name, params = parse_spec(spec)
    try:
        return REGISTRY[name](domain, **params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name!r}: {exc}") from None
