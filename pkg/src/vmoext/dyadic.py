"""Dyadic cubes on the absolute lattice ``2^-level * Z^n``.

A cube is identified by ``(level, coords)``: its sidelength is ``2**-level``
and its lower corner is ``coords * 2**-level``.  Levels may be negative
(cubes larger than 1).  All combinatorial predicates (touching, nesting,
ordering) are decided on integers; floats only appear when a cube is turned
into a :class:`Box`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "DyadicCube",
    "Box",
    "side_of",
    "touches",
    "dist",
    "d2",
    "concentric_subcube",
    "cube_to_json",
    "cube_from_json",
    "box_gaps",
]


def side_of(level: int) -> float:
    """Sidelength of a level-``level`` cube, exact in binary floating point."""
    return math.ldexp(1.0, -level)


@dataclass(frozen=True, order=True)
class DyadicCube:
    level: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("a cube needs at least one coordinate")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        object.__setattr__(self, "level", int(self.level))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def side(self) -> float:
        return side_of(self.level)

    @property
    def lower(self) -> np.ndarray:
        return np.array([math.ldexp(c, -self.level) for c in self.coords])

    @property
    def upper(self) -> np.ndarray:
        return np.array([math.ldexp(c + 1, -self.level) for c in self.coords])

    @property
    def center(self) -> np.ndarray:
        return np.array([math.ldexp(2 * c + 1, -self.level - 1) for c in self.coords])

    def box(self) -> "Box":
        return Box(tuple(self.lower.tolist()), self.side)

    def parent(self) -> "DyadicCube":
        return DyadicCube(self.level - 1, tuple(c >> 1 for c in self.coords))

    def children(self) -> list["DyadicCube"]:
        out = []
        for mask in range(1 << self.n):
            out.append(
                DyadicCube(
                    self.level + 1,
                    tuple(2 * c + ((mask >> k) & 1) for k, c in enumerate(self.coords)),
                )
            )
        return out

    def ancestor(self, level: int) -> "DyadicCube":
        if level > self.level:
            raise ValueError("ancestor level must not exceed the cube level")
        shift = self.level - level
        return DyadicCube(level, tuple(c >> shift for c in self.coords))

    def contains_cube(self, other: "DyadicCube") -> bool:
        return other.level >= self.level and other.ancestor(self.level) == self

    def contains_point(self, x: Sequence[float]) -> bool:
        lo, hi = self.lower, self.upper
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= lo) and np.all(x <= hi))

    @classmethod
    def containing(cls, x: Sequence[float], level: int) -> "DyadicCube":
        """The level-``level`` cube whose half-open cell holds ``x``."""
        return cls(level, tuple(int(math.floor(math.ldexp(float(v), level))) for v in x))


@dataclass(frozen=True)
class Box:
    """Axis-parallel closed cube ``lower + [0, side]^n`` (not necessarily dyadic)."""

    lower: tuple[float, ...]
    side: float

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError(f"Box sidelength must be positive, got {self.side}")
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "side", float(self.side))

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def lo(self) -> np.ndarray:
        return np.asarray(self.lower)

    @property
    def hi(self) -> np.ndarray:
        return self.lo + self.side

    @property
    def center(self) -> np.ndarray:
        return self.lo + 0.5 * self.side

    @property
    def diam(self) -> float:
        return math.sqrt(self.n) * self.side

    @property
    def volume(self) -> float:
        return self.side**self.n

    def box(self) -> "Box":
        return self

    def contains_box(self, other: "Box") -> bool:
        return bool(np.all(other.lo >= self.lo) and np.all(other.hi <= self.hi))

    def contains_points(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return np.all((x >= self.lo) & (x <= self.hi), axis=1)

    @classmethod
    def centered(cls, center: Sequence[float], side: float) -> "Box":
        c = np.asarray(center, dtype=float)
        return cls(tuple((c - 0.5 * side).tolist()), side)


CubeLike = Union[DyadicCube, Box]


def _check_dim(a: CubeLike, b: CubeLike) -> None:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


def touches(a: DyadicCube, b: DyadicCube) -> bool:
    """True iff ``a != b`` and the closed cubes intersect."""
    _check_dim(a, b)
    if a == b:
        return False
    lf = max(a.level, b.level)
    sa, sb = 1 << (lf - a.level), 1 << (lf - b.level)
    for ca, cb in zip(a.coords, b.coords):
        ca, cb = ca * sa, cb * sb
        if ca > cb + sb or cb > ca + sa:
            return False
    return True


def box_gaps(lo1: np.ndarray, s1, lo2: np.ndarray, s2) -> np.ndarray:
    """Per-axis gaps between closed boxes; broadcasts over leading axes."""
    lo1 = np.asarray(lo1, dtype=float)
    lo2 = np.asarray(lo2, dtype=float)
    s1 = np.asarray(s1, dtype=float)[..., None] if np.ndim(s1) else s1
    s2 = np.asarray(s2, dtype=float)[..., None] if np.ndim(s2) else s2
    return np.maximum(0.0, np.maximum(lo2 - (lo1 + s1), lo1 - (lo2 + s2)))


def dist(a: CubeLike, b: CubeLike, metric: str = "l2") -> float:
    """Set distance between closed cubes; 0 iff they touch or overlap."""
    _check_dim(a, b)
    if isinstance(a, DyadicCube) and isinstance(b, DyadicCube):
        # integer gaps in units of the finer level
        lf = max(a.level, b.level)
        sa, sb = 1 << (lf - a.level), 1 << (lf - b.level)
        gaps = [max(0, cb * sb - (ca * sa + sa), ca * sa - (cb * sb + sb)) for ca, cb in zip(a.coords, b.coords)]
        unit = side_of(lf)
        if metric == "linf":
            return max(gaps) * unit
        if metric == "l2":
            return math.sqrt(sum(g * g for g in gaps)) * unit
        raise ValueError(f"unknown metric {metric!r}")
    A, B = a.box(), b.box()
    g = box_gaps(A.lo, A.side, B.lo, B.side)
    if metric == "linf":
        return float(g.max())
    if metric == "l2":
        return float(math.sqrt(float(np.dot(g, g))))
    raise ValueError(f"unknown metric {metric!r}")


def d2(a: CubeLike, b: CubeLike) -> float:
    """Logarithmic cube distance ``|log(la/lb)| + log(2 + dist/(la+lb))``, base 2."""
    la, lb = a.side, b.side
    return abs(math.log2(la / lb)) + math.log2(2.0 + dist(a, b) / (la + lb))


def concentric_subcube(S: CubeLike, factor: float) -> Box:
    """Cube with the same center as ``S`` and sidelength ``factor * side(S)``."""
    if not factor > 0:
        raise ValueError("factor must be positive")
    return Box.centered(S.center, factor * S.side)


def cube_to_json(cube: DyadicCube, kind: str | None = None, **extra) -> dict:
    out = {"level": cube.level, "coords": list(cube.coords)}
    if kind is not None:
        out["kind"] = kind
    out.update(extra)
    return out


def cube_from_json(obj: dict) -> DyadicCube:
    return DyadicCube(int(obj["level"]), tuple(int(c) for c in obj["coords"]))
