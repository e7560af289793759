"""Closed bounded subsets of C^n built from a few primitive shapes.

Primitives: finite point sets, convergent sequences together with their
limit, circles and closed disks in one coordinate, cartesian products and
finite unions.  Each one answers pointwise membership up to a tolerance and
vectorized membership on a product grid, where ``axes[i]`` lists the sample
values of coordinate ``i`` and the result has shape
``(len(axes[0]), ..., len(axes[n-1]))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-9


def _c(z) -> complex:
    return complex(z)


def _outer_and(masks: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.logical_and.outer, masks)


def _pair(z: complex) -> list:
    return [z.real, z.imag]


class Region:
    n: int

    def contains(self, point, tol: float = DEFAULT_TOL) -> bool:
        pt = tuple(_c(z) for z in (point if isinstance(point, (tuple, list)) else (point,)))
        if len(pt) != self.n:
            raise ValueError(f"point of length {len(pt)} for a region in C^{self.n}")
        return bool(self._contains(pt, tol))

    def grid(self, axes: Sequence, tol: float = DEFAULT_TOL) -> np.ndarray:
        axes = [np.asarray(a, dtype=complex).ravel() for a in axes]
        if len(axes) != self.n:
            raise ValueError(f"{len(axes)} axes for a region in C^{self.n}")
        return self._grid(axes, tol)

    def is_empty(self) -> bool:
        return False

    def anchors(self) -> list:
        """Characteristic values per coordinate (points, centres, extremes)."""
        raise NotImplementedError

    def radius(self) -> float:
        """Largest modulus of any coordinate of any point."""
        raise NotImplementedError


@dataclass(frozen=True)
class FinitePoints(Region):
    points: tuple
    n: int

    def __post_init__(self):
        pts = tuple(sorted({tuple(_c(z) for z in p) for p in self.points}, key=lambda p: [(z.real, z.imag) for z in p]))
        for p in pts:
            if len(p) != self.n:
                raise ValueError(f"point {p} is not in C^{self.n}")
        object.__setattr__(self, "points", pts)

    def _contains(self, pt, tol):
        return any(all(abs(a - b) <= tol for a, b in zip(p, pt)) for p in self.points)

    def _grid(self, axes, tol):
        out = np.zeros(tuple(len(a) for a in axes), dtype=bool)
        for p in self.points:
            out |= _outer_and([np.abs(a - z) <= tol for a, z in zip(axes, p)])
        return out

    def is_empty(self):
        return not self.points

    def anchors(self):
        return [sorted({p[i] for p in self.points}, key=lambda z: (z.real, z.imag)) for i in range(self.n)]

    def radius(self):
        return max((abs(z) for p in self.points for z in p), default=0.0)

    def to_json(self):
        return {"kind": "points", "n": self.n, "points": [[_pair(z) for z in p] for p in self.points]}


def empty(n: int) -> FinitePoints:
    return FinitePoints((), n)


@dataclass(frozen=True)
class ConvergentSequence(Region):
    """``{limit + 2**-k * direction : k >= start} together with limit``."""

    limit: tuple
    direction: tuple
    start: int = 1

    def __post_init__(self):
        lim = tuple(_c(z) for z in self.limit)
        d = tuple(_c(z) for z in self.direction)
        if len(lim) != len(d) or not any(d):
            raise ValueError("a convergent sequence needs a nonzero direction of matching length")
        object.__setattr__(self, "limit", lim)
        object.__setattr__(self, "direction", d)

    @property
    def n(self):
        return len(self.limit)

    def terms(self, tol: float) -> list:
        """Sequence points, up to where they are within ``tol * 1e-3`` of the limit."""
        size = math.sqrt(sum(abs(z) ** 2 for z in self.direction))
        out = []
        k = self.start
        while 2.0 ** -k * size >= tol * 1e-3:
            out.append(tuple(a + 2.0 ** -k * v for a, v in zip(self.limit, self.direction)))
            k += 1
        return out

    def as_points(self, tol: float = DEFAULT_TOL) -> FinitePoints:
        return FinitePoints(tuple(self.terms(tol)) + (self.limit,), self.n)

    def _contains(self, pt, tol):
        return self.as_points(tol)._contains(pt, tol)

    def _grid(self, axes, tol):
        return self.as_points(tol)._grid(axes, tol)

    def anchors(self):
        pts = [self.limit] + [tuple(a + 2.0 ** -k * v for a, v in zip(self.limit, self.direction))
                              for k in range(self.start, self.start + 3)]
        return [[p[i] for p in pts] for i in range(self.n)]

    def radius(self):
        return max(abs(a) + 2.0 ** -self.start * abs(v) for a, v in zip(self.limit, self.direction))

    def to_json(self):
        return {"kind": "sequence", "limit": [_pair(z) for z in self.limit],
                "direction": [_pair(z) for z in self.direction], "start": self.start}


@dataclass(frozen=True)
class Circle(Region):
    center: complex
    r: float
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "center", _c(self.center))
        if not (self.r >= 0 and math.isfinite(self.r)):
            raise ValueError("radius must be finite and nonnegative")

    def _contains(self, pt, tol):
        return abs(abs(pt[0] - self.center) - self.r) <= tol

    def _grid(self, axes, tol):
        return np.abs(np.abs(axes[0] - self.center) - self.r) <= tol

    def anchors(self):
        c, r = self.center, self.r
        return [[c + r, c - r, c + 1j * r, c - 1j * r]]

    def radius(self):
        return abs(self.center) + self.r

    def to_json(self):
        return {"kind": "circle", "center": _pair(self.center), "radius": self.r}


@dataclass(frozen=True)
class ClosedDisk(Region):
    center: complex
    r: float
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "center", _c(self.center))
        if not (self.r >= 0 and math.isfinite(self.r)):
            raise ValueError("radius must be finite and nonnegative")

    def _contains(self, pt, tol):
        return abs(pt[0] - self.center) <= self.r + tol

    def _grid(self, axes, tol):
        return np.abs(axes[0] - self.center) <= self.r + tol

    def anchors(self):
        c, r = self.center, self.r
        return [[c, c + r / 2, c + r, c - r, c + 1j * r, c - 1j * r]]

    def radius(self):
        return abs(self.center) + self.r

    def to_json(self):
        return {"kind": "disk", "center": _pair(self.center), "radius": self.r}


@dataclass(frozen=True)
class Product(Region):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a product needs at least one factor")

    @property
    def n(self):
        return sum(f.n for f in self.factors)

    def _split(self, seq):
        out, i = [], 0
        for f in self.factors:
            out.append(seq[i:i + f.n])
            i += f.n
        return out

    def _contains(self, pt, tol):
        return all(f._contains(tuple(p), tol) for f, p in zip(self.factors, self._split(pt)))

    def _grid(self, axes, tol):
        return reduce(np.logical_and.outer, [f._grid(a, tol) for f, a in zip(self.factors, self._split(axes))])

    def is_empty(self):
        return any(f.is_empty() for f in self.factors)

    def anchors(self):
        return [a for f in self.factors for a in f.anchors()]

    def radius(self):
        return 0.0 if self.is_empty() else max(f.radius() for f in self.factors)

    def to_json(self):
        return {"kind": "product", "factors": [f.to_json() for f in self.factors]}


@dataclass(frozen=True)
class Union(Region):
    members: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        for m in self.members:
            if m.n != self.n:
                raise ValueError(f"union member in C^{m.n}, expected C^{self.n}")

    def _contains(self, pt, tol):
        return any(m._contains(pt, tol) for m in self.members)

    def _grid(self, axes, tol):
        out = np.zeros(tuple(len(a) for a in axes), dtype=bool)
        for m in self.members:
            out |= m._grid(axes, tol)
        return out

    def is_empty(self):
        return all(m.is_empty() for m in self.members)

    def anchors(self):
        out = [[] for _ in range(self.n)]
        for m in self.members:
            for i, a in enumerate(m.anchors()):
                out[i].extend(a)
        return out

    def radius(self):
        return max((m.radius() for m in self.members), default=0.0)

    def to_json(self):
        return {"kind": "union", "n": self.n, "members": [m.to_json() for m in self.members]}


def union(*regions: Region, n: int | None = None) -> Region:
    """Union with empty members dropped and nested unions flattened."""
    if n is None:
        if not regions:
            raise ValueError("union of nothing needs n")
        n = regions[0].n
    flat = []
    for r in regions:
        if r.n != n:
            raise ValueError("union of regions in different dimensions")
        if r.is_empty():
            continue
        flat.extend(r.members if isinstance(r, Union) else [r])
    if not flat:
        return empty(n)
    return flat[0] if len(flat) == 1 else Union(tuple(flat), n)


def product(*regions: Region) -> Region:
    """Cartesian product; empty as soon as one factor is empty."""
    n = sum(r.n for r in regions)
    if any(r.is_empty() for r in regions):
        return empty(n)
    flat = []
    for r in regions:
        flat.extend(r.factors if isinstance(r, Product) else [r])
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


def project(region: Region, keep: Sequence[int]) -> Region:
    """Image under the coordinate projection onto ``keep`` (in that order)."""
    keep = list(keep)
    if not keep or any(not 0 <= i < region.n for i in keep):
        raise ValueError(f"invalid projection {keep} for a region in C^{region.n}")
    m = len(keep)
    if region.is_empty():
        return empty(m)
    if isinstance(region, FinitePoints):
        return FinitePoints(tuple(tuple(p[i] for i in keep) for p in region.points), m)
    if isinstance(region, ConvergentSequence):
        lim = tuple(region.limit[i] for i in keep)
        d = tuple(region.direction[i] for i in keep)
        if not any(d):
            return FinitePoints((lim,), m)
        return ConvergentSequence(lim, d, region.start)
    if isinstance(region, (Circle, ClosedDisk)):
        return region
    if isinstance(region, Union):
        return union(*(project(r, keep) for r in region.members), n=m)
    if isinstance(region, Product):
        if keep != sorted(keep):
            raise ValueError("product projections must keep coordinates in order")
        parts, off = [], 0
        for f in region.factors:
            local = [i - off for i in keep if off <= i < off + f.n]
            if local:
                parts.append(project(f, local))
            off += f.n
        return product(*parts)
    raise TypeError(f"cannot project {type(region).__name__}")


def is_compact(region: Region) -> bool:
    """Structural check: a finite combination of closed bounded primitives."""
    if isinstance(region, FinitePoints):
        return all(math.isfinite(abs(z)) for p in region.points for z in p)
    if isinstance(region, ConvergentSequence):
        return all(math.isfinite(abs(z)) for z in region.limit + region.direction)
    if isinstance(region, (Circle, ClosedDisk)):
        return math.isfinite(abs(region.center)) and math.isfinite(region.r)
    if isinstance(region, (Product, Union)):
        parts = region.factors if isinstance(region, Product) else region.members
        return all(is_compact(p) for p in parts)
    return False


def region_from_json(obj: dict) -> Region:
    kind = obj["kind"]
    cz = lambda p: complex(p[0], p[1])
    if kind == "points":
        return FinitePoints(tuple(tuple(cz(z) for z in p) for p in obj["points"]), obj["n"])
    if kind == "sequence":
        return ConvergentSequence(tuple(cz(z) for z in obj["limit"]), tuple(cz(z) for z in obj["direction"]),
                                  obj.get("start", 1))
    if kind == "circle":
        return Circle(cz(obj["center"]), float(obj["radius"]))
    if kind == "disk":
        return ClosedDisk(cz(obj["center"]), float(obj["radius"]))
    if kind == "product":
        return Product(tuple(region_from_json(f) for f in obj["factors"]))
    if kind == "union":
        return Union(tuple(region_from_json(m) for m in obj["members"]), obj["n"])
    raise ValueError(f"unknown region kind {kind!r}")
