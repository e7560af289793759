"""Commuting operator tuples: dense finite-dimensional ones and the
finitely described structured families on l2 (diagonal tuples and
eventually-constant weighted shifts)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, Union

from .errors import NonCommutingError, ShapeError, SpecError
from .linalg import EXACT, FLOAT, ComplexMatrix, QI, scalar

INFINITE = math.inf
"""Multiplicity / dimension marker for 'infinitely many'."""

COMMUTE_TOL = 1e-8


@dataclass(frozen=True)
class CommuteVerdict:
    ok: bool
    pair: tuple | None = None
    residual: float = 0.0

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class FiniteTuple:
    """``n`` commuting ``dim x dim`` matrices sharing one scalar mode."""

    ops: tuple
    _verdict: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        ops = tuple(self.ops)
        object.__setattr__(self, "ops", ops)
        if not ops:
            raise ShapeError("a tuple needs at least one operator")
        d = ops[0].rows
        if d < 1:
            raise ShapeError("the space must have dimension >= 1")
        for a in ops:
            if a.shape != (d, d):
                raise ShapeError(f"operator of shape {a.shape} on a {d}-dimensional space")
            if a.mode != ops[0].mode:
                raise ShapeError("operators of one tuple must share a mode")

    @classmethod
    def of(cls, *ops, mode: str = EXACT) -> "FiniteTuple":
        """Build from matrices or nested row lists."""
        return cls(tuple(a if isinstance(a, ComplexMatrix) else ComplexMatrix.from_rows(a, mode) for a in ops))

    @property
    def n(self) -> int:
        return len(self.ops)

    @property
    def dim(self) -> int:
        return self.ops[0].rows

    @property
    def mode(self) -> str:
        return self.ops[0].mode

    def __len__(self):
        return len(self.ops)

    def __getitem__(self, i):
        return self.ops[i]

    def __eq__(self, other):
        return isinstance(other, FiniteTuple) and self.n == other.n and all(
            a == b for a, b in zip(self.ops, other.ops))

    __hash__ = None

    def sub(self, indices: Sequence[int]) -> "FiniteTuple":
        return FiniteTuple(tuple(self.ops[i] for i in indices))

    def adjoint(self) -> "FiniteTuple":
        return FiniteTuple(tuple(a.adjoint() for a in self.ops))

    def conjugate_by(self, u: ComplexMatrix, u_inv: ComplexMatrix) -> "FiniteTuple":
        return FiniteTuple(tuple(u @ a @ u_inv for a in self.ops))


def validate_commuting(t: FiniteTuple) -> CommuteVerdict:
    """Check ``T_i T_j = T_j T_i`` for every pair (1-based pair on failure)."""
    if t._verdict:
        return t._verdict[0]
    verdict = CommuteVerdict(True)
    scale = max((a.max_abs() for a in t.ops), default=0.0) or 1.0
    for i, j in combinations(range(t.n), 2):
        c = t.ops[i] @ t.ops[j] - t.ops[j] @ t.ops[i]
        if t.mode == EXACT:
            if not c.is_zero():
                verdict = CommuteVerdict(False, (i + 1, j + 1), c.max_abs())
                break
        else:
            res = c.max_abs()
            if res > COMMUTE_TOL * scale * scale:
                verdict = CommuteVerdict(False, (i + 1, j + 1), res)
                break
    t._verdict.append(verdict)
    return verdict


def require_commuting(t: FiniteTuple) -> None:
    v = validate_commuting(t)
    if not v:
        raise NonCommutingError(v.pair, v.residual)


def as_point(lam, n: int, mode: str) -> tuple:
    lam = tuple(lam) if isinstance(lam, (tuple, list)) else (lam,)
    if len(lam) != n:
        raise ShapeError(f"point of length {len(lam)} for a {n}-tuple")
    return tuple(scalar(z, mode) for z in lam)


def translate(t: FiniteTuple, lam) -> FiniteTuple:
    """``T - lam = (T_1 - lam_1 I, ..., T_n - lam_n I)``."""
    lam = as_point(lam, t.n, t.mode)
    return FiniteTuple(tuple(a.shift(z) for a, z in zip(t.ops, lam)))


def power_tuple(t: FiniteTuple, k: int) -> FiniteTuple:
    """Coordinate-wise ``k``-th powers."""
    if k < 1:
        raise ValueError("power_tuple needs k >= 1")
    return FiniteTuple(tuple(a.power(k) for a in t.ops))


# -- structured l2 models ------------------------------------------------------


def _cpoint(p, n: int | None = None) -> tuple:
    if isinstance(p, (int, float, complex, QI)):
        p = (p,)
    pt = tuple(scalar(z, FLOAT) for z in p)
    if n is not None and len(pt) != n:
        raise SpecError(f"point {p!r} does not have {n} coordinates")
    return pt


def _pdist(a: tuple, b: tuple) -> float:
    return math.sqrt(sum(abs(x - y) ** 2 for x, y in zip(a, b)))


@dataclass(frozen=True)
class Atom:
    point: tuple
    mult: Union[int, float]

    def __post_init__(self):
        object.__setattr__(self, "point", _cpoint(self.point))
        m = self.mult
        if m != INFINITE and (int(m) != m or m < 1):
            raise SpecError(f"multiplicity must be a positive integer or INFINITE, got {m!r}")
        object.__setattr__(self, "mult", INFINITE if m == INFINITE else int(m))


@dataclass(frozen=True)
class DiagonalTupleSpec:
    """Diagonal ``n``-tuple on l2 given by a finite descriptor.

    The joint symbol sequence lists every atom with its multiplicity and, for
    each accumulation point ``a``, the approach sequence
    ``a + 2**-k * e_1`` for ``k >= approach_start``.  ``approach_start`` is the
    least ``k0 >= 1`` with ``2**-k0`` below half the smallest distance between
    descriptor points, so approach points never meet atoms or each other.
    """

    n: int
    atoms: tuple = ()
    accumulations: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise SpecError("a diagonal tuple needs n >= 1")
        atoms = tuple(a if isinstance(a, Atom) else Atom(*a) for a in self.atoms)
        accs = tuple(_cpoint(a, self.n) for a in self.accumulations)
        for a in atoms:
            if len(a.point) != self.n:
                raise SpecError(f"atom {a.point} does not have {self.n} coordinates")
        for group, name in ((tuple(a.point for a in atoms), "atom"), (accs, "accumulation")):
            for p, q in combinations(group, 2):
                if p == q:
                    raise SpecError(f"repeated {name} point {p}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "accumulations", accs)

    @property
    def approach_start(self) -> int:
        pts = list({a.point for a in self.atoms} | set(self.accumulations))
        gap = min((_pdist(p, q) for p, q in combinations(pts, 2)), default=math.inf)
        k0 = 1
        while 2.0 ** -k0 >= gap / 2:
            k0 += 1
        return k0

    def bounding_radius(self) -> float:
        pts = [a.point for a in self.atoms] + list(self.accumulations)
        r = max((abs(z) for p in pts for z in p), default=0.0)
        if self.accumulations:
            r = max(r, max(abs(z) for p in self.accumulations for z in p) + 2.0 ** -self.approach_start)
        return r


FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class ShiftSpec:
    """Unilateral weighted shift on l2(N) with eventually constant weights.

    ``forward``: e_k -> w_k e_{k+1}, with ``w_k = prefix[k]`` while ``k`` is
    inside the prefix and ``w_k = tail`` afterwards.  ``backward`` is the
    Hilbert adjoint of the forward shift with conjugated weights.
    """

    direction: str = FORWARD
    prefix: tuple = ()
    tail: float = 1.0

    def __post_init__(self):
        if self.direction not in (FORWARD, BACKWARD):
            raise SpecError(f"direction must be forward or backward, got {self.direction!r}")
        prefix = tuple(scalar(w, FLOAT) for w in self.prefix)
        if any(w == 0 for w in prefix):
            raise SpecError("shift weights must be nonzero")
        tail = float(self.tail)
        if not tail > 0 or not math.isfinite(tail):
            raise SpecError("the tail weight must be a positive real")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", tail)

    @property
    def n(self) -> int:
        return 1

    def weight(self, k: int) -> complex:
        return self.prefix[k] if k < len(self.prefix) else complex(self.tail)

    def bounding_radius(self) -> float:
        return max([self.tail] + [abs(w) for w in self.prefix])


@dataclass(frozen=True)
class StructuredTuple:
    """Tensor composite of structured parts, coordinates concatenated in order.

    One part is a tuple on l2; several parts act on the Hilbert tensor product,
    part ``i`` acting on the ``i``-th factor.
    """

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise SpecError("a structured tuple needs at least one part")
        for p in parts:
            if not isinstance(p, (DiagonalTupleSpec, ShiftSpec)):
                raise SpecError(f"unsupported structured part {p!r}")
        if sum(isinstance(p, ShiftSpec) for p in parts) > 1:
            raise SpecError("at most one shift part is supported")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(p.n for p in self.parts)


def adjoint_structured(s):
    """Hilbert adjoint of a shift or diagonal spec."""
    if isinstance(s, ShiftSpec):
        flip = BACKWARD if s.direction == FORWARD else FORWARD
        return ShiftSpec(flip, tuple(w.conjugate() for w in s.prefix), s.tail)
    if isinstance(s, DiagonalTupleSpec):
        return DiagonalTupleSpec(
            s.n,
            tuple(Atom(tuple(z.conjugate() for z in a.point), a.mult) for a in s.atoms),
            tuple(tuple(z.conjugate() for z in p) for p in s.accumulations),
        )
    if isinstance(s, StructuredTuple):
        return StructuredTuple(tuple(adjoint_structured(p) for p in s.parts))
    raise TypeError(f"no structured adjoint for {type(s).__name__}")
