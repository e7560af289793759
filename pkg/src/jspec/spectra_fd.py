"""Whole spectra of finite-dimensional commuting tuples.

Every flag can only be true at a joint eigenvalue, so a spectrum is found by
enumerating the joint diagonal values of a simultaneous triangularization and
classifying each of them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .chains import SPECTRUM_KINDS, PointClassification, classify_point, kind_of, nk_dim
from .errors import DeflationError, ShapeError
from .linalg import EXACT, FLOAT, ComplexMatrix, QI, RankConfig, scalar, scalar_key
from .operators import FiniteTuple, require_commuting

TRIANGULAR = "triangular-diagonal"
DEFLATION = "deflation"
DEDUPE_TOL = 1e-8


def point_key(p: tuple) -> tuple:
    return tuple(scalar_key(z) for z in p)


@dataclass(frozen=True)
class CandidateSet:
    points: tuple
    provenance: str

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _dedupe(points, mode: str) -> tuple:
    points = sorted(points, key=point_key)
    if mode == EXACT:
        out = []
        for p in points:
            if not out or out[-1] != p:
                out.append(p)
        return tuple(out)
    out = []
    for p in points:
        if not any(max(abs(a - b) for a, b in zip(p, q)) < DEDUPE_TOL for q in out):
            out.append(p)
    return tuple(out)


def _clusters(vals: np.ndarray, tol: float) -> list:
    """Single-linkage clusters of eigenvalues, as index lists."""
    order = list(range(len(vals)))
    groups = []
    while order:
        grp = [order.pop(0)]
        grown = True
        while grown:
            grown = False
            for i in list(order):
                if min(abs(vals[i] - vals[j]) for j in grp) < tol:
                    grp.append(i)
                    order.remove(i)
                    grown = True
        groups.append(grp)
    return groups


def _cluster_tolerances(a: np.ndarray, scale: float = 1.0) -> list:
    """Cluster radii to try, widest first.  A defective eigenvalue of a block
    of size ``m`` splits like ``eps**(1/m)``, so the widest radius assumes the
    worst case ``m = dim``.  ``scale`` carries the size of the matrices a
    restricted block came from, whose rounding errors it inherits."""
    d = a.shape[0]
    scale = max(1.0, scale, float(np.max(np.abs(a))))
    floor = 1e-7 * scale
    widest = max(floor, 10 * (np.finfo(float).eps * scale * d) ** (1.0 / d))
    out = [widest]
    while out[-1] / 30 > floor:
        out.append(out[-1] / 30)
    return out + [floor]


def _joint_values(mats: Sequence[np.ndarray], tol: float | None = None, scale: float = 1.0) -> list:
    """``(point, multiplicity)`` pairs of a commuting family by deflation.

    The generalized eigenspaces of the first matrix are invariant under the
    rest; each one is split off with a sorted Schur form and the remaining
    matrices are recursed on, restricted to it.
    """
    a = mats[0]
    d = a.shape[0]
    vals = np.linalg.eigvals(a)
    scale = max([scale] + [float(np.max(np.abs(m))) for m in mats])
    if tol is None:
        last = None
        for tol in _cluster_tolerances(a, scale):
            try:
                return _joint_values(mats, tol, scale)
            except DeflationError as e:
                last = e
        raise last
    groups = _clusters(vals, tol)
    centers = [complex(np.mean(vals[g])) for g in groups]
    for i, j in ((i, j) for i in range(len(centers)) for j in range(i)):
        if abs(centers[i] - centers[j]) < 2 * tol:
            raise DeflationError("eigenvalue clusters are too close to separate")
    out = []
    for c, g in sorted(zip(centers, groups), key=lambda cg: (cg[0].real, cg[0].imag)):
        if len(g) == d:
            q = np.eye(d, dtype=complex)
        else:
            _, z, sdim = scipy.linalg.schur(a, output="complex", sort=lambda x, c=c: abs(x - c) < tol)
            if sdim != len(g):
                raise DeflationError(f"invariant subspace of size {sdim} for a cluster of {len(g)} eigenvalues")
            q = z[:, :sdim]
        center = complex(np.trace(q.conj().T @ a @ q)) / len(g)
        if len(mats) == 1:
            out.append(((center,), len(g)))
            continue
        rest = [q.conj().T @ m @ q for m in mats[1:]]
        for tail, mult in _joint_values(rest, None, scale):
            out.append(((center,) + tail, mult))
    return out


def _round_exact(z: complex, max_den: int = 10 ** 4) -> QI:
    return QI(Fraction(z.real).limit_denominator(max_den), Fraction(z.imag).limit_denominator(max_den))


def _permuted_triangular(ops: Sequence[ComplexMatrix]) -> bool:
    """Whether one reordering of the basis makes every operator upper
    triangular: the off-diagonal pattern, read as "row before column", must
    be acyclic."""
    graph = {i: set() for i in range(ops[0].rows)}
    for a in ops:
        re, im, _ = a.int_parts()
        for r, c in zip(*np.nonzero((re != 0) | (im != 0))):
            if r != c:
                graph[int(c)].add(int(r))
    try:
        TopologicalSorter(graph).prepare()
    except CycleError:
        return False
    return True


def candidate_points(t: FiniteTuple, cfg: RankConfig | None = None) -> CandidateSet:
    """Joint diagonal values of a simultaneous triangularization of ``t``.

    Exact tuples that are upper triangular after one common reordering of the
    basis (tensor and multiplication tuples of triangular factors are) are
    read off their diagonals; a basis permutation keeps each index's diagonal
    entry.  Anything else is deflated in floating point; in exact mode the
    rounded candidates are then certified by checking that their generalized
    joint eigenspaces fill the whole space, and a failed certificate raises
    :class:`DeflationError`.
    """
    require_commuting(t)
    cfg = cfg or RankConfig(t.mode)
    if t.mode == EXACT and _permuted_triangular(t.ops):
        diags = [a.diagonal() for a in t.ops]
        return CandidateSet(_dedupe(zip(*diags), EXACT), TRIANGULAR)
    mats = [a.to_complex() for a in t.ops]
    if t.mode == FLOAT:
        found = _joint_values(mats)
        return CandidateSet(_dedupe([p for p, _ in found], FLOAT), DEFLATION)
    covered = 0
    scale = max(float(np.max(np.abs(m))) for m in mats)
    for tol in _cluster_tolerances(mats[0], scale):
        try:
            found = _joint_values(mats, tol, scale)
        except DeflationError:
            continue
        pts = _dedupe([tuple(_round_exact(z) for z in p) for p, _ in found], EXACT)
        covered = sum(nk_dim(t, p, t.dim, cfg) for p in pts)
        if covered == t.dim:
            return CandidateSet(pts, DEFLATION)
    raise DeflationError(
        f"rounded joint eigenvalues cover {covered} of {t.dim} dimensions; "
        "exact enumeration needs Gaussian-rational joint eigenvalues")


@dataclass(frozen=True)
class FiniteSpectrum:
    """Every spectrum kind of a finite-dimensional tuple as a finite point set."""

    n: int
    sets: Mapping
    classifications: tuple
    candidates: CandidateSet

    def __getitem__(self, kind: str) -> frozenset:
        return self.sets[kind_of(kind)]

    def sorted(self, kind: str) -> list:
        return sorted(self[kind], key=point_key)


def full_spectrum(t: FiniteTuple, cfg: RankConfig | None = None, k_max: int | None = None) -> FiniteSpectrum:
    """Classify every candidate; points off the candidate set are in no spectrum."""
    cfg = cfg or RankConfig(t.mode)
    cands = candidate_points(t, cfg)
    cls = tuple(classify_point(t, p, cfg, k_max) for p in cands)
    sets = {k: frozenset(c.point for c in cls if c.flags[k]) for k in SPECTRUM_KINDS}
    return FiniteSpectrum(t.n, sets, cls, cands)


def classification_at(spec: FiniteSpectrum, point) -> PointClassification | None:
    for c in spec.classifications:
        if c.point == tuple(point):
            return c
    return None


# -- polynomial maps -----------------------------------------------------------


@dataclass(frozen=True)
class PolynomialMap:
    """Polynomial map ``C^n -> C^m``; component ``i`` maps exponent tuples to
    coefficients."""

    n: int
    components: tuple

    def __post_init__(self):
        comps = tuple(dict(c) for c in self.components)
        if not comps:
            raise ShapeError("a polynomial map needs at least one component")
        for c in comps:
            for e in c:
                if len(e) != self.n or any(int(x) != x or x < 0 for x in e):
                    raise ShapeError(f"bad exponent {e!r} for {self.n} variables")
        object.__setattr__(self, "components", comps)

    @property
    def m(self) -> int:
        return len(self.components)

    def degree(self) -> int:
        return max((sum(e) for c in self.components for e, a in c.items() if a != 0), default=0)

    def __call__(self, point, mode: str = EXACT) -> tuple:
        pt = tuple(scalar(z, mode) for z in point)
        out = []
        for comp in self.components:
            acc = scalar(0, mode)
            for e, a in comp.items():
                term = scalar(a, mode)
                for z, k in zip(pt, e):
                    term = term * z ** k
                acc = acc + term
            out.append(acc)
        return tuple(out)


def polynomial_image(t: FiniteTuple, p: PolynomialMap, cfg: RankConfig | None = None) -> FiniteTuple:
    """The tuple ``(p_1(T), ..., p_m(T))``."""
    require_commuting(t)
    if p.n != t.n:
        raise ShapeError(f"polynomial in {p.n} variables applied to a {t.n}-tuple")
    powers = {}

    def pw(j, k):
        if (j, k) not in powers:
            powers[(j, k)] = t.ops[j].power(k)
        return powers[(j, k)]

    ident = ComplexMatrix.identity(t.dim, t.mode)
    ops = []
    for comp in p.components:
        acc = ComplexMatrix.zeros(t.dim, t.dim, t.mode)
        for e, a in sorted(comp.items()):
            term = ident
            for j, k in enumerate(e):
                if k:
                    term = term @ pw(j, k)
            acc = acc + term.scale(a)
        ops.append(acc)
    return FiniteTuple(tuple(ops))
