"""Closed-form spectra of the structured l2 models.

A diagonal tuple is described by its multiplicity function ``m`` (how often a
point occurs in the joint symbol sequence) and its limit indicator ``L`` (the
point is a limit of symbols different from it).  At ``lam`` the joint kernel
of every power has dimension ``m(lam)``, the range sum is dense but not
closed when ``L(lam)`` holds and has codimension ``m(lam)`` otherwise.

A weighted shift with eventually constant weights is similar to ``r S`` (or
its adjoint) through a bounded diagonal with bounded inverse, so its kernel
and cokernel dimensions only depend on where ``z`` sits relative to the
circle of radius ``r``.

Everything below evaluates ``m``, ``L`` and the shift quantities on product
grids and feeds the resulting chains to :func:`jspec.chains.spectral_flags`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .chains import PointClassification, classification_from_traces, kind_of, spectral_flags
from .errors import InternalError, SpecError
from .formulas import TENSOR, region_rhs
from .operators import (BACKWARD, FORWARD, INFINITE, DiagonalTupleSpec, ShiftSpec, StructuredTuple,
                        adjoint_structured)
from .regions import DEFAULT_TOL, Circle, ClosedDisk, ConvergentSequence, FinitePoints, Region, union

STRUCTURED_K_MAX = 6


def _safe_mul(a, b):
    """Product of dimension counts with ``0 * inf = 0``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore"):
        return np.where((a == 0) | (b == 0), 0.0, a * b)


def _outer_mul(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return _safe_mul(a.reshape(a.shape + (1,) * b.ndim), b.reshape((1,) * a.ndim + b.shape))


def _axes(point) -> list:
    return [np.array([complex(z)]) for z in point]


# -- diagonal models -----------------------------------------------------------


@dataclass(frozen=True)
class DiagonalModel:
    """Joint symbol sequence of a diagonal tuple: atoms with multiplicities
    (``INFINITE`` allowed) and sequences ``limit + 2**-k * direction``,
    ``k >= start``, each term occurring once."""

    n: int
    atoms: tuple = ()
    sequences: tuple = ()

    @classmethod
    def from_spec(cls, d: DiagonalTupleSpec) -> "DiagonalModel":
        e1 = (1.0 + 0j,) + (0j,) * (d.n - 1)
        k0 = d.approach_start
        return cls(d.n, tuple((a.point, a.mult) for a in d.atoms), tuple((p, e1, k0) for p in d.accumulations))

    def project(self, keep: Sequence[int]) -> "DiagonalModel":
        """Symbol sequence of the subtuple of coordinates ``keep``.  A sequence
        whose direction vanishes collapses to a constant, i.e. an atom of
        infinite multiplicity."""
        keep = list(keep)
        atoms = {}
        for p, m in self.atoms:
            q = tuple(p[i] for i in keep)
            atoms[q] = atoms.get(q, 0) + m
        seqs = []
        for lim, d, k0 in self.sequences:
            q = tuple(lim[i] for i in keep)
            dq = tuple(d[i] for i in keep)
            if any(dq):
                seqs.append((q, dq, k0))
            else:
                atoms[q] = INFINITE
        return DiagonalModel(len(keep), tuple(atoms.items()), tuple(seqs))

    def terms(self, seq, tol: float) -> list:
        lim, d, k0 = seq
        size = math.sqrt(sum(abs(z) ** 2 for z in d))
        out, k = [], k0
        while 2.0 ** -k * size > 2 * tol:
            out.append(tuple(a + 2.0 ** -k * v for a, v in zip(lim, d)))
            k += 1
        return out

    def mult_grid(self, axes, tol: float = DEFAULT_TOL) -> np.ndarray:
        shape = tuple(len(a) for a in axes)
        m = np.zeros(shape)
        pts = [(p, mult) for p, mult in self.atoms]
        for s in self.sequences:
            pts.extend((t, 1) for t in self.terms(s, tol))
        for p, mult in pts:
            hit = FinitePoints((p,), self.n)._grid(axes, tol)
            m = np.where(hit, m + mult, m)
        return m

    def limit_grid(self, axes, tol: float = DEFAULT_TOL) -> np.ndarray:
        return FinitePoints(tuple(s[0] for s in self.sequences), self.n)._grid(axes, tol)

    def region(self, kind: str) -> Region:
        kind = kind_of(kind)
        seqs = [ConvergentSequence(*s) for s in self.sequences]
        if kind in ("delta", "pi", "sp_delta", "sp_pi"):
            return union(FinitePoints(tuple(p for p, _ in self.atoms), self.n), *seqs, n=self.n)
        pts = tuple(p for p, m in self.atoms if m == INFINITE) + tuple(s[0] for s in self.sequences)
        return FinitePoints(pts, self.n)


@dataclass(frozen=True)
class DiagonalProduct:
    """Symbol data of the tensor product of two diagonal tuples: symbols are
    all pairs, multiplicities multiply, and a pair is a limit when one side
    is a limit and the other lies in the closure of its symbols."""

    left: object
    right: object

    @property
    def n(self) -> int:
        return self.left.n + self.right.n

    def _split(self, axes):
        return axes[:self.left.n], axes[self.left.n:]

    def mult_grid(self, axes, tol: float = DEFAULT_TOL):
        a, b = self._split(axes)
        return _outer_mul(self.left.mult_grid(a, tol), self.right.mult_grid(b, tol))

    def limit_grid(self, axes, tol: float = DEFAULT_TOL):
        a, b = self._split(axes)
        ml, mr = self.left.mult_grid(a, tol), self.right.mult_grid(b, tol)
        ll, lr = self.left.limit_grid(a, tol), self.right.limit_grid(b, tol)
        return np.logical_and.outer(ll, (mr > 0) | lr) | np.logical_and.outer((ml > 0) | ll, lr)


def diagonal_traces(model, axes, k_max: int = STRUCTURED_K_MAX, tol: float = DEFAULT_TOL):
    m = model.mult_grid(axes, tol)
    lim = model.limit_grid(axes, tol)
    lower = np.where(lim, np.inf, m)
    lower = np.broadcast_to(lower, (k_max,) + lower.shape)
    upper = np.broadcast_to(m, (k_max,) + m.shape)
    return lower, upper, ~lim


def diagonal_spectrum(d: DiagonalTupleSpec, kind: str) -> Region:
    """``sigma_pi = sigma_delta`` is the closure of the symbols; the
    semi-Fredholm and semi-Browder sets are the infinite atoms together with
    the accumulation points; split sets coincide with their twins."""
    return DiagonalModel.from_spec(d).region(kind)


# -- weighted shifts -----------------------------------------------------------


def shift_quantities(s: ShiftSpec, z, k_max: int = STRUCTURED_K_MAX, tol: float = DEFAULT_TOL) -> dict:
    """Kernel and cokernel dimensions of ``(W - z)**k``, ``k = 1..k_max``,
    closedness and bounded-belowness of ``W - z`` for an array ``z``."""
    z = np.asarray(z, dtype=complex)
    rho = np.abs(z)
    inside = rho < s.tail - tol
    on = np.abs(rho - s.tail) <= tol
    ks = np.arange(1, k_max + 1).reshape((k_max,) + (1,) * z.ndim)
    zero = np.zeros((k_max,) + z.shape)
    if s.direction == FORWARD:
        ker = zero
        coker = np.where(on, np.inf, np.where(inside, ks * 1.0, 0.0))
        bounded_below = ~on
    else:
        ker = np.where(inside, ks * 1.0, zero)
        coker = np.where(on, np.inf, 0.0) + zero
        bounded_below = ~(on | inside)
    return {"ker": ker, "coker": coker, "closed": ~on, "bounded_below": bounded_below}


def shift_traces(s: ShiftSpec, axes, k_max: int = STRUCTURED_K_MAX, tol: float = DEFAULT_TOL):
    q = shift_quantities(s, axes[0], k_max, tol)
    return q["coker"], q["ker"], q["closed"]


def shift_spectrum(s: ShiftSpec, kind: str) -> Region:
    """Forward: the approximate point, semi-Fredholm and upper semi-Browder
    sets are the circle of radius ``r``, the defect and lower semi-Browder
    sets the closed disk.  The backward shift exchanges the roles."""
    kind = kind_of(kind)
    base = kind[3:] if kind.startswith("sp_") else kind
    base = {"delta_e": "phi_minus", "pi_e": "phi_plus"}.get(base, base)
    disk_kinds = {FORWARD: ("delta", "browder_minus"), BACKWARD: ("pi", "browder_plus")}[s.direction]
    if base in disk_kinds:
        return ClosedDisk(0, s.tail)
    return Circle(0, s.tail)


def fibered_traces(s: ShiftSpec, model, axes, k_max: int = STRUCTURED_K_MAX, tol: float = DEFAULT_TOL):
    """Chains of ``((W - z) (x) I, I (x) (D - w))`` on l2(N x N).

    Over the diagonal index the tuple splits into columns.  Columns whose
    symbol differs from ``w`` are covered by the invertible second coordinate,
    matched columns contribute the kernel and cokernel of ``(W - z)**k``,
    and symbols accumulating at ``w`` make the range sum non-closed (hence of
    infinite codimension) unless ``W - z`` is onto, and spoil closedness of
    the column map unless ``W - z`` is bounded below.
    """
    q = shift_quantities(s, axes[0], k_max, tol)
    m = model.mult_grid(axes[1:], tol)
    lim = model.limit_grid(axes[1:], tol)
    coker, ker = q["coker"], q["ker"]
    lower = _outer_mul(coker, m)
    hit = np.logical_and.outer(coker > 0, lim)
    lower = np.where(hit, np.inf, lower)
    upper = _outer_mul(ker, m)
    closed = np.logical_or.outer(q["closed"], m == 0) & ~np.logical_and.outer(~q["bounded_below"], lim)
    return lower, upper, closed


# -- dispatch --------------------------------------------------------------------


def _parts(obj) -> tuple:
    if isinstance(obj, StructuredTuple):
        return obj.parts
    if isinstance(obj, (ShiftSpec, DiagonalTupleSpec)):
        return (obj,)
    raise SpecError(f"not a structured model: {type(obj).__name__}")


def _diag_model(parts):
    models = [DiagonalModel.from_spec(p) for p in parts]
    out = models[0]
    for m in models[1:]:
        out = DiagonalProduct(out, m)
    return out


def structured_traces(obj, axes, k_max: int = STRUCTURED_K_MAX, tol: float = DEFAULT_TOL):
    """``(lower, upper, closed)`` arrays over the product grid ``axes``."""
    parts = _parts(obj)
    axes = [np.asarray(a, dtype=complex).ravel() for a in axes]
    shifts = [i for i, p in enumerate(parts) if isinstance(p, ShiftSpec)]
    if not shifts:
        return diagonal_traces(_diag_model(parts), axes, k_max, tol)
    if len(parts) == 1:
        return shift_traces(parts[0], axes, k_max, tol)
    if shifts != [0]:
        # move the shift coordinate to the front, evaluate, move it back
        i = shifts[0]
        pos = sum(p.n for p in parts[:i])
        order = [pos] + [j for j in range(len(axes)) if j != pos]
        lo, up, cl = structured_traces(StructuredTuple((parts[i],) + parts[:i] + parts[i + 1:]),
                                       [axes[j] for j in order], k_max, tol)
        back = np.argsort(order)
        return (np.transpose(lo, [0] + [1 + b for b in back]), np.transpose(up, [0] + [1 + b for b in back]),
                np.transpose(cl, list(back)))
    return fibered_traces(parts[0], _diag_model(parts[1:]), axes, k_max, tol)


def check_monotone(lower, upper) -> None:
    """Both chains are non-decreasing in ``k`` at every grid point."""
    for name, v in (("lower", lower), ("upper", upper)):
        v = np.asarray(v, dtype=float)
        if not np.all(v[1:] >= v[:-1]):
            raise InternalError(f"structured {name} chain is not monotone")


def structured_flags(obj, axes, k_max: int = STRUCTURED_K_MAX, tol: float = DEFAULT_TOL) -> dict:
    lower, upper, closed = structured_traces(obj, axes, k_max, tol)
    check_monotone(lower, upper)
    return spectral_flags(lower, upper, closed)


def structured_verdict(obj, point, k_max: int = STRUCTURED_K_MAX, tol: float = DEFAULT_TOL) -> PointClassification:
    """Classification of one point of a structured model."""
    pt = tuple(complex(z) for z in point)
    n = sum(p.n for p in _parts(obj))
    if len(pt) != n:
        raise SpecError(f"point of length {len(pt)} for a {n}-tuple")
    lower, upper, closed = structured_traces(obj, _axes(pt), k_max, tol)
    check_monotone(lower, upper)
    idx = (slice(None),) + (0,) * n
    return classification_from_traces(pt, lower[idx], upper[idx], bool(closed[(0,) * n]))


def fibered_tensor_verdict(s: ShiftSpec, d: DiagonalTupleSpec, point, kind: str | None = None,
                           k_max: int = STRUCTURED_K_MAX):
    """Verdict at ``(z, w)`` for ``(W (x) I, I (x) D)``; with ``kind`` only that flag."""
    v = structured_verdict(StructuredTuple((s, d)), point, k_max)
    return v.in_kind(kind) if kind is not None else v


def part_spectrum(part, kind: str) -> Region:
    """Region of one kind for a single shift or diagonal part."""
    if isinstance(part, ShiftSpec):
        return shift_spectrum(part, kind)
    return diagonal_spectrum(part, kind)


def _parts_spectrum(parts: tuple, kind: str) -> Region:
    if len(parts) == 1:
        return part_spectrum(parts[0], kind)
    head, last = parts[:-1], parts[-1]
    return region_rhs(TENSOR, kind, lambda k: _parts_spectrum(head, k), lambda k: part_spectrum(last, k),
                      sum(p.n for p in parts))


def structured_spectrum(obj, kind: str) -> Region:
    """Region of one spectrum kind.  Single parts use their closed forms;
    composites (a ``StructuredTuple`` or a plain sequence of parts, which may
    hold several shifts) combine the factor regions with the tensor product
    formulas, which are equalities on Hilbert spaces."""
    parts = tuple(obj) if isinstance(obj, (tuple, list)) else _parts(obj)
    return _parts_spectrum(parts, kind_of(kind))


# -- truncation oracle ---------------------------------------------------------------


ORACLE_N = 64
ORACLE_THRESH = 1e-13
MATCH_TOL = 1e-12
ORACLE_LEVELS = (1, 2, 3)


def _shift_matrix(s: ShiftSpec, size: int) -> np.ndarray:
    w = np.array([s.weight(k) for k in range(size - 1)], dtype=complex)
    a = np.zeros((size, size), dtype=complex)
    if s.direction == FORWARD:
        a[np.arange(1, size), np.arange(size - 1)] = w
    else:
        a[np.arange(size - 1), np.arange(1, size)] = np.conj(w)
    return a


@lru_cache(maxsize=4096)
def shift_section_singular_values(s: ShiftSpec, z: complex, k: int, n_cols: int) -> np.ndarray:
    """Singular values of ``(W - z)**k`` restricted to the first ``n_cols``
    basis vectors (a tall section, which is exact for either direction)."""
    size = n_cols + 2 * k
    a = _shift_matrix(s, size) - z * np.eye(size)
    p = np.linalg.matrix_power(a, k)[: n_cols + k, :n_cols]
    return np.linalg.svd(p, compute_uv=False)


def _symbol_list(d: DiagonalTupleSpec, level: int) -> list:
    """Truncated symbol sequence: ``level + 1`` copies of an infinite atom and
    ``4 * level`` terms of each approach sequence."""
    out = []
    for a in d.atoms:
        out.extend([a.point] * (level + 1 if a.mult == INFINITE else a.mult))
    k0 = d.approach_start
    for p in d.accumulations:
        for k in range(k0, k0 + 4 * level):
            out.append((p[0] + 2.0 ** -k,) + tuple(p[1:]))
    return out


def _oracle_pass(parts, point, k: int, level: int):
    """Near-kernel count and reduced minimum modulus of the column map
    ``x -> ((A_i - lam_i)**k x)_i`` truncated at ``level``.

    The tuple is block diagonal over the joint diagonal index, and on a block
    with diagonal offsets ``c`` the stacked map has singular values
    ``sqrt(sigma**2 + sum |c_j|**(2k))`` with ``sigma`` running over the
    shift section's singular values (or ``0`` without a shift factor).
    Blocks with some ``c_j != 0`` are injective, so only blocks with all
    offsets zero contribute to the kernel count.
    """
    sig = np.zeros(1)
    symbols = [()]
    off = 0
    for p in parts:
        coords = point[off:off + p.n]
        if isinstance(p, ShiftSpec):
            sig = shift_section_singular_values(p, complex(coords[0]), k, ORACLE_N * 2 ** (level - 1))
        else:
            syms = _symbol_list(p, level)
            symbols = [a + tuple(x - c for x, c in zip(b, coords)) for a in symbols for b in syms]
        off += p.n
    matched = np.array([all(abs(c) < MATCH_TOL for c in cs) for cs in symbols])
    weight = np.array([sum(abs(c) ** (2 * k) for c in cs) for cs in symbols])
    count = int(matched.sum()) * int((sig < ORACLE_THRESH).sum())
    live = [np.sqrt(weight[~matched].min() + sig.min() ** 2)] if (~matched).any() else []
    if matched.any() and (sig >= ORACLE_THRESH).any():
        live.append(sig[sig >= ORACLE_THRESH].min())
    return count, float(min(live)) if live else math.inf


def _decays_to_zero(g) -> bool:
    """Whether reduced minimum moduli at increasing truncation levels tend to
    zero: they must at least halve overall and still be falling at the end."""
    g1, g2, g3 = g
    return math.isfinite(g1) and g3 < 0.5 * g1 and g3 < 0.75 * g2


def _oracle_dim(parts, point, k: int):
    """``(dimension estimate, closed)`` of the joint kernel of the k-th powers."""
    runs = [_oracle_pass(parts, point, k, lvl) for lvl in ORACLE_LEVELS]
    counts = [c for c, _ in runs]
    dim = counts[0] if len(set(counts)) == 1 else INFINITE
    return dim, not _decays_to_zero([g for _, g in runs])


def truncation_verdict(obj, point, k_max: int = 4) -> PointClassification:
    """Classification read off finite sections, independent of the closed forms.

    Upper chain: near-kernel of the column map of powers.  Lower chain:
    near-kernel of the adjoint column map, which is the codimension of the
    range sum when that range is closed; a range whose adjoint map has
    reduced minimum modulus tending to zero is not closed and has infinite
    codimension.  A count that grows with the truncation level is infinite.
    """
    parts = _parts(obj)
    pt = tuple(complex(z) for z in point)
    adj = tuple(adjoint_structured(p) for p in parts)
    apt = tuple(z.conjugate() for z in pt)
    lower, upper = [], []
    closed = True
    for k in range(1, k_max + 1):
        up, cl = _oracle_dim(parts, pt, k)
        if k == 1:
            closed = cl
        upper.append(up)
        lo, acl = _oracle_dim(adj, apt, k)
        lower.append(lo if acl else INFINITE)
    return classification_from_traces(pt, lower, upper, closed)
