"""Range-sum and joint-kernel chains, and per-point classification.

For a commuting tuple ``T`` and a point ``lam`` the lower chain is
``codim M_k(T - lam)`` with ``M_k = R(T_1^k) + ... + R(T_n^k)`` and the upper
chain is ``dim N_k`` with ``N_k = N(T_1^k) cap ... cap N(T_n^k)``.  Every
membership flag (defect, approximate point, semi-Fredholm, semi-Browder and
the split variants) is derived from these two chains plus closedness of the
range of ``x -> (T_1 x, ..., T_n x)``; the derivation in
:func:`spectral_flags` is shared by the finite-dimensional and the structured
engines and works elementwise on arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InternalError
from .linalg import ComplexMatrix, RankConfig, cokernel_dim, hstack, kernel_dim, rank, vstack
from .operators import INFINITE, FiniteTuple, as_point, require_commuting, translate

# canonical spectrum kinds, in report order
SPECTRUM_KINDS = (
    "delta", "pi", "phi_minus", "phi_plus", "browder_minus", "browder_plus",
    "sp_delta", "sp_pi", "sp_delta_e", "sp_pi_e", "sp_browder_minus", "sp_browder_plus",
)

KIND_NAMES = {
    "defect": "delta",
    "approx-point": "pi",
    "fredholm-lower": "phi_minus",
    "fredholm-upper": "phi_plus",
    "browder-lower": "browder_minus",
    "browder-upper": "browder_plus",
    "split-defect": "sp_delta",
    "split-approx-point": "sp_pi",
    "split-defect-essential": "sp_delta_e",
    "split-approx-point-essential": "sp_pi_e",
    "split-browder-lower": "sp_browder_minus",
    "split-browder-upper": "sp_browder_plus",
}
KIND_LABELS = {v: k for k, v in KIND_NAMES.items()}

FLAG_NAMES = (
    "delta", "pi", "phi_minus", "phi_plus", "browder_minus", "browder_plus",
    "A", "D", "C_minus", "C_plus", "A_tilde", "D_tilde",
    "sp_delta", "sp_pi", "sp_delta_e", "sp_pi_e", "sp_browder_minus", "sp_browder_plus",
)


def kind_of(name: str) -> str:
    """Canonical kind from either a canonical or a CLI name."""
    if name in SPECTRUM_KINDS:
        return name
    try:
        return KIND_NAMES[name]
    except KeyError:
        raise ValueError(f"unknown spectrum kind {name!r}; choose from {sorted(KIND_NAMES)}") from None


def _final_run_start(values: Sequence) -> int | None:
    """1-based start of the final constant run if it has length >= 3."""
    if len(values) < 3:
        return None
    j = len(values) - 1
    while j > 0 and values[j - 1] == values[-1]:
        j -= 1
    return j + 1 if len(values) - j >= 3 else None


@dataclass(frozen=True)
class ChainTrace:
    """Values for ``k = 1..k_max`` of ``codim M_k`` (lower) or ``dim N_k`` (upper)."""

    kind: str
    values: tuple
    stabilized_at: int | None = field(default=None)

    @classmethod
    def of(cls, kind: str, values) -> "ChainTrace":
        values = tuple(INFINITE if v == INFINITE else int(v) for v in values)
        return cls(kind, values, _final_run_start(values))

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.values, self.values[1:]))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "values": ["inf" if v == INFINITE else v for v in self.values],
            "stabilized_at": self.stabilized_at,
        }


def spectral_flags(lower, upper, closed, c_minus=False, c_plus=False) -> dict:
    """Membership flags from chain values.

    ``lower`` and ``upper`` have shape ``(k_max, *points)`` with ``inf`` for an
    infinite codimension or dimension; ``closed`` (shape ``points``) says
    whether the range of ``x -> (T_i x)_i`` is closed.  ``c_minus`` and
    ``c_plus`` mark points where the kernel of the sum map, respectively the
    range of the column map, has no direct complement.
    """
    lo = np.asarray(lower, dtype=float)
    up = np.asarray(upper, dtype=float)
    closed = np.asarray(closed, dtype=bool)
    if lo.shape[0] < 3 or up.shape[0] < 3:
        raise ValueError("chains need at least three terms to judge stabilization")
    c_minus = np.broadcast_to(np.asarray(c_minus, dtype=bool), closed.shape)
    c_plus = np.broadcast_to(np.asarray(c_plus, dtype=bool), closed.shape)

    lo_stable = (lo[-1] == lo[-2]) & (lo[-2] == lo[-3])
    up_stable = (up[-1] == up[-2]) & (up[-2] == up[-3])
    lo_finite_pos = np.all((lo >= 1) & np.isfinite(lo), axis=0)
    up_finite_pos = np.all((up >= 1) & np.isfinite(up), axis=0)

    f = {}
    f["delta"] = lo[0] != 0
    f["phi_minus"] = ~np.isfinite(lo[0])
    f["A"] = lo_finite_pos & ~lo_stable
    f["browder_minus"] = f["phi_minus"] | f["A"]
    f["pi"] = (up[0] != 0) | ~closed
    f["phi_plus"] = ~np.isfinite(up[0]) | ~closed
    f["D"] = closed & up_finite_pos & ~up_stable
    f["browder_plus"] = f["phi_plus"] | f["D"]
    f["C_minus"] = c_minus
    f["C_plus"] = c_plus
    f["sp_delta"] = f["delta"] | c_minus
    f["sp_delta_e"] = f["phi_minus"] | c_minus
    f["A_tilde"] = f["A"] & ~f["sp_delta_e"]
    f["sp_browder_minus"] = f["sp_delta_e"] | f["A_tilde"]
    f["sp_pi"] = f["pi"] | c_plus
    f["sp_pi_e"] = f["phi_plus"] | c_plus
    f["D_tilde"] = f["D"] & ~f["sp_pi_e"]
    f["sp_browder_plus"] = f["sp_pi_e"] | f["D_tilde"]
    check_flag_invariants(f)
    return f


def _implies(a, b) -> bool:
    return bool(np.all(~np.asarray(a) | np.asarray(b)))


def check_flag_invariants(f: dict) -> None:
    """Inclusion chains and the disjoint decompositions; raises on violation."""
    chains = [
        ("phi_minus", "browder_minus"), ("browder_minus", "delta"),
        ("phi_plus", "browder_plus"), ("browder_plus", "pi"),
        ("sp_delta_e", "sp_browder_minus"), ("sp_browder_minus", "sp_delta"),
        ("sp_pi_e", "sp_browder_plus"), ("sp_browder_plus", "sp_pi"),
        ("browder_minus", "sp_browder_minus"), ("browder_plus", "sp_browder_plus"),
        ("A_tilde", "A"), ("D_tilde", "D"),
    ]
    for a, b in chains:
        if not _implies(f[a], f[b]):
            raise InternalError(f"flag implication {a} => {b} violated")
    if np.any(f["phi_minus"] & f["A"]) or np.any(f["phi_plus"] & f["D"]):
        raise InternalError("semi-Browder decomposition is not disjoint")
    if np.any(f["browder_minus"] != (f["phi_minus"] | f["A"])):
        raise InternalError("lower semi-Browder flag differs from its decomposition")
    if np.any(f["sp_browder_minus"] != (f["sp_delta_e"] | f["A_tilde"])):
        raise InternalError("split lower semi-Browder flag differs from its decomposition")
    if np.any(f["sp_browder_plus"] != (f["sp_pi_e"] | f["D_tilde"])):
        raise InternalError("split upper semi-Browder flag differs from its decomposition")


@dataclass(frozen=True)
class PointClassification:
    """All membership flags of one point, with the chains that produced them."""

    point: tuple
    lower: ChainTrace
    upper: ChainTrace
    range_closed: bool
    flags: dict

    def __getattr__(self, name):
        flags = object.__getattribute__(self, "flags")
        if name in flags:
            return flags[name]
        raise AttributeError(name)

    def in_kind(self, kind: str) -> bool:
        return self.flags[kind_of(kind)]

    def to_json(self, point_encoder=None) -> dict:
        enc = point_encoder or (lambda p: [str(z) for z in p])
        return {
            "point": enc(self.point),
            "flags": {k: bool(self.flags[k]) for k in FLAG_NAMES},
            "range_closed": bool(self.range_closed),
            "traces": {"lower": self.lower.to_json(), "upper": self.upper.to_json()},
        }


StructuredVerdict = PointClassification


def classification_from_traces(point, lower: Sequence, upper: Sequence, closed: bool = True,
                               c_minus: bool = False, c_plus: bool = False) -> PointClassification:
    lo = ChainTrace.of("lower", lower)
    up = ChainTrace.of("upper", upper)
    f = spectral_flags(np.array(lo.values, dtype=float), np.array(up.values, dtype=float), closed, c_minus, c_plus)
    return PointClassification(tuple(point), lo, up, bool(closed), {k: bool(v) for k, v in f.items()})


def _shifted_powers(t: FiniteTuple, lam, k: int) -> list:
    shifted = translate(t, lam)
    return [a.power(k) for a in shifted.ops]


def mk_codim(t: FiniteTuple, lam, k: int, cfg: RankConfig | None = None) -> int:
    """``codim (R((T_1-lam_1)^k) + ... + R((T_n-lam_n)^k))``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return cokernel_dim(hstack(_shifted_powers(t, lam, k)), cfg or RankConfig(t.mode))


def nk_dim(t: FiniteTuple, lam, k: int, cfg: RankConfig | None = None) -> int:
    """``dim (N((T_1-lam_1)^k) cap ... cap N((T_n-lam_n)^k))``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return kernel_dim(vstack(_shifted_powers(t, lam, k)), cfg or RankConfig(t.mode))


def _ascent(a: ComplexMatrix, cfg: RankConfig) -> int:
    """Least ``k`` with ``rank a^k == rank a^(k+1)``; ranges and kernels of
    all higher powers coincide from there on."""
    prev = a.rows
    p = ComplexMatrix.identity(a.rows, a.mode)
    for k in range(0, a.rows + 1):
        p = p @ a
        r = rank(p, cfg)
        if r == prev:
            return k
        prev = r
    return a.rows


def chain_traces(t: FiniteTuple, lam, cfg: RankConfig | None = None, k_max: int | None = None,
                 shortcut: bool = True):
    """Lower and upper chain values for ``k = 1..k_max`` (default ``dim + 2``).

    Powers are built incrementally.  Once every coordinate has reached its
    ascent the chains are constant, so later terms are copied instead of
    recomputed; ``shortcut=False`` computes every term.
    """
    cfg = cfg or RankConfig(t.mode)
    k_max = t.dim + 2 if k_max is None else k_max
    shifted = translate(t, lam).ops
    settle = max(_ascent(a, cfg) for a in shifted) if shortcut else k_max
    lower, upper = [], []
    powers = list(shifted)
    for k in range(1, k_max + 1):
        if k > max(settle, 1):
            lower.append(lower[-1])
            upper.append(upper[-1])
            continue
        if k > 1:
            powers = [p @ a for p, a in zip(powers, shifted)]
        lower.append(cokernel_dim(hstack(powers), cfg))
        upper.append(kernel_dim(vstack(powers), cfg))
    return lower, upper


def check_chain_invariants(lower: Sequence, upper: Sequence, dim: int) -> None:
    """Both chains are non-decreasing and constant from ``k = dim`` on."""
    for name, vals in (("lower", lower), ("upper", upper)):
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise InternalError(f"{name} chain {tuple(vals)} is not monotone")
        if len(set(vals[dim - 1:])) > 1:
            raise InternalError(f"{name} chain {tuple(vals)} moves after k = {dim}")


def classify_point(t: FiniteTuple, lam, cfg: RankConfig | None = None, k_max: int | None = None,
                   shortcut: bool = True) -> PointClassification:
    """Full classification of ``lam`` for a finite-dimensional commuting tuple.

    Ranges are closed and every subspace is complemented in finite
    dimension, so ``closed`` is true and the complement-failure sets are empty;
    all other flags come from the chains through :func:`spectral_flags`.
    """
    require_commuting(t)
    cfg = cfg or RankConfig(t.mode)
    k_max = t.dim + 2 if k_max is None else k_max
    if k_max < 3:
        raise ValueError("k_max must be at least 3")
    lower, upper = chain_traces(t, lam, cfg, k_max, shortcut)
    check_chain_invariants(lower, upper, t.dim)
    return classification_from_traces(as_point(lam, t.n, t.mode), lower, upper, closed=True)
