"""Koszul complexes of commuting tuples and their homology dimensions.

Chains of degree ``p`` live in ``X (x) Lambda^p C^n``; the basis is block
ordered by the ``p``-subsets of ``{0..n-1}`` in lexicographic order, each block
being a copy of ``X``.  The boundary of ``x (x) e_I`` with ``I = (i_1 < ... < i_p)``
is ``sum_j (-1)**(j-1) (T_{i_j} - lam_{i_j}) x (x) e_{I minus i_j}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import InternalError, ModeMismatchError
from .linalg import EXACT, FLOAT, ComplexMatrix, RankConfig, block, kron, rank
from .operators import FiniteTuple, require_commuting, translate


@dataclass(frozen=True)
class HomologyProfile:
    dims: tuple

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * h for p, h in enumerate(self.dims))

    def __getitem__(self, p):
        return self.dims[p]

    def __len__(self):
        return len(self.dims)


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Finite chain complex ``C_N -> ... -> C_1 -> C_0``.

    ``boundaries[p - 1]`` is ``d_p : C_p -> C_{p-1}``.
    """

    chain_dims: tuple
    boundaries: tuple
    mode: str

    @property
    def top(self) -> int:
        return len(self.chain_dims) - 1

    def boundary(self, p: int) -> ComplexMatrix:
        return self.boundaries[p - 1]

    def check_square_zero(self, atol: float = 1e-9) -> bool:
        for p in range(1, self.top):
            prod = self.boundary(p) @ self.boundary(p + 1)
            if self.mode == EXACT:
                if not prod.is_zero():
                    return False
            elif prod.max_abs() > atol:
                return False
        return True


@dataclass(frozen=True, eq=False)
class KoszulComplex(ChainComplex):
    n: int = 0
    dim: int = 0


def _assemble(entries, n_rows: int, n_cols: int, ops: Sequence[ComplexMatrix], d: int, mode: str) -> ComplexMatrix:
    """Block matrix with ``d x d`` blocks ``sign * ops[k]`` at ``(row, col)``."""
    shape = (n_rows * d, n_cols * d)
    if mode == FLOAT:
        out = np.zeros(shape, dtype=np.complex128)
        for (bi, bj), (sign, k) in entries.items():
            out[bi * d:(bi + 1) * d, bj * d:(bj + 1) * d] = sign * ops[k].to_complex()
        return ComplexMatrix(FLOAT, shape, data=out)
    den = 1
    for a in ops:
        den = den * a.int_parts()[2] // math.gcd(den, a.int_parts()[2])
    re = np.empty(shape, dtype=object)
    re.fill(0)
    im = np.empty(shape, dtype=object)
    im.fill(0)
    scaled = []
    for a in ops:
        r, i, dd = a.int_parts()
        f = den // dd
        scaled.append((r * f, i * f) if f != 1 else (r, i))
    for (bi, bj), (sign, k) in entries.items():
        r, i = scaled[k]
        re[bi * d:(bi + 1) * d, bj * d:(bj + 1) * d] = r if sign > 0 else -r
        im[bi * d:(bi + 1) * d, bj * d:(bj + 1) * d] = i if sign > 0 else -i
    return ComplexMatrix(EXACT, shape, re=re, im=im, den=int(den))


def koszul_of_shifted(ops: Sequence[ComplexMatrix]) -> KoszulComplex:
    """Koszul complex of an already translated tuple (no commutation check)."""
    n = len(ops)
    d = ops[0].rows
    mode = ops[0].mode
    bases = [list(combinations(range(n), p)) for p in range(n + 1)]
    index = [{s: i for i, s in enumerate(b)} for b in bases]
    bounds = []
    for p in range(1, n + 1):
        entries = {}
        for col, subset in enumerate(bases[p]):
            for j, i in enumerate(subset):
                face = subset[:j] + subset[j + 1:]
                entries[(index[p - 1][face], col)] = (1 if j % 2 == 0 else -1, i)
        bounds.append(_assemble(entries, len(bases[p - 1]), len(bases[p]), ops, d, mode))
    dims = tuple(d * comb(n, p) for p in range(n + 1))
    return KoszulComplex(dims, tuple(bounds), mode, n=n, dim=d)


def build_koszul(t: FiniteTuple, lam=None) -> KoszulComplex:
    """Koszul complex of ``t - lam``; ``d o d = 0`` is verified."""
    require_commuting(t)
    shifted = translate(t, lam) if lam is not None else t
    k = koszul_of_shifted(shifted.ops)
    if not k.check_square_zero():
        raise InternalError("Koszul boundary does not square to zero")
    return k


def boundary_ranks(k: ChainComplex, cfg: RankConfig | None = None) -> list:
    cfg = cfg or RankConfig(k.mode)
    return [0] + [rank(k.boundary(p), cfg) for p in range(1, k.top + 1)] + [0]


def homology_dims(k: ChainComplex, cfg: RankConfig | None = None) -> HomologyProfile:
    """``h_p = dim ker d_p - rank d_{p+1}``."""
    ranks = boundary_ranks(k, cfg)
    dims = []
    for p, c in enumerate(k.chain_dims):
        h = c - ranks[p] - ranks[p + 1]
        if h < 0:
            raise InternalError(f"negative homology dimension at degree {p}")
        dims.append(h)
    return HomologyProfile(tuple(dims))


def _identity(n: int, mode: str) -> ComplexMatrix:
    return ComplexMatrix.identity(n, mode) if n else ComplexMatrix.zeros(0, 0, mode)


def tensor_total_complex(k1: ChainComplex, k2: ChainComplex) -> ChainComplex:
    """Total complex of ``k1 (x) k2`` with ``d = d1 (x) 1 + eta (x) d2``.

    ``eta`` is ``(-1)**p`` on degree ``p`` of the left factor.  Degree ``r``
    is ordered by ``p`` descending; inside a block the Kronecker order is used.
    """
    if k1.mode != k2.mode:
        raise ModeMismatchError("tensor of exact and float complexes")
    mode = k1.mode
    n1, n2 = k1.top, k2.top
    blocks = [[(p, r - p) for p in range(min(r, n1), max(0, r - n2) - 1, -1)] for r in range(n1 + n2 + 1)]
    dims = tuple(sum(k1.chain_dims[p] * k2.chain_dims[q] for p, q in bl) for bl in blocks)
    bounds = []
    for r in range(1, n1 + n2 + 1):
        grid = []
        for (pt, qt) in blocks[r - 1]:
            row = []
            for (p, q) in blocks[r]:
                rows_ = k1.chain_dims[pt] * k2.chain_dims[qt]
                cols_ = k1.chain_dims[p] * k2.chain_dims[q]
                if (pt, qt) == (p - 1, q):
                    b = kron(k1.boundary(p), _identity(k2.chain_dims[q], mode))
                elif (pt, qt) == (p, q - 1):
                    b = kron(_identity(k1.chain_dims[p], mode), k2.boundary(q))
                    if p % 2:
                        b = -b
                else:
                    b = ComplexMatrix.zeros(rows_, cols_, mode)
                row.append(b)
            grid.append(row)
        bounds.append(block(grid))
    total = ChainComplex(dims, tuple(bounds), mode)
    if not total.check_square_zero():
        raise InternalError("total complex boundary does not square to zero")
    return total


def kunneth(h1: Sequence[int], h2: Sequence[int]) -> tuple:
    """Convolution ``h_r = sum_{p+q=r} h1_p * h2_q``."""
    out = [0] * (len(h1) + len(h2) - 1)
    for p, a in enumerate(h1):
        for q, b in enumerate(h2):
            out[p + q] += a * b
    return tuple(out)
