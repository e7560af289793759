"""Seeded random instances: commuting tuples, polynomial maps and structured specs.

Commuting tuples are direct sums of blocks; on each block every operator is
a polynomial in one random upper-triangular Gaussian-integer matrix, so the
tuple commutes exactly and stays simultaneously upper triangular.  An
optional conjugation by a random unimodular integer matrix hides the
triangular form while keeping integer inverses.
"""
from __future__ import annotations

import numpy as np

from .linalg import ComplexMatrix
from .operators import INFINITE, Atom, DiagonalTupleSpec, FiniteTuple, ShiftSpec, BACKWARD, FORWARD
from .spectra_fd import PolynomialMap


def _gauss_int(rng, lo=-2, hi=2, complex_prob=0.25) -> tuple:
    re = int(rng.integers(lo, hi + 1))
    im = int(rng.integers(lo, hi + 1)) if rng.random() < complex_prob else 0
    return re, im


def _upper(rng, d: int, eigen_pool: list) -> ComplexMatrix:
    rows = [[(0, 0)] * d for _ in range(d)]
    for i in range(d):
        rows[i][i] = eigen_pool[int(rng.integers(len(eigen_pool)))]
        for j in range(i + 1, d):
            if rng.random() < 0.6:
                rows[i][j] = _gauss_int(rng)
    return ComplexMatrix.from_rows(rows)


def _poly_of(a: ComplexMatrix, coeffs: list) -> ComplexMatrix:
    out = ComplexMatrix.zeros(a.rows, a.cols)
    p = ComplexMatrix.identity(a.rows)
    for c in coeffs:
        out = out + p.scale(c)
        p = p @ a
    return out


def _direct_sum(blocks: list) -> ComplexMatrix:
    d = sum(b.rows for b in blocks)
    rows = [[0] * d for _ in range(d)]
    off = 0
    for b in blocks:
        for i, r in enumerate(b.tolist()):
            for j, z in enumerate(r):
                rows[off + i][off + j] = z
        off += b.rows
    return ComplexMatrix.from_rows(rows)


def unimodular(rng, d: int, steps: int | None = None):
    """Random integer ``U`` with integer inverse, as a product of elementary
    row operations."""
    u = np.eye(d, dtype=object)
    ui = np.eye(d, dtype=object)
    for _ in range(steps if steps is not None else 2 * d):
        if d < 2:
            break
        i, j = rng.choice(d, size=2, replace=False)
        c = int(rng.choice([-1, 1]))
        # U <- E U with E = I + c e_i e_j^T, inverse I - c e_i e_j^T
        u[i, :] = u[i, :] + c * u[j, :]
        ui[:, j] = ui[:, j] - c * ui[:, i]
    return ComplexMatrix.from_int_arrays(u), ComplexMatrix.from_int_arrays(ui)


def random_tuple(rng, n: int, dim: int, conjugate: bool = False, max_block: int = 3) -> FiniteTuple:
    """Random exactly commuting ``n``-tuple on ``C^dim`` (exact mode)."""
    pool = [_gauss_int(rng, -2, 2, 0.2) for _ in range(max(1, int(rng.integers(1, 4))))]
    sizes = []
    left = dim
    while left:
        s = int(rng.integers(1, min(max_block, left) + 1))
        sizes.append(s)
        left -= s
    per_op = [[] for _ in range(n)]
    for s in sizes:
        base = _upper(rng, s, pool)
        for j in range(n):
            deg = int(rng.integers(0, 3))
            coeffs = [_gauss_int(rng, -2, 2, 0.2) for _ in range(deg + 1)]
            if deg and all(c == (0, 0) for c in coeffs[1:]):
                coeffs[-1] = (1, 0)
            per_op[j].append(_poly_of(base, coeffs))
    ops = [_direct_sum(bl) for bl in per_op]
    t = FiniteTuple(tuple(ops))
    if conjugate and dim > 1:
        u, ui = unimodular(rng, dim)
        t = t.conjugate_by(u, ui)
    return t


def random_pair(rng, max_n: int = 2, max_dim: int = 5, conjugate: bool = False):
    s = random_tuple(rng, int(rng.integers(1, max_n + 1)), int(rng.integers(1, max_dim + 1)), conjugate)
    t = random_tuple(rng, int(rng.integers(1, max_n + 1)), int(rng.integers(1, max_dim + 1)), conjugate)
    return s, t


def random_polynomial(rng, n: int, m: int | None = None, max_degree: int = 3) -> PolynomialMap:
    m = m if m is not None else int(rng.integers(1, 3))
    comps = []
    for _ in range(m):
        comp = {}
        for _ in range(int(rng.integers(1, 4))):
            total = int(rng.integers(0, max_degree + 1))
            e = [0] * n
            for _ in range(total):
                e[int(rng.integers(n))] += 1
            c = _gauss_int(rng, -3, 3, 0.2)
            if c != (0, 0):
                comp[tuple(e)] = comp.get(tuple(e), 0) + complex(*c)
        comps.append({e: (int(c.real) if c.imag == 0 else (int(c.real), int(c.imag))) for e, c in comp.items()}
                     or {(0,) * n: 1})
    return PolynomialMap(n, tuple(comps))


def _spec_point(rng, n: int, used: set) -> tuple:
    while True:
        p = tuple(complex(int(rng.integers(-2, 3)), int(rng.integers(-1, 2)) if rng.random() < 0.3 else 0)
                  for _ in range(n))
        if p not in used:
            used.add(p)
            return p


def random_diagonal_spec(rng, n: int = 1, max_atoms: int = 3, max_accs: int = 2) -> DiagonalTupleSpec:
    """Diagonal spec with small Gaussian-integer descriptor points."""
    used: set = set()
    atoms = []
    for _ in range(int(rng.integers(0, max_atoms + 1))):
        mult = INFINITE if rng.random() < 0.35 else int(rng.integers(1, 4))
        atoms.append(Atom(_spec_point(rng, n, used), mult))
    accs = [_spec_point(rng, n, set()) for _ in range(int(rng.integers(0, max_accs + 1)))]
    accs = list(dict.fromkeys(accs))
    if not atoms and not accs:
        atoms.append(Atom(_spec_point(rng, n, used), 1))
    return DiagonalTupleSpec(n, tuple(atoms), tuple(accs))


def random_shift_spec(rng) -> ShiftSpec:
    direction = FORWARD if rng.random() < 0.5 else BACKWARD
    prefix = tuple(complex(int(rng.integers(1, 4)), 0) for _ in range(int(rng.integers(0, 3))))
    tail = float(rng.choice([0.5, 1.0, 1.5, 2.0]))
    return ShiftSpec(direction, prefix, tail)


def make_rng(seed: int, *stream) -> np.random.Generator:
    """Independent deterministic stream for ``(seed, *stream)``."""
    return np.random.default_rng([seed, *stream])
