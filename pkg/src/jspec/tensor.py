"""Derived tuples: the Kronecker tensor tuple and the multiplication tuple.

Matrices ``X`` of size ``p x q`` are vectorized column-major (``vec`` stacks
columns), so ``vec(A X) = (I_q (x) A) vec(X)`` and
``vec(X B) = (B^T (x) I_p) vec(X)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ModeMismatchError
from .linalg import ComplexMatrix, kron
from .operators import FiniteTuple, require_commuting


@dataclass(frozen=True, eq=False)
class TensorTuple:
    """``(S_1 (x) I, ..., S_n (x) I, I (x) T_1, ..., I (x) T_m)``."""

    tuple: FiniteTuple
    left: FiniteTuple
    right: FiniteTuple


@dataclass(frozen=True, eq=False)
class MultTuple:
    """``(L_{S_1}, ..., L_{S_n}, R_{T_1}, ..., R_{T_m})`` on vectorized ``p x q`` matrices."""

    tuple: FiniteTuple
    left: FiniteTuple
    right: FiniteTuple


def _check(s: FiniteTuple, t: FiniteTuple):
    if s.mode != t.mode:
        raise ModeMismatchError("factor tuples must share a mode")
    require_commuting(s)
    require_commuting(t)


def tensor_tuple(s: FiniteTuple, t: FiniteTuple) -> TensorTuple:
    _check(s, t)
    ip = ComplexMatrix.identity(s.dim, s.mode)
    iq = ComplexMatrix.identity(t.dim, t.mode)
    ops = tuple(kron(a, iq) for a in s.ops) + tuple(kron(ip, b) for b in t.ops)
    out = FiniteTuple(ops)
    require_commuting(out)
    return TensorTuple(out, s, t)


def left_mult(a: ComplexMatrix, q: int) -> ComplexMatrix:
    """``X -> A X`` on ``p x q`` matrices."""
    return kron(ComplexMatrix.identity(q, a.mode), a)


def right_mult(b: ComplexMatrix, p: int) -> ComplexMatrix:
    """``X -> X B`` on ``p x q`` matrices."""
    return kron(b.transpose(), ComplexMatrix.identity(p, b.mode))


def vec(x: ComplexMatrix) -> ComplexMatrix:
    """Column-major vectorization as a column vector."""
    cols = [[x.entry(i, j)] for j in range(x.cols) for i in range(x.rows)]
    return ComplexMatrix.from_rows(cols, x.mode, shape=(x.rows * x.cols, 1))


def mult_tuple(s: FiniteTuple, t: FiniteTuple) -> MultTuple:
    _check(s, t)
    ops = tuple(left_mult(a, t.dim) for a in s.ops) + tuple(right_mult(b, s.dim) for b in t.ops)
    out = FiniteTuple(ops)
    require_commuting(out)
    return MultTuple(out, s, t)
