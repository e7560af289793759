from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from helpers import JORDAN, diag, mat
from jspec.errors import ModeMismatchError
from jspec.linalg import (ComplexMatrix, QI, RankConfig, cokernel_dim, hstack, kernel_dim, kron, rank, scalar,
                          vstack)

gauss = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).map(lambda p: QI(*p))


@st.composite
def matrices(draw, max_side=5, rows=None, cols=None):
    r = rows or draw(st.integers(1, max_side))
    c = cols or draw(st.integers(1, max_side))
    # low-rank products show up far more often than from iid entries
    k = draw(st.integers(0, min(r, c)))
    a = draw(st.lists(st.lists(gauss, min_size=k, max_size=k), min_size=r, max_size=r))
    b = draw(st.lists(st.lists(gauss, min_size=c, max_size=c), min_size=k, max_size=k))
    if k == 0:
        return ComplexMatrix.zeros(r, c)
    return mat(a) @ mat(b)


def sympy_rank(m: ComplexMatrix) -> int:
    rows = [[sympy.Rational(z.re) + sympy.I * sympy.Rational(z.im) for z in row] for row in m.tolist()]
    return sympy.Matrix(rows).rank(simplify=True)


def test_qi_arithmetic():
    a, b = QI(1, 2), QI(Fraction(1, 2), -1)
    assert a * a.conjugate() == 5
    assert (a / b) * b == a
    assert a ** 0 == 1 and a ** 3 == a * a * a
    assert -a + a == 0
    assert complex(b) == 0.5 - 1j
    with pytest.raises(ZeroDivisionError):
        a / QI(0)


def test_scalar_modes():
    assert scalar(0.5, "exact") == QI(Fraction(1, 2))
    assert scalar(1 + 2j, "exact") == QI(1, 2)
    assert scalar(1, "float") == 1 + 0j


def test_rank_examples():
    assert rank(ComplexMatrix.zeros(2, 2)) == 0
    assert rank(ComplexMatrix.identity(2)) == 2
    assert rank(mat(JORDAN)) == 1
    for mode in ("exact", "float"):
        assert rank(mat(JORDAN, mode)) == 1


def test_kernel_cokernel_examples():
    j = mat(JORDAN)
    assert kernel_dim(j) == 1 and cokernel_dim(j) == 1
    wide = hstack([j, j @ j])
    assert wide.shape == (2, 4)
    assert cokernel_dim(wide) == 1
    tall = vstack([j, j @ j])
    assert kernel_dim(tall) == 1
    assert cokernel_dim(mat([[1, 2], [2, 4]])) == 1


def test_kron_example():
    k = kron(diag(0, 1), diag(2, 3))
    assert k == diag(0, 0, 2, 3)


def test_complex_rank_needs_gaussian_pivots():
    # rank 1 over C although no real row combination vanishes
    m = mat([[QI(1), QI(0, 1)], [QI(0, 1), QI(-1)]])
    assert rank(m) == 1
    assert rank(mat(m.to_complex().tolist(), "float")) == 1


def test_mode_mismatch():
    with pytest.raises(ModeMismatchError):
        hstack([mat(JORDAN), mat(JORDAN, "float")])


def test_float_rank_relative_tolerance():
    m = ComplexMatrix.from_numpy(np.diag([1.0, 1e-14]))
    assert rank(m, RankConfig("float")) == 1
    assert rank(m, RankConfig("float", rel_tolerance=1e-16)) == 2


@given(matrices())
def test_exact_rank_matches_sympy(m):
    assert rank(m) == sympy_rank(m)


@given(matrices())
def test_exact_and_float_rank_agree(m):
    assert rank(m) == rank(ComplexMatrix.from_numpy(m.to_complex()), RankConfig("float"))


@given(matrices(max_side=3), matrices(max_side=3))
def test_rank_of_kron_is_product(a, b):
    assert rank(kron(a, b)) == rank(a) * rank(b)


@given(matrices(max_side=4, rows=4, cols=4), st.permutations(range(4)), st.integers(0, 10 ** 6))
def test_rank_invariant_under_invertible_maps(m, perm, seed):
    rng = np.random.default_rng(seed)
    p = ComplexMatrix.identity(4).to_complex()[list(perm)]
    # unit upper triangular Gaussian-integer matrix: invertible over Z[i]
    u = np.triu(rng.integers(-2, 3, (4, 4)) + 1j * rng.integers(-2, 3, (4, 4)), 1) + np.eye(4)
    pm, um = mat(p.tolist()), mat(u.tolist())
    assert rank(pm @ m @ um) == rank(m)
    assert kernel_dim(m) + rank(m) == m.cols
    assert cokernel_dim(m) + rank(m) == m.rows


@given(matrices(max_side=4))
def test_adjoint_preserves_rank(m):
    assert rank(m.adjoint()) == rank(m)
    assert m.adjoint().adjoint() == m
