import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import JORDAN, diag, mat, pts, tup
from jspec.errors import ModeMismatchError, NonCommutingError
from jspec.generators import make_rng, random_tuple
from jspec.linalg import ComplexMatrix
from jspec.spectra_fd import full_spectrum
from jspec.tensor import left_mult, mult_tuple, right_mult, tensor_tuple, vec

seeds = st.integers(0, 2 ** 32 - 1)


def test_tensor_of_diagonals():
    d = tensor_tuple(tup(diag(0, 1)), tup(diag(2, 3))).tuple
    assert d[0] == diag(0, 0, 1, 1) and d[1] == diag(2, 3, 2, 3)


def test_tensor_with_scalar():
    s = tup(JORDAN, [[1, 2], [0, 1]])
    d = tensor_tuple(s, tup([[5]])).tuple
    assert d[0] == s[0] and d[1] == s[1] and d[2] == diag(5, 5)


def test_mult_identities():
    d = mult_tuple(tup(diag(1, 1)), tup(diag(1, 1, 1))).tuple
    assert d[0] == ComplexMatrix.identity(6) and d[1] == ComplexMatrix.identity(6)


def test_mult_jordan_scalar():
    d = mult_tuple(tup(JORDAN), tup([[3]])).tuple
    assert full_spectrum(d)["delta"] == pts((0, 3))


def test_factor_checks():
    with pytest.raises(NonCommutingError):
        tensor_tuple(tup(JORDAN, [[0, 0], [1, 0]]), tup([[1]]))
    with pytest.raises(ModeMismatchError):
        mult_tuple(tup(JORDAN), tup([[1.0]], mode="float"))


def test_vec_is_column_major():
    x = mat([[1, 2], [3, 4], [5, 6]])
    assert vec(x).tolist() == [[v] for v in (1, 3, 5, 2, 4, 6)]


@pytest.mark.parametrize("seed", range(100))
def test_vec_identities(seed):
    rng = make_rng(seed, 5)
    p, q = (int(v) for v in rng.integers(1, 5, 2))
    a = random_tuple(rng, 1, p)[0]
    b = random_tuple(rng, 1, q)[0]
    x = mat((rng.integers(-3, 4, (p, q)) + 1j * rng.integers(-3, 4, (p, q))).tolist())
    assert left_mult(a, q) @ vec(x) == vec(a @ x)
    assert right_mult(b, p) @ vec(x) == vec(x @ b)


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_product_tuples_against_numpy(seed, p, q):
    rng = make_rng(seed)
    s, t = random_tuple(rng, 2, p), random_tuple(rng, 1, q)
    d = tensor_tuple(s, t).tuple
    assert np.allclose(d[0].to_complex(), np.kron(s[0].to_complex(), np.eye(q)))
    assert np.allclose(d[2].to_complex(), np.kron(np.eye(p), t[0].to_complex()))
    m = mult_tuple(s, t).tuple
    assert np.allclose(m[2].to_complex(), np.kron(t[0].to_complex().T, np.eye(p)))
