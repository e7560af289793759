import pytest
from hypothesis import given, strategies as st

from helpers import JORDAN, diag, mat, tup
from jspec.errors import NonCommutingError
from jspec.generators import make_rng, random_pair, random_tuple, unimodular
from jspec.koszul import build_koszul, homology_dims, kunneth, tensor_total_complex
from jspec.linalg import ComplexMatrix, kernel_dim
from jspec.spectra_fd import candidate_points
from jspec.tensor import tensor_tuple

seeds = st.integers(0, 2 ** 32 - 1)


def test_single_operator_boundary_is_the_operator():
    a = mat([[1, 2], [0, 3]])
    k = build_koszul(tup(a), (0,))
    assert k.chain_dims == (2, 2)
    assert k.boundary(1) == a


def test_zero_pair_on_line():
    k = build_koszul(tup([[0]], [[0]]), (0, 0))
    assert k.chain_dims == (1, 2, 1)
    assert k.boundary(1).shape == (1, 2) and k.boundary(1).is_zero()
    assert k.boundary(2).shape == (2, 1) and k.boundary(2).is_zero()
    assert homology_dims(k).dims == (1, 2, 1)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_zero_pair_homology(d):
    z = ComplexMatrix.zeros(d, d)
    assert homology_dims(build_koszul(tup(z, z), (0, 0))).dims == (d, 2 * d, d)


def test_single_zero_and_jordan():
    assert homology_dims(build_koszul(tup([[0, 0], [0, 0]]), (0,))).dims == (2, 2)
    assert homology_dims(build_koszul(tup(JORDAN), (0,))).dims == (1, 1)


def test_joint_eigenvector_kernel():
    k = build_koszul(tup(diag(0, 1), diag(2, 3)), (0, 2))
    assert kernel_dim(k.boundary(2)) == 1


def test_total_complex_examples():
    z = build_koszul(tup([[0]]), (0,))
    assert homology_dims(tensor_total_complex(z, z)).dims == (1, 2, 1)
    inv = build_koszul(tup(mat([[2, 1], [0, 3]])), (0,))
    total = tensor_total_complex(build_koszul(tup(JORDAN), (0,)), inv)
    assert set(homology_dims(total).dims) == {0}


def test_non_commuting_rejected():
    with pytest.raises(NonCommutingError):
        build_koszul(tup(JORDAN, [[0, 0], [1, 0]]), (0, 0))


def test_kunneth_convolution():
    assert kunneth((1, 1), (1, 1)) == (1, 2, 1)
    assert kunneth((2, 3, 1), (0, 1)) == (0, 2, 3, 1)


@given(seeds, st.integers(1, 3), st.integers(1, 4))
def test_square_zero_and_euler_characteristic(seed, n, dim):
    rng = make_rng(seed)
    t = random_tuple(rng, n, dim)
    pts = candidate_points(t).points
    lam = pts[int(rng.integers(len(pts)))]
    k = build_koszul(t, lam)
    assert k.check_square_zero()
    h = homology_dims(k)
    assert all(v >= 0 for v in h.dims)
    assert h.euler_characteristic() == 0


@given(seeds, st.integers(1, 2), st.integers(2, 4))
def test_homology_similarity_invariant(seed, n, dim):
    rng = make_rng(seed)
    t = random_tuple(rng, n, dim)
    u, ui = unimodular(rng, dim)
    lam = candidate_points(t).points[0]
    assert homology_dims(build_koszul(t.conjugate_by(u, ui), lam)) == homology_dims(build_koszul(t, lam))


@given(seeds)
def test_total_complex_matches_kronecker_tuple(seed):
    rng = make_rng(seed)
    s, t = random_pair(rng, 2, 3)
    p = candidate_points(s).points[0]
    q = candidate_points(t).points[0]
    ks, kt = build_koszul(s, p), build_koszul(t, q)
    direct = homology_dims(build_koszul(tensor_tuple(s, t).tuple, p + q)).dims
    assert homology_dims(tensor_total_complex(ks, kt)).dims == direct
    assert direct == kunneth(homology_dims(ks).dims, homology_dims(kt).dims)
