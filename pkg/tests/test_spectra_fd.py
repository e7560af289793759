import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import JORDAN, diag, mat, pts, tup
from jspec.chains import SPECTRUM_KINDS, classify_point
from jspec.errors import DeflationError
from jspec.generators import make_rng, random_polynomial, random_tuple
from jspec.linalg import QI, RankConfig, scalar
from jspec.tensor import mult_tuple
from jspec.spectra_fd import (DEFLATION, TRIANGULAR, PolynomialMap, candidate_points, classification_at,
                              full_spectrum, polynomial_image)

seeds = st.integers(0, 2 ** 32 - 1)
FREDHOLM_KINDS = ("phi_minus", "phi_plus", "browder_minus", "browder_plus",
                  "sp_delta_e", "sp_pi_e", "sp_browder_minus", "sp_browder_plus")


def test_candidate_examples():
    c = candidate_points(tup(diag(0, 1), diag(2, 3)))
    assert set(c.points) == pts((0, 2), (1, 3)) and c.provenance == TRIANGULAR
    assert set(candidate_points(tup(JORDAN)).points) == pts((0,))
    s = diag(1, 1, 2)
    t = mat([[4, 1, 0], [0, 5, 0], [0, 0, 6]])
    assert set(candidate_points(tup(s, t)).points) == pts((1, 4), (1, 5), (2, 6))


def test_full_spectrum_examples():
    sp = full_spectrum(tup(diag(0, 1)))
    assert sp["delta"] == sp["pi"] == pts((0,), (1,))
    for k in FREDHOLM_KINDS:
        assert sp[k] == frozenset()
    sp = full_spectrum(tup(diag(0, 1), diag(2, 3)))
    assert sp["defect"] == pts((0, 2), (1, 3))
    assert sp.sorted("delta") == sorted(pts((0, 2), (1, 3)), key=lambda p: [(z.re, z.im) for z in p])
    assert classification_at(sp, next(iter(pts((0, 2))))).delta
    assert classification_at(sp, (QI(5), QI(5))) is None


def test_reordered_triangular_tuples_read_off_exactly():
    lower = tup([[1, 0], [5, 2]])
    c = candidate_points(lower)
    assert c.provenance == TRIANGULAR and set(c.points) == pts((1,), (2,))
    # multiplication tuples mix upper and lower triangular operators
    m = mult_tuple(tup(mat([[1, 1, 0], [0, 1, 2], [0, 0, 3]])), tup(mat([[4, 1], [0, 5]]))).tuple
    assert not all(a.is_upper_triangular() for a in m.ops)
    c = candidate_points(m)
    assert c.provenance == TRIANGULAR
    assert set(c.points) == pts(*[(a, b) for a in (1, 3) for b in (4, 5)])


def test_conjugated_tuple_uses_deflation():
    rng = make_rng(3)
    t = random_tuple(rng, 2, 4, conjugate=True)
    c = candidate_points(t)
    plain = candidate_points(tup(*t.ops))
    assert set(c.points) == set(plain.points)
    if not all(a.is_upper_triangular() for a in t.ops):
        assert c.provenance == DEFLATION


def test_deflation_rejects_irrational_eigenvalues():
    # eigenvalues +-sqrt(2) are not Gaussian rationals
    with pytest.raises(DeflationError):
        candidate_points(tup([[0, 2], [1, 0]]))
    c = candidate_points(tup([[0, 2], [1, 0]], mode="float"))
    assert sorted(round(z[0].real, 9) for z in c.points) == [round(-2 ** 0.5, 9), round(2 ** 0.5, 9)]


def test_polynomial_image_examples():
    t = tup(diag(0, 1), diag(2, 3))
    ident = PolynomialMap(2, ({(1, 0): 1}, {(0, 1): 1}))
    assert polynomial_image(t, ident) == t
    prod = PolynomialMap(2, ({(1, 1): 1},))
    assert polynomial_image(t, prod)[0] == diag(0, 3)
    sq = PolynomialMap(1, ({(2,): 1},))
    assert polynomial_image(tup(JORDAN), sq)[0].is_zero()


@given(seeds, st.integers(1, 3), st.integers(1, 5), st.booleans())
def test_sp_sets_equal_plain_sets(seed, n, dim, conjugate):
    sp = full_spectrum(random_tuple(make_rng(seed), n, dim, conjugate))
    for k in ("delta", "pi"):
        assert sp["sp_" + k] == sp[k]
    for k in FREDHOLM_KINDS:
        assert sp[k] == frozenset()
    assert sp["delta"] == sp["pi"] == frozenset(sp.candidates.points)


@given(seeds, st.integers(1, 2), st.integers(1, 4))
def test_off_candidate_points_are_regular(seed, n, dim):
    rng = make_rng(seed)
    t = random_tuple(rng, n, dim)
    cands = set(candidate_points(t).points)
    for _ in range(8):
        p = tuple(QI(int(rng.integers(-3, 4)), int(rng.integers(-3, 4))) for _ in range(n))
        c = classify_point(t, p)
        assert any(c.flags[k] for k in SPECTRUM_KINDS) == (p in cands)


@given(seeds, st.integers(1, 2), st.integers(1, 4))
def test_float_mode_matches_exact(seed, n, dim):
    t = random_tuple(make_rng(seed), n, dim)
    exact = full_spectrum(t)["delta"]
    tf = tup(*[a.to_complex().tolist() for a in t.ops], mode="float")
    flt = full_spectrum(tf, RankConfig("float"))["delta"]
    assert len(flt) == len(exact)
    for p in exact:
        assert any(max(abs(complex(a) - b) for a, b in zip(p, q)) < 1e-6 for q in flt)


@given(seeds, st.integers(1, 2), st.integers(1, 4))
def test_polynomial_image_commutes_and_matches_numpy(seed, n, dim):
    rng = make_rng(seed)
    t = random_tuple(rng, n, dim)
    p = random_polynomial(rng, n)
    img = polynomial_image(t, p)
    for comp, out in zip(p.components, img.ops):
        ref = np.zeros((dim, dim), dtype=complex)
        for e, a in comp.items():
            term = scalar(a, "float") * np.eye(dim)
            for op, k in zip(t.ops, e):
                term = term @ np.linalg.matrix_power(op.to_complex(), k)
            ref += term
        assert np.allclose(out.to_complex(), ref)
