import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import JORDAN, diag, tup
from jspec.chains import (FLAG_NAMES, SPECTRUM_KINDS, ChainTrace, chain_traces, check_chain_invariants,
                          classification_from_traces, classify_point, kind_of, mk_codim, nk_dim, spectral_flags)
from jspec.errors import InternalError
from jspec.generators import make_rng, random_tuple
from jspec.linalg import QI
from jspec.operators import INFINITE
from jspec.spectra_fd import candidate_points

seeds = st.integers(0, 2 ** 32 - 1)


def test_mk_nk_examples():
    assert mk_codim(tup(diag(0, 1)), (0,), 1) == 1
    assert mk_codim(tup(JORDAN), (0,), 2) == 2
    assert nk_dim(tup(diag(0, 1)), (0,), 1) == 1
    assert nk_dim(tup(JORDAN), (0,), 2) == 2
    assert nk_dim(tup(diag(0, 1), diag(2, 3)), (0, 3), 1) == 0
    for k in (1, 2, 5):
        assert mk_codim(tup(JORDAN), (7,), k) == 0


def test_classify_diagonal_example():
    c = classify_point(tup(diag(0, 1)), (0,))
    assert c.delta and c.pi
    assert not c.browder_minus and not c.browder_plus
    assert set(c.lower.values) == {1} and set(c.upper.values) == {1}


def test_classify_jordan_example():
    c = classify_point(tup(JORDAN), (0,))
    assert c.lower.values[:4] == (1, 2, 2, 2)
    assert c.lower.stabilized_at == 2
    assert c.delta and c.pi and not c.phi_minus


def test_classify_far_point():
    c = classify_point(tup(JORDAN, [[2, 1], [0, 2]]), (100, -100))
    assert not any(c.flags[k] for k in SPECTRUM_KINDS)
    assert c.range_closed


def test_kind_names():
    assert kind_of("browder-lower") == "browder_minus"
    assert kind_of("sp_pi_e") == "sp_pi_e"
    with pytest.raises(ValueError):
        kind_of("nonsense")


def test_flag_logic_by_hand():
    # bounded lower chain, closed range, no complement failure: only the non-invertibility flags
    f = classification_from_traces((0,), (1, 2, 2, 2), (0, 0, 0, 0)).flags
    assert f["delta"] and not f["pi"] and not f["A"] and not f["browder_minus"]
    # unbounded lower chain: ascent-type set A
    f = classification_from_traces((0,), (1, 2, 3), (0, 0, 0)).flags
    assert f["A"] and f["browder_minus"] and not f["phi_minus"]
    # infinite codimension: lower semi-Fredholm failure
    f = classification_from_traces((0,), (INFINITE,) * 3, (0, 0, 0)).flags
    assert f["phi_minus"] and f["browder_minus"] and f["sp_delta_e"]
    # non-closed range of the column map: upper flags only
    f = classification_from_traces((0,), (0, 0, 0), (0, 0, 0), closed=False).flags
    assert f["pi"] and f["phi_plus"] and f["browder_plus"] and not f["delta"]
    # complement failure only shows in the split flags
    f = classification_from_traces((0,), (1, 1, 1), (0, 0, 0), c_minus=True).flags
    assert f["sp_delta_e"] and not f["phi_minus"]
    assert set(f) == set(FLAG_NAMES)


def test_spectral_flags_vectorized():
    lower = np.array([[0, 0, 0], [1, 2, 3], [np.inf] * 3], dtype=float).T
    upper = np.zeros_like(lower)
    f = spectral_flags(lower, upper, np.array([True, True, True]))
    assert f["delta"].tolist() == [False, True, True]
    assert f["phi_minus"].tolist() == [False, False, True]


def test_trace_stabilization():
    assert ChainTrace.of("lower", (1, 2, 2, 2)).stabilized_at == 2
    assert ChainTrace.of("lower", (0, 0, 0)).stabilized_at == 1
    # too short to call stable
    assert ChainTrace.of("lower", (0, 0)).stabilized_at is None
    assert not ChainTrace.of("lower", (2, 1)).is_monotone()


def test_invariant_violations_raise():
    with pytest.raises(InternalError):
        check_chain_invariants((2, 1, 1), (0, 0, 0), 1)
    with pytest.raises(InternalError):
        check_chain_invariants((1, 2, 3), (0, 0, 0), 2)
    check_chain_invariants((1, 2, 2), (0, 0, 0), 2)


@given(seeds, st.integers(1, 3), st.integers(1, 5))
def test_chain_invariants_at_candidates(seed, n, dim):
    t = random_tuple(make_rng(seed), n, dim)
    for p in candidate_points(t).points:
        full = chain_traces(t, p, shortcut=False)
        check_chain_invariants(*full, t.dim)
        assert chain_traces(t, p) == full


@given(seeds, st.integers(1, 2), st.integers(1, 4))
def test_adjoint_duality(seed, n, dim):
    t = random_tuple(make_rng(seed), n, dim)
    ta = t.adjoint()
    for p in candidate_points(t).points:
        lo, up = chain_traces(t, p)
        lo_a, up_a = chain_traces(ta, tuple(z.conjugate() for z in p))
        assert lo == up_a and up == lo_a


@given(seeds, st.integers(1, 5))
def test_single_operator_eigenvalues(seed, dim):
    t = random_tuple(make_rng(seed), 1, dim)
    eig = np.linalg.eigvals(t[0].to_complex())
    for re in range(-3, 4):
        for im in range(-3, 4):
            c = classify_point(t, (QI(re, im),))
            is_eig = bool(np.any(np.abs(eig - complex(re, im)) < 1e-6))
            assert c.delta == c.pi == is_eig
            assert not c.phi_minus and not c.browder_plus
