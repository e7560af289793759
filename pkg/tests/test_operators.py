import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import JORDAN, diag, mat, tup
from jspec.errors import NonCommutingError, ShapeError, SpecError
from jspec.generators import make_rng, random_tuple
from jspec.linalg import ComplexMatrix, QI
from jspec.operators import (INFINITE, Atom, DiagonalTupleSpec, FiniteTuple, ShiftSpec, StructuredTuple,
                             adjoint_structured, power_tuple, require_commuting, translate,
                             validate_commuting)

seeds = st.integers(0, 2 ** 32 - 1)


def test_validate_commuting_reports_pair():
    v = validate_commuting(tup(JORDAN, [[0, 0], [1, 0]]))
    assert not v and v.pair == (1, 2) and v.residual > 0
    with pytest.raises(NonCommutingError):
        require_commuting(tup(JORDAN, [[0, 0], [1, 0]]))
    assert validate_commuting(tup(JORDAN, [[2, 3], [0, 2]]))


def test_validate_commuting_float_tolerance():
    a = [[1.0, 0.0], [0.0, 2.0]]
    b = [[3.0, 1e-13], [0.0, 4.0]]
    assert validate_commuting(tup(a, b, mode="float"))
    assert not validate_commuting(tup(a, [[3.0, 1e-3], [0.0, 4.0]], mode="float"))


def test_shapes_checked():
    with pytest.raises(ShapeError):
        FiniteTuple((mat(JORDAN), ComplexMatrix.identity(3)))
    with pytest.raises(ShapeError):
        FiniteTuple(())
    with pytest.raises(ShapeError):
        translate(tup(JORDAN), (1, 2))


def test_translate_example():
    t = translate(tup(diag(1, 2), diag(3, 4)), (1, 3))
    assert t[0] == diag(0, 1) and t[1] == diag(0, 1)


def test_power_tuple_example():
    p = power_tuple(tup(JORDAN, diag(2, 3)), 2)
    assert p[0].is_zero() and p[1] == diag(4, 9)
    with pytest.raises(ValueError):
        power_tuple(tup(JORDAN), 0)


def test_adjoint_structured_examples():
    s = ShiftSpec("forward", (2 + 1j,), 1.5)
    a = adjoint_structured(s)
    assert a.direction == "backward" and a.prefix == (2 - 1j,) and a.tail == 1.5
    assert adjoint_structured(a) == s
    d = DiagonalTupleSpec(1, (Atom((1j,), INFINITE),), ((2 - 1j,),))
    ad = adjoint_structured(d)
    assert ad.atoms[0].point == (-1j,) and ad.atoms[0].mult == INFINITE
    assert ad.accumulations == ((2 + 1j,),)
    assert adjoint_structured(adjoint_structured(d)) == d
    st_ = StructuredTuple((s, d))
    assert adjoint_structured(adjoint_structured(st_)) == st_


def test_structured_validation():
    with pytest.raises(SpecError):
        ShiftSpec("sideways")
    with pytest.raises(SpecError):
        ShiftSpec(prefix=(0,))
    with pytest.raises(SpecError):
        ShiftSpec(tail=0)
    with pytest.raises(SpecError):
        Atom((1,), 0)
    with pytest.raises(SpecError):
        DiagonalTupleSpec(1, (), ((1,), (1,)))
    with pytest.raises(SpecError):
        DiagonalTupleSpec(1, (Atom((1,), 1), Atom((1,), 2)))
    with pytest.raises(SpecError):
        StructuredTuple((ShiftSpec(), ShiftSpec()))


def test_approach_start_separates_points():
    d = DiagonalTupleSpec(1, (Atom((0,), 1),), ((1,),))
    assert d.approach_start == 2
    assert d.bounding_radius() == pytest.approx(1.25)


@given(seeds, st.integers(1, 3), st.integers(1, 5), st.booleans())
def test_random_tuples_commute(seed, n, dim, conjugate):
    t = random_tuple(make_rng(seed), n, dim, conjugate)
    assert t.n == n and t.dim == dim
    assert validate_commuting(t)


@given(seeds, st.integers(-3, 3), st.integers(-3, 3))
def test_translate_round_trip(seed, re, im):
    t = random_tuple(make_rng(seed), 2, 3)
    lam = (QI(re, im), QI(im, re))
    assert translate(translate(t, lam), tuple(-z for z in lam)) == t


@given(seeds, st.integers(1, 4))
def test_power_matches_repeated_product(seed, k):
    t = random_tuple(make_rng(seed), 2, 3)
    naive = [ComplexMatrix.identity(3) for _ in range(2)]
    for _ in range(k):
        naive = [p @ a for p, a in zip(naive, t.ops)]
    assert list(power_tuple(t, k).ops) == naive
    ref = [np.linalg.matrix_power(a.to_complex(), k) for a in t.ops]
    assert all(np.allclose(a.to_complex(), r) for a, r in zip(power_tuple(t, k).ops, ref))
