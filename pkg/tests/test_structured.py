import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jspec.chains import SPECTRUM_KINDS
from jspec.formulas import SPLIT_TWIN
from jspec.generators import make_rng, random_diagonal_spec, random_shift_spec
from jspec.operators import INFINITE, Atom, DiagonalTupleSpec, ShiftSpec, StructuredTuple, adjoint_structured
from jspec.regions import Circle, ClosedDisk, FinitePoints, is_compact
from jspec.structured import (DiagonalModel, diagonal_spectrum, fibered_tensor_verdict, shift_spectrum,
                              structured_flags, structured_spectrum, structured_verdict, truncation_verdict)
from jspec.verify import oracle_anchors, part_axes

seeds = st.integers(0, 2 ** 32 - 1)
FORWARD = ShiftSpec("forward", (), 1.0)
ADJOINT_KIND = {"delta": "pi", "pi": "delta", "phi_minus": "phi_plus", "phi_plus": "phi_minus",
                "browder_minus": "browder_plus", "browder_plus": "browder_minus"}


def atoms(*pairs):
    return DiagonalTupleSpec(1, tuple(Atom((p,), m) for p, m in pairs))


def test_diagonal_infinite_atom():
    d = atoms((0, INFINITE))
    assert diagonal_spectrum(d, "phi_plus") == FinitePoints(((0,),), 1)
    assert diagonal_spectrum(d, "pi") == FinitePoints(((0,),), 1)
    v = truncation_verdict(d, (0,))
    assert v.phi_plus and v.upper.values[0] == INFINITE


def test_diagonal_finite_atom():
    d = atoms((2, 3))
    assert diagonal_spectrum(d, "pi") == FinitePoints(((2,),), 1)
    assert diagonal_spectrum(d, "phi_plus").is_empty()
    assert diagonal_spectrum(d, "browder_plus").is_empty()
    v = truncation_verdict(d, (2,))
    assert v.upper.values == (3, 3, 3, 3) and not v.phi_plus


def test_diagonal_accumulation():
    d = DiagonalTupleSpec(1, (), ((0,),))
    assert diagonal_spectrum(d, "pi").contains(0)
    assert diagonal_spectrum(d, "pi").contains(2.0 ** -d.approach_start)
    assert diagonal_spectrum(d, "phi_plus") == FinitePoints(((0,),), 1)
    v = truncation_verdict(d, (0,))
    assert not v.range_closed and v.phi_plus
    assert structured_verdict(d, (0,)).flags == v.flags


def test_forward_shift_regions():
    assert shift_spectrum(FORWARD, "browder_minus") == ClosedDisk(0, 1)
    assert shift_spectrum(FORWARD, "browder_plus") == Circle(0, 1)
    assert shift_spectrum(FORWARD, "delta") == ClosedDisk(0, 1)
    for k in ("pi", "phi_minus", "phi_plus"):
        assert shift_spectrum(FORWARD, k) == Circle(0, 1)
    assert shift_spectrum(ShiftSpec("backward"), "browder_plus") == ClosedDisk(0, 1)
    assert shift_spectrum(ShiftSpec("backward"), "browder_minus") == Circle(0, 1)


@pytest.mark.parametrize("z", [0, 0.5, 0.5j, -0.25])
def test_forward_shift_chain_inside_disk(z):
    v = structured_verdict(FORWARD, (z,))
    assert v.lower.values[:4] == (1, 2, 3, 4)
    assert v.A and v.browder_minus and not v.phi_minus
    o = truncation_verdict(FORWARD, (z,))
    assert o.lower.values == (1, 2, 3, 4) and o.flags == v.flags


def test_fibered_examples():
    v = fibered_tensor_verdict(FORWARD, atoms((2, INFINITE)), (0.5, 2))
    assert v.phi_minus and v.browder_minus and v.lower.values[0] == INFINITE
    v = fibered_tensor_verdict(FORWARD, atoms((2, 1)), (0.5, 2))
    assert v.lower.values[:4] == (1, 2, 3, 4)
    assert v.A and v.browder_minus and not v.phi_minus
    assert fibered_tensor_verdict(FORWARD, atoms((2, 1)), (0.5, 2), "browder-lower")
    o = truncation_verdict(StructuredTuple((FORWARD, atoms((2, 1)))), (0.5, 2))
    assert o.lower.values == (1, 2, 3, 4) and o.flags == v.flags
    for d in (atoms((2, 1)), atoms((3, INFINITE)), DiagonalTupleSpec(1, (), ((1,),))):
        for w in (2, 3, 1, 0):
            v = fibered_tensor_verdict(FORWARD, d, (3, w))
            assert not any(v.flags[k] for k in SPECTRUM_KINDS)


def test_structured_composite_regions():
    parts = (FORWARD, atoms((2, 1)))
    r = structured_spectrum(StructuredTuple(parts), "browder_minus")
    assert r.contains((0.5, 2)) and r.contains((1, 2)) and not r.contains((0.5, 3)) and not r.contains((1.5, 2))
    assert structured_spectrum(StructuredTuple(parts), "phi_minus").contains((1, 2))
    assert not structured_spectrum(StructuredTuple(parts), "phi_minus").contains((0.5, 2))
    # several shifts are allowed as a plain sequence of parts
    two = structured_spectrum((FORWARD, ShiftSpec("backward")), "browder_minus")
    assert two.contains((0.5, 1)) and two.contains((1, 1j))
    assert not two.contains((1, 0.5)) and not two.contains((0.5, 0.5))


def test_model_projection_collapses_sequences():
    d = DiagonalTupleSpec(2, (Atom((0, 1), 2), Atom((0, 2), 1)), ((5, 5),))
    m = DiagonalModel.from_spec(d).project([1])
    assert dict(m.atoms) == {(1,): 2, (2,): 1, (5,): INFINITE}
    assert m.sequences == ()
    m0 = DiagonalModel.from_spec(d).project([0])
    assert dict(m0.atoms) == {(0,): 3}
    assert len(m0.sequences) == 1


@pytest.mark.parametrize("kind", SPECTRUM_KINDS)
def test_adjoint_swaps_kinds(kind):
    base = kind[3:] if kind.startswith("sp_") else kind
    if base not in ADJOINT_KIND:
        return
    s = ShiftSpec("forward", (2j,), 1.5)
    r = structured_spectrum(s, kind)
    ra = structured_spectrum(adjoint_structured(s), ADJOINT_KIND[base])
    for z in (0, 0.75, 1.5, 1.5j, 2):
        assert r.contains(z) == ra.contains(np.conj(z))


def _random_parts(seed):
    rng = make_rng(seed, 98)
    kind = seed % 3
    if kind == 0:
        return (random_diagonal_spec(rng),)
    if kind == 1:
        return random_diagonal_spec(rng), random_diagonal_spec(rng)
    return random_shift_spec(rng), random_diagonal_spec(rng)


@pytest.mark.parametrize("seed", range(40, 70))
def test_closed_forms_agree_with_truncation_oracle(seed):
    parts = _random_parts(seed)
    obj = StructuredTuple(parts)
    for pt in itertools.product(*[a for p in parts for a in oracle_anchors(p)]):
        v, o = structured_verdict(obj, pt), truncation_verdict(obj, pt)
        assert v.flags == o.flags, (parts, pt)


@settings(max_examples=15)
@given(seeds)
def test_inclusion_chains_on_grid(seed):
    parts = _random_parts(seed)
    axes = [a for p in parts for a in part_axes(p, 21)]
    f = structured_flags(StructuredTuple(parts), axes)
    chains = [("phi_minus", "browder_minus"), ("browder_minus", "delta"), ("phi_plus", "browder_plus"),
              ("browder_plus", "pi")]
    for small, big in chains + [(k, SPLIT_TWIN[k]) for k in SPLIT_TWIN]:
        assert not np.any(f[small] & ~f[big]), (small, big)


@given(seeds)
def test_regions_compact_and_match_flags(seed):
    parts = _random_parts(seed)
    axes = [a for p in parts for a in part_axes(p, 9)]
    f = structured_flags(StructuredTuple(parts), axes)
    for k in SPECTRUM_KINDS:
        r = structured_spectrum(StructuredTuple(parts), k)
        assert is_compact(r)
        assert np.array_equal(r.grid(axes), f[k]), k
