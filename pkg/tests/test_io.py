from fractions import Fraction

import numpy as np
import pytest

from jspec.errors import SpecError
from jspec.io import (dumps, encode_count, encode_point, format_point, load_json, parse_grid, parse_operator_spec,
                      parse_point, parse_scalar, point_from_json)
from jspec.linalg import QI
from jspec.operators import INFINITE, FiniteTuple, ShiftSpec, StructuredTuple

FINITE = {"space": {"kind": "finite", "dim": 2},
          "operators": [{"kind": "dense", "entries": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}]}
L2 = {"space": {"kind": "l2"},
      "operators": [{"kind": "shift", "direction": "forward", "prefix": [], "tail": 1},
                    {"kind": "diagonal", "n": 1, "atoms": [{"point": [[2, 0]], "mult": "inf"}],
                     "accumulations": [[[0, 0]]]}]}


def test_scalars():
    assert parse_scalar("1/3", "exact") == QI(Fraction(1, 3))
    assert parse_scalar([1, -2], "exact") == QI(1, -2)
    assert parse_scalar(0.5, "float") == 0.5
    for bad in (True, "x", [1, 2, 3], None):
        with pytest.raises(SpecError):
            parse_scalar(bad, "exact")


def test_decimals_are_exact():
    obj = load_json('{"v": 0.1}', "exact")
    assert obj["v"] == Fraction(1, 10)
    with pytest.raises(SpecError):
        load_json("{", "exact")


def test_operator_specs():
    t = parse_operator_spec(FINITE)
    assert isinstance(t, FiniteTuple) and t.dim == 2 and t[0].entry(0, 1) == 1
    s = parse_operator_spec(L2, "float")
    assert isinstance(s, StructuredTuple) and s.n == 2
    assert s.parts[0] == ShiftSpec()
    assert s.parts[1].atoms[0].mult == INFINITE and s.parts[1].accumulations == ((0j,),)


@pytest.mark.parametrize("obj", [
    {},
    {"space": {"kind": "finite"}, "operators": []},
    {"space": {"kind": "finite", "dim": 3}, "operators": FINITE["operators"]},
    {"space": {"kind": "finite"}, "operators": [{"kind": "dense", "entries": [[1, 2]]}]},
    {"space": {"kind": "l2"}, "operators": [{"kind": "weird"}]},
    {"space": {"kind": "l2"}, "operators": [{"kind": "diagonal", "n": 1, "atoms": [{"point": [1], "mult": 0}]}]},
    {"space": {"kind": "banach"}, "operators": [{}]},
])
def test_invalid_specs(obj):
    with pytest.raises(SpecError):
        parse_operator_spec(obj)


def test_points():
    assert parse_point("0.5,0;2,0", "exact") == (QI(Fraction(1, 2)), QI(2))
    assert parse_point("1;0,1", "float") == (1, 1j)
    with pytest.raises(SpecError):
        parse_point("1,2,3")
    p = (QI(Fraction(1, 2), 1), QI(-3))
    assert encode_point(p) == [["1/2", 1], [-3, 0]]
    assert point_from_json(encode_point(p)) == p
    assert parse_point(format_point(p)) == p
    assert encode_point((0.25 + 1j,)) == [[0.25, 1]]


def test_grids():
    axes = parse_grid("-1.5:1.5:61", 1)
    assert len(axes) == 1 and axes[0].shape == (61 * 61,)
    assert np.isclose(axes[0].min().real, -1.5)
    axes = parse_grid("0:1:3,2:2:1", 2)
    assert [a.shape for a in axes] == [(3,), (3,)]
    assert np.all(axes[1].imag == 2)
    assert len(parse_grid("0:1:2,0:0:1,2:3:2,0:0:1", 2)) == 2
    for bad in ("1:0:3", "0:1", "0:1:0", "0:1:2,0:1:2,0:1:2"):
        with pytest.raises(SpecError):
            parse_grid(bad, 2)


def test_counts_and_dumps():
    assert encode_count(INFINITE) == "inf" and encode_count(3) == 3
    assert dumps({"a": [1]}) == '{\n  "a": [\n    1\n  ]\n}'
