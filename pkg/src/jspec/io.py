"""JSON operator specifications, point and grid strings, and value encoding.

Operator files look like::

    {"space": {"kind": "finite", "dim": 2},
     "operators": [{"kind": "dense", "entries": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}]}

    {"space": {"kind": "l2"},
     "operators": [{"kind": "shift", "direction": "forward", "prefix": [], "tail": 1},
                   {"kind": "diagonal", "n": 1, "atoms": [{"point": [[2, 0]], "mult": "inf"}],
                    "accumulations": []}]}

A scalar is ``[re, im]`` or a bare real; reals may be JSON numbers or
strings such as ``"1/3"``.  In exact mode decimals are read as exact
rationals.
"""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .errors import SpecError
from .linalg import EXACT, FLOAT, ComplexMatrix, QI, scalar
from .operators import INFINITE, Atom, DiagonalTupleSpec, FiniteTuple, ShiftSpec, StructuredTuple


def _real(x, mode: str):
    if isinstance(x, bool):
        raise SpecError(f"not a number: {x!r}")
    if isinstance(x, str):
        try:
            x = Fraction(x.strip())
        except ValueError:
            raise SpecError(f"not a number: {x!r}") from None
    if not isinstance(x, (int, float, Fraction)):
        raise SpecError(f"not a number: {x!r}")
    return Fraction(x) if mode == EXACT else float(x)


def parse_scalar(v, mode: str):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise SpecError(f"a complex scalar is [re, im], got {v!r}")
        re, im = _real(v[0], mode), _real(v[1], mode)
    else:
        re, im = _real(v, mode), 0
    return QI(re, im) if mode == EXACT else complex(re, im)


def _dense(op: dict, mode: str) -> ComplexMatrix:
    rows = op.get("entries")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SpecError("dense operator needs a non-empty list of rows")
    vals = [[parse_scalar(v, mode) for v in r] for r in rows]
    if any(len(r) != len(vals) for r in vals):
        raise SpecError("dense operators must be square")
    return ComplexMatrix.from_rows(vals, mode)


def _mult(m):
    if m in ("inf", "INF", "infinite") or m == INFINITE:
        return INFINITE
    if isinstance(m, int) and not isinstance(m, bool) and m >= 1:
        return m
    raise SpecError(f"multiplicity must be a positive integer or \"inf\", got {m!r}")


def _diagonal(op: dict) -> DiagonalTupleSpec:
    n = op.get("n")
    if not isinstance(n, int) or n < 1:
        raise SpecError("diagonal operator needs n >= 1")
    atoms = tuple(Atom(tuple(parse_scalar(z, FLOAT) for z in a["point"]), _mult(a.get("mult", 1)))
                  for a in op.get("atoms", []))
    accs = tuple(tuple(parse_scalar(z, FLOAT) for z in p) for p in op.get("accumulations", []))
    return DiagonalTupleSpec(n, atoms, accs)


def _shift(op: dict) -> ShiftSpec:
    prefix = tuple(parse_scalar(w, FLOAT) for w in op.get("prefix", []))
    return ShiftSpec(op.get("direction", "forward"), prefix, float(_real(op.get("tail", 1), FLOAT)))


def parse_operator_spec(obj, mode: str = EXACT):
    """``FiniteTuple`` for a finite space, ``StructuredTuple`` for l2."""
    if not isinstance(obj, dict) or "space" not in obj or "operators" not in obj:
        raise SpecError("expected an object with 'space' and 'operators'")
    space = obj["space"]
    ops = obj["operators"]
    if not isinstance(ops, list) or not ops:
        raise SpecError("'operators' must be a non-empty list")
    kind = space.get("kind") if isinstance(space, dict) else None
    try:
        if kind == "finite":
            mats = []
            for op in ops:
                if op.get("kind", "dense") != "dense":
                    raise SpecError("finite spaces take dense operators only")
                mats.append(_dense(op, mode))
            dim = space.get("dim")
            if dim is not None and any(m.rows != dim for m in mats):
                raise SpecError(f"operator size does not match dim {dim}")
            return FiniteTuple(tuple(mats))
        if kind == "l2":
            parts = []
            for op in ops:
                k = op.get("kind")
                if k == "diagonal":
                    parts.append(_diagonal(op))
                elif k == "shift":
                    parts.append(_shift(op))
                else:
                    raise SpecError(f"unknown l2 operator kind {k!r}")
            return StructuredTuple(tuple(parts))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, SpecError):
            raise
        raise SpecError(f"malformed operator specification: {e}") from None
    raise SpecError(f"unknown space kind {kind!r}")


def load_json(text: str, mode: str = EXACT):
    try:
        return json.loads(text, parse_float=Fraction if mode == EXACT else float)
    except json.JSONDecodeError as e:
        raise SpecError(f"invalid JSON: {e}") from None


def load_operator_file(path: str, mode: str = EXACT):
    with open(path) as f:
        return parse_operator_spec(load_json(f.read(), mode), mode)


def parse_point(text: str, mode: str = EXACT) -> tuple:
    """``"0.5,0;2,0"`` -> ``(0.5, 2)``: coordinates split by ``;``, each ``re[,im]``."""
    out = []
    for coord in text.split(";"):
        bits = [b.strip() for b in coord.split(",")]
        if not 1 <= len(bits) <= 2 or not all(bits):
            raise SpecError(f"bad point coordinate {coord!r}")
        out.append(parse_scalar(bits if len(bits) == 2 else bits[0], mode))
    return tuple(out)


def parse_grid(text: str, n: int) -> list:
    """Per-coordinate complex sample axes from ``re_min:re_max:steps[,...]``.

    One spec is used for both real axes of every coordinate, two specs are
    the real and imaginary axes shared by every coordinate, and ``2n`` specs
    give real/imaginary axes per coordinate.  A spec with ``steps == 1`` (or
    ``lo == hi``) pins that axis to a single value.
    """
    specs = []
    for part in text.split(","):
        bits = part.split(":")
        if len(bits) != 3:
            raise SpecError(f"grid spec {part!r} is not re_min:re_max:steps")
        try:
            lo, hi, steps = float(bits[0]), float(bits[1]), int(bits[2])
        except ValueError:
            raise SpecError(f"grid spec {part!r} is not re_min:re_max:steps") from None
        if steps < 1 or hi < lo:
            raise SpecError(f"grid spec {part!r} needs steps >= 1 and min <= max")
        specs.append(np.linspace(lo, hi, steps))
    if len(specs) == 1:
        specs = specs * 2 * n
    elif len(specs) == 2:
        specs = specs * n
    elif len(specs) != 2 * n:
        raise SpecError(f"grid needs 1, 2 or {2 * n} axis specs, got {len(specs)}")
    return [np.add.outer(specs[2 * i], 1j * specs[2 * i + 1]).ravel() for i in range(n)]


def encode_real(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    x = float(x)
    return int(x) if x.is_integer() and abs(x) < 2 ** 53 else x


def encode_scalar(z) -> list:
    if isinstance(z, QI):
        return [encode_real(z.re), encode_real(z.im)]
    z = complex(z)
    return [encode_real(z.real), encode_real(z.imag)]


def encode_point(p) -> list:
    return [encode_scalar(z) for z in p]


def encode_count(v):
    return "inf" if v == INFINITE else int(v)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def format_point(p) -> str:
    def one(z):
        re, im = encode_scalar(z)
        return f"{re},{im}"
    return ";".join(one(z) for z in p)


def point_from_json(p, mode: str = EXACT) -> tuple:
    return tuple(parse_scalar(z, mode) for z in p)


def scalars(values, mode: str) -> tuple:
    return tuple(scalar(v, mode) for v in values)
