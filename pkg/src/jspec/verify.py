"""Checks of the product formulas and the basic spectral properties.

Every check runs over seeded random instances (or one explicit instance) and
produces a :class:`VerificationReport`.  Finite-dimensional checks compare
finite point sets computed exactly by :mod:`jspec.spectra_fd`; structured
checks compare the closed-form composite engine with region formulas on a
product grid, and the closed forms with the truncation oracle at anchor
points.  A failing instance always lists concrete counterexample points.
"""
from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .chains import (SPECTRUM_KINDS, chain_traces, check_chain_invariants, classification_from_traces,
                     classify_point)
from .errors import InternalError, NonCommutingError, SpecError
from .formulas import FAMILIES, SPLIT_TWIN, TENSOR, finite_rhs, region_rhs
from .generators import (make_rng, random_diagonal_spec, random_pair, random_polynomial, random_shift_spec,
                         random_tuple)
from .io import encode_count, encode_point, parse_operator_spec
from .koszul import build_koszul, homology_dims, kunneth, tensor_total_complex
from .linalg import EXACT, FLOAT, ComplexMatrix, RankConfig
from .operators import INFINITE, Atom, DiagonalTupleSpec, FiniteTuple, ShiftSpec, StructuredTuple
from .regions import DEFAULT_TOL, is_compact, project
from .spectra_fd import (PolynomialMap, candidate_points, classification_at, full_spectrum, point_key,
                         polynomial_image)
from .structured import (DiagonalModel, part_spectrum, structured_flags, structured_spectrum,
                         structured_verdict, truncation_verdict)
from .tensor import mult_tuple, tensor_tuple

CHECK_NAMES = (
    "kunneth", "prop41", "prop42", "thm51-fd", "thm51-structured", "prop61", "prop62", "thm63",
    "projection", "mapping", "inclusion-chains", "compactness",
)

# finite-dimensional formula checks: family and the kinds compared
FD_CHECKS = {
    "prop41": ("tensor", ("delta", "pi", "sp_delta", "sp_pi")),
    "prop42": ("tensor", ("phi_minus", "phi_plus", "sp_delta_e", "sp_pi_e")),
    "thm51-fd": ("tensor", ("browder_minus", "browder_plus", "sp_browder_minus", "sp_browder_plus")),
    "prop61": ("mult", ("delta", "pi", "sp_delta", "sp_pi")),
    "prop62": ("mult", ("phi_minus", "phi_plus", "sp_delta_e", "sp_pi_e")),
    "thm63": ("mult", ("browder_minus", "browder_plus", "sp_browder_minus", "sp_browder_plus")),
}
PROJECTION_KINDS = ("delta", "pi", "sp_delta", "sp_pi", "sp_browder_minus", "sp_browder_plus")
MAPPING_KINDS = ("delta", "pi")
STRUCTURED_FAMILIES = ("diag", "shift", "shift-shift")
MAX_COUNTEREXAMPLES = 5
GRID_CHUNK = 1_500_000
FLOAT_MATCH_TOL = 1e-6


@dataclass(frozen=True)
class VerifyConfig:
    """Knobs shared by all checks.

    ``family`` selects structured instances (``diag``, ``shift``,
    ``shift-shift`` or ``mixed``); ``mutate`` injects a fault into the
    product side (``entry`` flips one matrix entry or toggles one
    multiplicity, ``shift`` adds the identity to the first operator) so a
    healthy check must turn red.
    """

    mode: str = EXACT
    tolerance: float = DEFAULT_TOL
    grid_steps: int = 41
    max_n: int = 2
    max_dim: int = 5
    conjugate: bool = False
    family: str = "mixed"
    mutate: str | None = None
    timing: bool = False

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise SpecError(f"unknown mode {self.mode!r}")
        if not self.tolerance > 0:
            raise SpecError("tolerance must be positive")
        if self.grid_steps < 1 or self.max_n < 1 or self.max_dim < 1:
            raise SpecError("grid_steps, max_n and max_dim must be positive")
        if self.family not in STRUCTURED_FAMILIES + ("mixed",):
            raise SpecError(f"unknown structured family {self.family!r}")
        if self.mutate not in (None, "entry", "shift"):
            raise SpecError(f"unknown mutation {self.mutate!r}")


@dataclass
class VerificationReport:
    check: str
    seed: int | None
    instances: list
    config: dict
    timing_ms: float | None = None

    @property
    def passed(self) -> bool:
        return all(i["pass"] for i in self.instances)

    def failures(self) -> list:
        return [i for i in self.instances if not i["pass"]]

    def to_json(self) -> dict:
        return {"check": self.check, "seed": self.seed, "instances": self.instances,
                "config": self.config, "timing_ms": self.timing_ms}


def _instance(desc: str, counterexamples: list, **extra) -> dict:
    out = {"desc": desc, "pass": not counterexamples, "counterexamples": counterexamples[:MAX_COUNTEREXAMPLES]}
    out.update(extra)
    return out


def _traces_json(cls) -> dict:
    return {"lower": cls.lower.to_json(), "upper": cls.upper.to_json(), "range_closed": cls.range_closed}


def _counterexample(point, lhs_flags, rhs_flags, traces=None, **extra) -> dict:
    out = {"point": encode_point(point), "lhs_flags": lhs_flags, "rhs_flags": rhs_flags, "traces": traces}
    out.update(extra)
    return out


def _error_counterexample(point, err: Exception) -> dict:
    return _counterexample(point, {"error": str(err)}, None)


# -- mutations ---------------------------------------------------------------------


def mutate_tuple(t: FiniteTuple, how: str) -> FiniteTuple:
    """``entry``: add 1 to the top-right entry of the first operator;
    ``shift``: add the identity to the first operator."""
    a = t.ops[0]
    if how == "shift":
        a = a + ComplexMatrix.identity(a.rows, a.mode)
    else:
        j = a.cols - 1
        a = a.with_entry(0, j, a.entry(0, j) + 1)
    return FiniteTuple((a,) + t.ops[1:])


def mutate_parts(parts: tuple) -> tuple:
    """Toggle the first diagonal atom between finite and infinite
    multiplicity (or add an infinite atom), else flip a shift's direction."""
    for i, p in enumerate(parts):
        if isinstance(p, DiagonalTupleSpec):
            if p.atoms:
                a = p.atoms[0]
                a = Atom(a.point, 1 if a.mult == INFINITE else INFINITE)
                q = DiagonalTupleSpec(p.n, (a,) + p.atoms[1:], p.accumulations)
            else:
                q = DiagonalTupleSpec(p.n, (Atom((3.0,) * p.n, INFINITE),), p.accumulations)
            return parts[:i] + (q,) + parts[i + 1:]
    s = parts[0]
    flipped = ShiftSpec("backward" if s.direction == "forward" else "forward", s.prefix, s.tail)
    return (flipped,) + parts[1:]


# -- finite-dimensional checks ------------------------------------------------------------


def _rank_config(cfg: VerifyConfig) -> RankConfig:
    return RankConfig(cfg.mode)


def _in_mode(t: FiniteTuple, mode: str) -> FiniteTuple:
    if t.mode == mode:
        return t
    if mode == FLOAT:
        return FiniteTuple(tuple(ComplexMatrix.from_numpy(a.to_complex()) for a in t.ops))
    raise SpecError("float input cannot be checked in exact mode")


def _near(p, q, tol) -> bool:
    return max(abs(complex(a) - complex(b)) for a, b in zip(p, q)) <= tol


def _member(point, points, mode: str) -> bool:
    if mode == EXACT:
        return tuple(point) in points
    return any(_near(point, q, FLOAT_MATCH_TOL) for q in points)


def _mismatches(lhs, rhs, mode: str) -> list:
    """Points in exactly one of two finite sets, in a deterministic order."""
    if mode == EXACT:
        diff = set(lhs) ^ set(rhs)
    else:
        diff = {p for p in lhs if not _member(p, rhs, mode)} | {p for p in rhs if not _member(p, lhs, mode)}
    return sorted(diff, key=point_key)


def _classification(spec, t: FiniteTuple, point, rc: RankConfig):
    """Cached classification from a spectrum, or a fresh one off the candidates."""
    return classification_at(spec, point) or classify_point(t, point, rc)


def _pad(values: tuple, length: int) -> list:
    return list(values) + [values[-1]] * (length - len(values))


def _chain_product_mismatches(family, s, t, spec_s, spec_t, spec_d, rc) -> list:
    """Per-power product identities behind the Browder formulas.

    Tensor: ``codim M_l`` and ``dim N_l`` of ``(S (x) I, I (x) T) - (p, q)``
    are the products of the factor values.  Multiplication:
    ``codim M_l = codim M_l(S - p) * dim N_l(T - q)`` and
    ``dim N_l = dim N_l(S - p) * codim M_l(T - q)``.
    """
    out = []
    for c in spec_d.classifications:
        p, q = c.point[:s.n], c.point[s.n:]
        cs = _classification(spec_s, s, p, rc)
        ct = _classification(spec_t, t, q, rc)
        ln = len(c.lower.values)
        lo_s, up_s = _pad(cs.lower.values, ln), _pad(cs.upper.values, ln)
        lo_t, up_t = _pad(ct.lower.values, ln), _pad(ct.upper.values, ln)
        if family == "tensor":
            lo = [a * b for a, b in zip(lo_s, lo_t)]
            up = [a * b for a, b in zip(up_s, up_t)]
        else:
            lo = [a * b for a, b in zip(lo_s, up_t)]
            up = [a * b for a, b in zip(up_s, lo_t)]
        if list(c.lower.values) != lo or list(c.upper.values) != up:
            out.append(_counterexample(
                c.point, {"lower": [encode_count(v) for v in c.lower.values],
                          "upper": [encode_count(v) for v in c.upper.values]},
                {"lower": [encode_count(v) for v in lo], "upper": [encode_count(v) for v in up]},
                _traces_json(c), identity="chain-product"))
    return out


def _describe(s: FiniteTuple, t: FiniteTuple) -> str:
    return f"S: n={s.n} dim={s.dim}; T: n={t.n} dim={t.dim}"


def fd_formula_instance(check: str | tuple, s: FiniteTuple, t: FiniteTuple, cfg: VerifyConfig,
                        desc: str | None = None) -> dict:
    """Compare the product tuple's spectra with the formula right-hand sides.

    ``check`` is a finite-dimensional check name or a tuple of them sharing
    one family.
    """
    names = (check,) if isinstance(check, str) else tuple(check)
    families = {FD_CHECKS[c][0] for c in names}
    if len(families) != 1:
        raise SpecError("checks of one instance must share a family")
    family = families.pop()
    kinds = tuple(k for c in names for k in FD_CHECKS[c][1])
    table = FAMILIES[family]
    rc = _rank_config(cfg)
    s, t = _in_mode(s, cfg.mode), _in_mode(t, cfg.mode)
    desc = desc or _describe(s, t)
    spec_s, spec_t = full_spectrum(s, rc), full_spectrum(t, rc)
    rhs = {k: finite_rhs(table, k, spec_s.__getitem__, spec_t.__getitem__) for k in kinds}
    derived = (tensor_tuple if family == "tensor" else mult_tuple)(s, t).tuple
    if cfg.mutate:
        derived = mutate_tuple(derived, cfg.mutate)
    try:
        spec_d = full_spectrum(derived, rc)
    except NonCommutingError as e:
        pts = sorted(rhs[kinds[0]], key=point_key) or [spec_s.candidates.points[0] + spec_t.candidates.points[0]]
        return _instance(desc, [_error_counterexample(pts[0], e)])
    ces = []
    bad = sorted({p for k in kinds for p in _mismatches(spec_d[k], rhs[k], cfg.mode)}, key=point_key)
    for p in bad:
        cls = _classification(spec_d, derived, p, rc)
        ces.append(_counterexample(p, {k: cls.flags[k] for k in kinds},
                                   {k: _member(p, rhs[k], cfg.mode) for k in kinds}, _traces_json(cls)))
    if any(c in ("thm51-fd", "thm63") for c in names):
        ces.extend(_chain_product_mismatches(family, s, t, spec_s, spec_t, spec_d, rc))
    sizes = {k: [len(spec_d[k]), len(rhs[k])] for k in kinds}
    return _instance(desc, ces, sizes=sizes)


def kunneth_instance(s: FiniteTuple, t: FiniteTuple, cfg: VerifyConfig, rng=None, desc: str | None = None) -> dict:
    """Koszul homology of the Kronecker tuple at ``(p, q)`` against the
    convolution of the factor homologies and against the homology of the
    total complex of the factor Koszul complexes."""
    rc = _rank_config(cfg)
    s, t = _in_mode(s, cfg.mode), _in_mode(t, cfg.mode)
    desc = desc or _describe(s, t)
    cs, ct = candidate_points(s, rc).points, candidate_points(t, rc).points
    p = cs[int(rng.integers(len(cs)))] if rng is not None else cs[0]
    q = ct[int(rng.integers(len(ct)))] if rng is not None else ct[0]
    point = p + q
    ks, kt = build_koszul(s, p), build_koszul(t, q)
    hs, ht = homology_dims(ks, rc).dims, homology_dims(kt, rc).dims
    expected = kunneth(hs, ht)
    derived = tensor_tuple(s, t).tuple
    if cfg.mutate:
        derived = mutate_tuple(derived, cfg.mutate)
    try:
        hd = homology_dims(build_koszul(derived, point), rc).dims
    except NonCommutingError as e:
        return _instance(desc, [_error_counterexample(point, e)])
    htot = homology_dims(tensor_total_complex(ks, kt), rc).dims
    ces = []
    if not (hd == expected == htot):
        ces.append(_counterexample(point, {"homology": list(hd)}, {"kunneth": list(expected)},
                                   {"total_complex": list(htot), "left": list(hs), "right": list(ht)}))
    return _instance(desc, ces, homology=list(hd))


# -- structured checks ----------------------------------------------------------------


def _cz(z) -> complex:
    return complex(z)


def oracle_anchors(part) -> list:
    """Per-coordinate sample values where the truncation oracle is trusted:
    for a shift of tail ``r`` the centre, ``r/2``, the circle and ``1.5 r``;
    for a diagonal the descriptor points, the first approach terms and one
    generic point."""
    if isinstance(part, ShiftSpec):
        r = part.tail
        return [[0j, r / 2, complex(r), 1.5 * r, 0.5j * r, complex(-r)]]
    k0 = part.approach_start
    out = []
    for i in range(part.n):
        vals = [a.point[i] for a in part.atoms] + [p[i] for p in part.accumulations]
        if i == 0:
            vals += [p[0] + 2.0 ** -k for p in part.accumulations for k in (k0, k0 + 1)]
        vals.append(0.5 + 0.25j)
        out.append([_cz(v) for v in vals])
    return out


def part_anchors(part) -> list:
    """Oracle anchors plus the anchors of every region of the part."""
    out = oracle_anchors(part)
    for kind in SPECTRUM_KINDS:
        for i, vals in enumerate(part_spectrum(part, kind).anchors()):
            out[i].extend(_cz(v) for v in vals)
    if isinstance(part, ShiftSpec):
        r = part.tail
        out[0].extend([1j * r, -1j * r])
    return out


def part_axes(part, steps: int, extra=None) -> list:
    """Per-coordinate complex sample arrays: a ``steps x steps`` grid over the
    box of half-width ``1.5 x`` the part's radius, offset by half a step so
    boundaries are hit only through the anchors, which are appended."""
    radius = 1.5 * (part.bounding_radius() or 1.0)
    h = 2 * radius / steps
    xs = -radius + h * (np.arange(steps) + 0.5)
    base = (xs[:, None] + 1j * xs[None, :]).ravel()
    anchors = part_anchors(part)
    out = []
    for i in range(part.n):
        vals = list(anchors[i]) + (list(extra[i]) if extra else [])
        out.append(np.unique(np.concatenate([base, np.array(vals, dtype=complex)])))
    return out


def _chunks(axes: list):
    rest = math.prod(len(a) for a in axes[1:])
    step = max(1, GRID_CHUNK // max(rest, 1))
    for start in range(0, len(axes[0]), step):
        yield start, [axes[0][start:start + step]] + list(axes[1:])


def _grid_point(chunk_axes, idx) -> tuple:
    return tuple(complex(a[i]) for a, i in zip(chunk_axes, idx))


def structured_pair(rng, family: str) -> tuple:
    if family == "diag":
        return random_diagonal_spec(rng), random_diagonal_spec(rng)
    if family == "shift":
        return random_shift_spec(rng), random_diagonal_spec(rng)
    return random_shift_spec(rng), random_shift_spec(rng)


def _family_of(parts) -> str:
    shifts = sum(isinstance(p, ShiftSpec) for p in parts)
    return ("diag", "shift", "shift-shift")[shifts]


def _describe_part(p) -> str:
    if isinstance(p, ShiftSpec):
        return f"shift({p.direction}, prefix={len(p.prefix)}, r={p.tail:g})"
    return f"diagonal(n={p.n}, atoms={len(p.atoms)}, accumulations={len(p.accumulations)})"


def structured_instance(a, b, cfg: VerifyConfig, steps: int | None = None, compare: bool = True,
                        oracle: bool = True, desc: str | None = None) -> dict:
    """Grid check of the tensor formulas for ``(A (x) I, I (x) B)``.

    With ``compare`` the composite engine must equal the formula at every
    grid point for every kind.  The inclusion chain
    ``left(sigma) <= sigma <= sp <= right(sp)`` is asserted grid-wise, and
    only as ``left <= right`` when the composite is not supported (two
    shifts).  With ``oracle`` the composite engine is also compared with the
    truncation oracle at every product of oracle anchors.
    """
    parts = (a, b)
    n = a.n + b.n
    tol = cfg.tolerance
    steps = steps or cfg.grid_steps
    desc = desc or " (x) ".join(_describe_part(p) for p in parts)
    supported = _family_of(parts) != "shift-shift"
    lhs_parts = mutate_parts(parts) if cfg.mutate else parts
    lhs_obj = StructuredTuple(lhs_parts) if supported else None
    rhs = {k: region_rhs(TENSOR, k, lambda kk: part_spectrum(a, kk), lambda kk: part_spectrum(b, kk), n)
           for k in SPECTRUM_KINDS}
    for k, r in rhs.items():
        if not is_compact(r):
            raise InternalError(f"non-compact {k} region emitted")
    extra = [oracle_anchors(p)[0] for p in lhs_parts] if cfg.mutate else None
    axes = part_axes(a, steps, extra and [extra[0]]) + part_axes(b, steps, extra and [extra[1]])
    ces, n_points = [], 0
    for _, chunk in _chunks(axes):
        r_grid = {k: rhs[k].grid(chunk, tol) for k in SPECTRUM_KINDS}
        l_grid = structured_flags(lhs_obj, chunk, tol=tol) if supported else None
        n_points += r_grid["delta"].size
        bad = np.zeros(r_grid["delta"].shape, dtype=bool)
        if compare and supported:
            for k in SPECTRUM_KINDS:
                bad |= l_grid[k] != r_grid[k]
        for base, twin in SPLIT_TWIN.items():
            bad |= r_grid[base] & ~r_grid[twin]
            if supported:
                bad |= (r_grid[base] & ~l_grid[base]) | (l_grid[base] & ~l_grid[twin]) | (l_grid[twin] & ~r_grid[twin])
        for idx in np.argwhere(bad)[:MAX_COUNTEREXAMPLES - len(ces)]:
            pt = _grid_point(chunk, idx)
            r_flags = {k: bool(r_grid[k][tuple(idx)]) for k in SPECTRUM_KINDS}
            if supported:
                v = structured_verdict(lhs_obj, pt, tol=tol)
                ces.append(_counterexample(pt, {k: v.flags[k] for k in SPECTRUM_KINDS}, r_flags, _traces_json(v)))
            else:
                ces.append(_counterexample(pt, None, r_flags, violation="inclusion"))
    n_oracle = 0
    if oracle and supported:
        anchor_lists = [v for p in lhs_parts for v in oracle_anchors(p)]
        for pt in itertools.product(*anchor_lists):
            n_oracle += 1
            v = structured_verdict(lhs_obj, pt, tol=tol)
            o = truncation_verdict(lhs_obj, pt)
            if any(v.flags[k] != o.flags[k] for k in v.flags):
                ces.append(_counterexample(pt, {k: v.flags[k] for k in SPECTRUM_KINDS},
                                           {k: o.flags[k] for k in SPECTRUM_KINDS},
                                           {"closed_form": _traces_json(v), "truncation": _traces_json(o)},
                                           violation="oracle"))
    return _instance(desc, ces, grid_points=n_points, oracle_points=n_oracle)


# -- property checks --------------------------------------------------------------------


def projection_instance(t: FiniteTuple, cfg: VerifyConfig, desc: str | None = None) -> dict:
    """Dropping the last coordinate of every spectral point of ``t`` gives the
    spectrum of the first ``n - 1`` operators."""
    if t.n < 2:
        raise SpecError("projection needs a tuple of at least two operators")
    rc = _rank_config(cfg)
    t = _in_mode(t, cfg.mode)
    sub = t.sub(range(t.n - 1))
    full, part = full_spectrum(t, rc), full_spectrum(sub, rc)
    ces = []
    for k in PROJECTION_KINDS:
        proj = {p[:-1] for p in full[k]}
        for p in _mismatches(proj, part[k], cfg.mode):
            ces.append(_counterexample(p, {k: _member(p, proj, cfg.mode)}, {k: _member(p, part[k], cfg.mode)},
                                       kind=k))
    return _instance(desc or f"n={t.n} dim={t.dim}", ces)


def diagonal_projection_instance(d: DiagonalTupleSpec, cfg: VerifyConfig, desc: str | None = None) -> dict:
    """Descriptor-level projection of a diagonal tuple against the projection
    of its regions, for every coordinate subset of size ``n - 1``."""
    model = DiagonalModel.from_spec(d)
    ces = []
    for drop in range(d.n):
        keep = [i for i in range(d.n) if i != drop]
        sub = model.project(keep)
        for k in SPECTRUM_KINDS:
            lhs, rhs = project(model.region(k), keep), sub.region(k)
            anchors = [list(x) + list(y) for x, y in zip(lhs.anchors() if not lhs.is_empty() else [[]] * len(keep),
                                                          rhs.anchors() if not rhs.is_empty() else [[]] * len(keep))]
            axes = [np.unique(np.array(v + [0.5 + 0.25j], dtype=complex)) for v in anchors]
            bad = np.argwhere(lhs.grid(axes, cfg.tolerance) != rhs.grid(axes, cfg.tolerance))
            for idx in bad[:1]:
                pt = _grid_point(axes, idx)
                ces.append(_counterexample(pt, {k: lhs.contains(pt, cfg.tolerance)},
                                           {k: rhs.contains(pt, cfg.tolerance)}, kind=k, keep=keep))
    return _instance(desc or _describe_part(d), ces)


def mapping_instance(t: FiniteTuple, p: PolynomialMap, cfg: VerifyConfig, desc: str | None = None) -> dict:
    """``p(sigma(T)) = sigma(p(T))`` for the defect and approximate point spectra."""
    rc = _rank_config(cfg)
    t = _in_mode(t, cfg.mode)
    img = polynomial_image(t, p, rc)
    spec_t, spec_img = full_spectrum(t, rc), full_spectrum(img, rc)
    ces = []
    for k in MAPPING_KINDS:
        mapped = {p(x, cfg.mode) for x in spec_t[k]}
        for q in _mismatches(spec_img[k], mapped, cfg.mode):
            cls = _classification(spec_img, img, q, rc)
            ces.append(_counterexample(q, {k: cls.flags[k]}, {k: _member(q, mapped, cfg.mode)},
                                       _traces_json(cls), kind=k))
    return _instance(desc or f"n={t.n} dim={t.dim} -> m={p.m} degree={p.degree()}", ces)


def chain_instance(t: FiniteTuple, cfg: VerifyConfig, desc: str | None = None) -> dict:
    """Chains at every joint eigenvalue and one regular point: the ascent
    shortcut agrees with full computation, both chains are monotone and
    constant from ``k = dim`` on."""
    rc = _rank_config(cfg)
    t = _in_mode(t, cfg.mode)
    pts = list(candidate_points(t, rc).points)
    pts.append(tuple(z + 1000 for z in pts[0]))
    ces = []
    for p in pts:
        full = chain_traces(t, p, rc, shortcut=False)
        fast = chain_traces(t, p, rc)
        try:
            check_chain_invariants(*full, t.dim)
            ok = full == fast
        except InternalError:
            ok = False
        if not ok:
            cls = classification_from_traces(p, *full)
            ces.append(_counterexample(p, {"lower": list(map(encode_count, full[0])),
                                           "upper": list(map(encode_count, full[1]))},
                                       {"lower": list(map(encode_count, fast[0])),
                                        "upper": list(map(encode_count, fast[1]))}, _traces_json(cls)))
    return _instance(desc or f"n={t.n} dim={t.dim}", ces, points=len(pts))


def compactness_instance(obj, cfg: VerifyConfig, desc: str | None = None) -> dict:
    """Every spectrum emitted for ``obj`` is closed and bounded."""
    ces = []
    if isinstance(obj, FiniteTuple):
        spec = full_spectrum(_in_mode(obj, cfg.mode), _rank_config(cfg))
        for k in SPECTRUM_KINDS:
            for p in spec[k]:
                if not all(math.isfinite(abs(complex(z))) for z in p):
                    ces.append(_counterexample(p, {k: True}, {"bounded": False}, kind=k))
        return _instance(desc or f"n={obj.n} dim={obj.dim}", ces)
    parts = tuple(obj) if isinstance(obj, (tuple, list)) else obj.parts
    for k in SPECTRUM_KINDS:
        r = structured_spectrum(parts, k)
        if not is_compact(r) or not math.isfinite(r.radius()):
            anchors = r.anchors()
            pt = tuple(v[0] if v else 0j for v in anchors)
            ces.append(_counterexample(pt, {k: True}, {"compact": False}, kind=k))
    return _instance(desc or " (x) ".join(_describe_part(p) for p in parts), ces)


# -- per-trial generation ---------------------------------------------------------------


def _structured_family(cfg: VerifyConfig, trial: int, cycle=("diag", "diag", "shift", "shift-shift")) -> str:
    return cycle[trial % len(cycle)] if cfg.family == "mixed" else cfg.family


def _trial(args) -> list:
    name, seed, trial, cfg = args
    rng = make_rng(seed, trial)
    tag = f"trial {trial}: "
    if name in FD_CHECKS or name == "kunneth":
        s, t = random_pair(rng, cfg.max_n, cfg.max_dim, cfg.conjugate)
        desc = tag + _describe(s, t)
        if name == "kunneth":
            return [kunneth_instance(s, t, cfg, rng, desc)]
        return [fd_formula_instance(name, s, t, cfg, desc)]
    if name == "thm51-structured":
        a, b = structured_pair(rng, _structured_family(cfg, trial))
        return [structured_instance(a, b, cfg, desc=tag + f"{_describe_part(a)} (x) {_describe_part(b)}")]
    if name == "projection":
        t = random_tuple(rng, int(rng.integers(2, cfg.max_n + 2)), int(rng.integers(1, cfg.max_dim + 1)),
                         cfg.conjugate)
        d = random_diagonal_spec(rng, 2)
        return [projection_instance(t, cfg, tag + f"n={t.n} dim={t.dim}"),
                diagonal_projection_instance(d, cfg, tag + _describe_part(d))]
    if name == "mapping":
        t = random_tuple(rng, int(rng.integers(1, cfg.max_n + 1)), int(rng.integers(1, cfg.max_dim + 1)),
                         cfg.conjugate)
        p = random_polynomial(rng, t.n)
        return [mapping_instance(t, p, cfg, tag + f"n={t.n} dim={t.dim} -> m={p.m} degree={p.degree()}")]
    if name == "inclusion-chains":
        t = random_tuple(rng, int(rng.integers(1, cfg.max_n + 1)), int(rng.integers(1, cfg.max_dim + 1)),
                         cfg.conjugate)
        a, b = structured_pair(rng, _structured_family(cfg, trial, STRUCTURED_FAMILIES))
        return [chain_instance(t, cfg, tag + f"n={t.n} dim={t.dim}"),
                structured_instance(a, b, cfg, steps=61, compare=False, oracle=False,
                                    desc=tag + f"{_describe_part(a)} (x) {_describe_part(b)}")]
    if name == "compactness":
        t = random_tuple(rng, int(rng.integers(1, cfg.max_n + 1)), int(rng.integers(1, cfg.max_dim + 1)),
                         cfg.conjugate)
        choice = trial % 5
        if choice == 0:
            parts = (random_diagonal_spec(rng, int(rng.integers(1, 3))),)
        elif choice == 1:
            parts = (random_shift_spec(rng),)
        else:
            parts = structured_pair(rng, STRUCTURED_FAMILIES[choice - 2])
        return [compactness_instance(t, cfg, tag + f"n={t.n} dim={t.dim}"),
                compactness_instance(parts, cfg, tag + " (x) ".join(_describe_part(p) for p in parts))]
    raise SpecError(f"unknown check {name!r}; choose from {', '.join(CHECK_NAMES)}")


def _workers(n_items: int) -> int:
    env = os.environ.get("JSPEC_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise SpecError(f"JSPEC_THREADS must be an integer, got {env!r}") from None
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_items))


def parallel_map(fn, items: list) -> list:
    """``[fn(x) for x in items]``, in processes when ``JSPEC_THREADS`` (or the
    CPU count) allows more than one worker; order is preserved."""
    workers = _workers(len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _report(name, seed, instances, cfg, t0) -> VerificationReport:
    ms = round((time.perf_counter() - t0) * 1000, 3) if cfg.timing else None
    return VerificationReport(name, seed, instances, asdict(cfg), ms)


def run_check(name: str, seed: int = 0, trials: int = 10, cfg: VerifyConfig | None = None) -> VerificationReport:
    """Run one check over ``trials`` seeded random instances."""
    if name not in CHECK_NAMES:
        raise SpecError(f"unknown check {name!r}; choose from {', '.join(CHECK_NAMES)}")
    if trials < 1:
        raise SpecError("trials must be positive")
    cfg = cfg or VerifyConfig()
    t0 = time.perf_counter()
    results = parallel_map(_trial, [(name, seed, i, cfg) for i in range(trials)])
    return _report(name, seed, [inst for r in results for inst in r], cfg, t0)


def _polynomial_from_json(obj, n: int) -> PolynomialMap:
    """``[[[exponents...], coefficient], ...]`` per component."""
    if not isinstance(obj, list) or not obj:
        raise SpecError("'polynomial' must be a non-empty list of components")
    try:
        comps = [{tuple(e): (c if not isinstance(c, list) else complex(*c)) for e, c in comp} for comp in obj]
        return PolynomialMap(n, tuple(comps))
    except (TypeError, ValueError) as e:
        raise SpecError(f"malformed polynomial: {e}") from None


def run_check_on_input(name: str, obj: dict, cfg: VerifyConfig | None = None, seed: int = 0) -> VerificationReport:
    """Run one check on explicit JSON input: ``{"left": ..., "right": ...}``
    for product checks, one operator specification otherwise (plus an
    optional ``"polynomial"`` for the mapping check)."""
    cfg = cfg or VerifyConfig()
    t0 = time.perf_counter()
    if not isinstance(obj, dict):
        raise SpecError("input must be a JSON object")
    if name in FD_CHECKS or name in ("kunneth", "thm51-structured"):
        if "left" not in obj or "right" not in obj:
            raise SpecError(f"{name} needs an input with 'left' and 'right' operator specifications")
        a, b = parse_operator_spec(obj["left"], cfg.mode), parse_operator_spec(obj["right"], cfg.mode)
        if name == "thm51-structured":
            if isinstance(a, FiniteTuple) or isinstance(b, FiniteTuple):
                raise SpecError("thm51-structured needs l2 factors")
            pa, pb = a.parts, b.parts
            if len(pa) != 1 or len(pb) != 1:
                raise SpecError("thm51-structured factors must be single shift or diagonal operators")
            inst = structured_instance(pa[0], pb[0], cfg, desc="input")
        else:
            if not (isinstance(a, FiniteTuple) and isinstance(b, FiniteTuple)):
                raise SpecError(f"{name} needs finite-dimensional factors")
            inst = kunneth_instance(a, b, cfg, desc="input") if name == "kunneth" else \
                fd_formula_instance(name, a, b, cfg, desc="input")
        return _report(name, seed, [inst], cfg, t0)
    if name not in CHECK_NAMES:
        raise SpecError(f"unknown check {name!r}; choose from {', '.join(CHECK_NAMES)}")
    t = parse_operator_spec(obj, cfg.mode)
    if name == "compactness":
        inst = compactness_instance(t, cfg, desc="input")
    elif not isinstance(t, FiniteTuple):
        parts = t.parts
        if name == "projection" and len(parts) == 1 and isinstance(parts[0], DiagonalTupleSpec) and parts[0].n >= 2:
            inst = diagonal_projection_instance(parts[0], cfg, desc="input")
        else:
            raise SpecError(f"{name} on l2 input supports only diagonal projection and compactness")
    elif name == "projection":
        inst = projection_instance(t, cfg, desc="input")
    elif name == "mapping":
        poly = _polynomial_from_json(obj["polynomial"], t.n) if "polynomial" in obj else \
            random_polynomial(make_rng(seed, 0), t.n)
        inst = mapping_instance(t, poly, cfg, desc="input")
    elif name == "inclusion-chains":
        inst = chain_instance(t, cfg, desc="input")
    else:
        raise SpecError(f"{name} needs a pair input")
    return _report(name, seed, [inst], cfg, t0)


# -- single-pair entry points ---------------------------------------------------------


def _single(name, inst, cfg) -> VerificationReport:
    return VerificationReport(name, None, [inst], asdict(cfg))


def check_prop41(s: FiniteTuple, t: FiniteTuple, cfg: VerifyConfig | None = None) -> VerificationReport:
    cfg = cfg or VerifyConfig()
    return _single("prop41", fd_formula_instance("prop41", s, t, cfg), cfg)


def check_prop42_thm51_fd(s: FiniteTuple, t: FiniteTuple, cfg: VerifyConfig | None = None) -> VerificationReport:
    cfg = cfg or VerifyConfig()
    return _single("prop42+thm51-fd", fd_formula_instance(("prop42", "thm51-fd"), s, t, cfg), cfg)


def check_prop61_62_thm63(s: FiniteTuple, t: FiniteTuple, cfg: VerifyConfig | None = None) -> VerificationReport:
    cfg = cfg or VerifyConfig()
    return _single("prop61+prop62+thm63", fd_formula_instance(("prop61", "prop62", "thm63"), s, t, cfg), cfg)


def check_thm51_structured(a, b, cfg: VerifyConfig | None = None) -> VerificationReport:
    cfg = cfg or VerifyConfig()
    return _single("thm51-structured", structured_instance(a, b, cfg), cfg)


def check_kunneth(s: FiniteTuple, t: FiniteTuple, cfg: VerifyConfig | None = None) -> VerificationReport:
    cfg = cfg or VerifyConfig()
    return _single("kunneth", kunneth_instance(s, t, cfg), cfg)
