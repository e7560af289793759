"""``jspec`` command line: verify, region, classify, koszul.

Exit status is 2 on invalid input, 1 when a check fails and 0 otherwise.
"""
from __future__ import annotations

import csv
import functools
import io as _io
import sys

import click
import numpy as np

from . import io
from .chains import KIND_LABELS, KIND_NAMES, classify_point, kind_of
from .errors import JSpecError
from .koszul import build_koszul, homology_dims
from .linalg import EXACT, FLOAT, RankConfig
from .operators import FiniteTuple
from .regions import DEFAULT_TOL
from .spectra_fd import full_spectrum
from .structured import structured_flags, structured_spectrum, structured_verdict, truncation_verdict
from .verify import CHECK_NAMES, STRUCTURED_FAMILIES, VerifyConfig, run_check, run_check_on_input

INVALID, FAILED = 2, 1


def _guard(fn):
    """Map library and input errors to exit status 2."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (JSpecError, ValueError, KeyError, TypeError, OSError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(INVALID)
    return wrapper


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as f:
            f.write(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


def _mode(exact: bool) -> str:
    return EXACT if exact else FLOAT


def _load(path: str, mode: str):
    with open(path) as f:
        return io.parse_operator_spec(io.load_json(f.read(), mode), mode)


mode_option = click.option("--exact/--float", "exact", default=True, show_default=True,
                           help="Exact Gaussian-rational or floating point arithmetic.")
out_option = click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Write output to a file.")
tol_option = click.option("--tolerance", type=float, default=DEFAULT_TOL, show_default=True,
                          help="Membership tolerance for structured models and grids.")


@click.group()
def cli():
    """Joint spectra of commuting tuples and checks of their product formulas."""


@cli.command()
@click.option("--check", "checks", multiple=True, required=True,
              type=click.Choice(CHECK_NAMES + ("all",)), help="Check to run (repeatable, or 'all').")
@click.option("--trials", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False),
              help="Explicit instance instead of random trials.")
@click.option("--grid", "grid_steps", type=click.IntRange(min=1), default=41, show_default=True,
              help="Grid steps per real axis for structured checks.")
@click.option("--family", type=click.Choice(STRUCTURED_FAMILIES + ("mixed",)), default="mixed", show_default=True,
              help="Structured instance family.")
@click.option("--max-n", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--max-dim", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--mutate", type=click.Choice(["entry", "shift"]), default=None,
              help="Inject a fault into the product side (the check should turn red).")
@click.option("--timing/--no-timing", default=False, help="Record wall-clock time in the report.")
@tol_option
@mode_option
@out_option
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json", show_default=True)
@_guard
def verify(checks, trials, seed, input_path, grid_steps, family, max_n, max_dim, mutate, timing, tolerance,
           exact, out, fmt):
    """Run formula and property checks and print a JSON report."""
    names = CHECK_NAMES if "all" in checks else tuple(dict.fromkeys(checks))
    cfg = VerifyConfig(mode=_mode(exact), tolerance=tolerance, grid_steps=grid_steps, max_n=max_n,
                       max_dim=max_dim, family=family, mutate=mutate, timing=timing)
    if input_path:
        with open(input_path) as f:
            obj = io.load_json(f.read(), cfg.mode)
        reports = [run_check_on_input(name, obj, cfg, seed) for name in names]
    else:
        reports = [run_check(name, seed, trials, cfg) for name in names]
    payload = reports[0].to_json() if len(reports) == 1 else {"reports": [r.to_json() for r in reports]}
    _emit(io.dumps(payload), out)
    for r in reports:
        bad = len(r.failures())
        click.echo(f"{r.check}: {'PASS' if r.passed else 'FAIL'} "
                   f"({len(r.instances) - bad}/{len(r.instances)} instances)", err=True)
    if not all(r.passed for r in reports):
        sys.exit(FAILED)


def _grid_rows(axes, member) -> list:
    rows = []
    for idx in np.ndindex(member.shape):
        pt = [complex(a[i]) for a, i in zip(axes, idx)]
        rows.append((pt, bool(member[idx])))
    return rows


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--kind", required=True, type=click.Choice(sorted(KIND_NAMES) + sorted(KIND_LABELS)))
@click.option("--grid", "grid_spec", default=None, help="re_min:re_max:steps[,...] sample axes.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@tol_option
@mode_option
@out_option
@_guard
def region(input_path, kind, grid_spec, fmt, tolerance, exact, out):
    """Describe one spectrum of a tuple and, with --grid, its membership grid."""
    mode = _mode(exact)
    obj = _load(input_path, mode)
    kind = kind_of(kind)
    if isinstance(obj, FiniteTuple):
        spec = full_spectrum(obj, RankConfig(mode))
        points = spec.sorted(kind)
        description = {"kind": "points", "n": obj.n, "points": [io.encode_point(p) for p in points]}

        def membership(axes):
            m = np.zeros(tuple(len(a) for a in axes), dtype=bool)
            for p in points:
                hit = np.ones_like(m)
                for i, (a, z) in enumerate(zip(axes, p)):
                    shape = [1] * len(axes)
                    shape[i] = len(a)
                    hit = hit & (np.abs(a - complex(z)) <= tolerance).reshape(shape)
                m |= hit
            return m
    else:
        description = structured_spectrum(obj, kind).to_json()

        def membership(axes):
            return structured_flags(obj, axes, tol=tolerance)[kind]
    if grid_spec is None:
        if fmt == "csv":
            raise ValueError("CSV output needs --grid")
        _emit(io.dumps({"kind": KIND_LABELS[kind], "n": obj.n, "region": description}), out)
        return
    axes = io.parse_grid(grid_spec, obj.n)
    rows = _grid_rows(axes, membership(axes))
    if fmt == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"{part}_{i + 1}" for i in range(obj.n) for part in ("re", "im")] + ["member"])
        for pt, m in rows:
            w.writerow([repr(v) for z in pt for v in (z.real, z.imag)] + [int(m)])
        _emit(buf.getvalue().rstrip("\n"), out)
    else:
        _emit(io.dumps({"kind": KIND_LABELS[kind], "n": obj.n, "region": description,
                        "grid": {"points": len(rows), "members": [io.encode_point(p) for p, m in rows if m]}}), out)


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--point", required=True, help="re,im;re,im;... one complex value per operator.")
@click.option("--oracle/--no-oracle", default=False,
              help="For l2 models, add the verdict read off finite sections.")
@tol_option
@mode_option
@out_option
@_guard
def classify(input_path, point, oracle, tolerance, exact, out):
    """Classify one point: chains, closedness and every membership flag."""
    mode = _mode(exact)
    obj = _load(input_path, mode)
    if isinstance(obj, FiniteTuple):
        pt = io.parse_point(point, mode)
        payload = classify_point(obj, pt, RankConfig(mode)).to_json(io.encode_point)
    else:
        pt = io.parse_point(point, FLOAT)
        payload = structured_verdict(obj, pt, tol=tolerance).to_json(io.encode_point)
        if oracle:
            payload["oracle"] = truncation_verdict(obj, pt).to_json(io.encode_point)
    _emit(io.dumps(payload), out)


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--point", required=True, help="re,im;re,im;... one complex value per operator.")
@mode_option
@out_option
@_guard
def koszul(input_path, point, exact, out):
    """Koszul complex of T - point: chain dimensions and homology dimensions."""
    mode = _mode(exact)
    obj = _load(input_path, mode)
    if not isinstance(obj, FiniteTuple):
        raise ValueError("koszul needs a finite-dimensional tuple")
    pt = io.parse_point(point, mode)
    k = build_koszul(obj, pt)
    h = homology_dims(k, RankConfig(mode))
    _emit(io.dumps({"point": io.encode_point(pt), "chain_dims": list(k.chain_dims), "homology": list(h.dims),
                    "euler_characteristic": h.euler_characteristic()}), out)


def main(argv=None):
    cli.main(args=argv, prog_name="jspec")


if __name__ == "__main__":
    main()
