"""Dense complex linear algebra in two modes.

``exact`` matrices hold Gaussian rationals as a pair of integer object arrays
(real and imaginary numerators) over one positive common denominator, so
every operation stays inside Q(i) without rounding.  ``float`` matrices wrap a
``complex128`` array.  Rank in exact mode is computed by fraction-free
(Bareiss) elimination over the Gaussian integers; in float mode by singular
values with a relative cutoff.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import ModeMismatchError, ShapeError

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)


class QI:
    """An exact Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("QI is immutable")

    @classmethod
    def coerce(cls, x) -> "QI":
        if isinstance(x, QI):
            return x
        if isinstance(x, (int, Rational)):
            return cls(x)
        if isinstance(x, (float, complex)):
            z = complex(x)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"non-finite scalar {x!r}")
            return cls(Fraction(z.real), Fraction(z.imag))
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return cls(Fraction(x[0]), Fraction(x[1]))
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")

    def __add__(self, other):
        o = QI.coerce(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QI.coerce(other)
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QI.coerce(other) - self

    def __mul__(self, other):
        o = QI.coerce(other)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI.coerce(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return QI(1) / (self ** -k)
        out = QI(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        try:
            o = QI.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def sort_key(self):
        return (self.re, self.im)

    def __repr__(self):
        if self.im == 0:
            return f"QI({self.re})"
        return f"QI({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def scalar(x, mode: str):
    """Coerce ``x`` into the scalar type of ``mode``."""
    if mode == EXACT:
        return QI.coerce(x)
    if mode == FLOAT:
        if isinstance(x, QI):
            return complex(x)
        if isinstance(x, (tuple, list)) and len(x) == 2:
            x = complex(float(x[0]), float(x[1]))
        z = complex(x)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"non-finite scalar {x!r}")
        return z
    raise ValueError(f"unknown mode {mode!r}")


def scalar_key(z):
    """Total-order key for scalars of either mode: (real, imaginary)."""
    if isinstance(z, QI):
        return (z.re, z.im)
    z = complex(z)
    return (z.real, z.imag)


def _obj(shape) -> np.ndarray:
    a = np.empty(shape, dtype=object)
    a.fill(0)
    return a


def _gcd_all(*arrays, start: int = 0) -> int:
    g = start
    for a in arrays:
        for v in a.flat:
            if v:
                g = math.gcd(g, v)
                if g == 1:
                    return 1
    return g


@dataclass(frozen=True)
class RankConfig:
    """How ranks are computed.  ``rel_tolerance`` only matters in float mode."""

    mode: str = EXACT
    rel_tolerance: float = 1e-10

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == FLOAT and not self.rel_tolerance > 0:
            raise ValueError("float mode requires rel_tolerance > 0")


class ComplexMatrix:
    """Immutable dense complex matrix (see module docstring for the modes)."""

    __slots__ = ("mode", "shape", "_re", "_im", "_den", "_data", "_real")

    def __init__(self, mode, shape, re=None, im=None, den=1, data=None):
        self.mode = mode
        self.shape = (int(shape[0]), int(shape[1]))
        self._re = self._im = self._data = None
        self._den = 1
        self._real = None
        if mode == EXACT:
            g = _gcd_all(re, im, start=den) if den != 1 else 1
            if g > 1:
                re = re // g
                im = im // g
                den //= g
            re.flags.writeable = False
            im.flags.writeable = False
            self._re, self._im, self._den = re, im, den
        elif mode == FLOAT:
            data = np.asarray(data, dtype=np.complex128)
            if not np.all(np.isfinite(data)):
                raise ValueError("float matrices must have finite entries")
            data.flags.writeable = False
            self._data = data
        else:
            raise ValueError(f"unknown mode {mode!r}")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows, mode: str = EXACT, shape=None) -> "ComplexMatrix":
        rows = [list(r) for r in rows]
        r = len(rows)
        c = len(rows[0]) if r else (shape[1] if shape else 0)
        if any(len(row) != c for row in rows):
            raise ShapeError("ragged rows")
        if mode == FLOAT:
            data = np.array([[scalar(x, FLOAT) for x in row] for row in rows], dtype=np.complex128)
            return cls(FLOAT, (r, c), data=data.reshape(r, c))
        vals = [[QI.coerce(x) for x in row] for row in rows]
        den = reduce(lambda a, b: a * b // math.gcd(a, b),
                     (f.denominator for row in vals for z in row for f in (z.re, z.im)), 1)
        re, im = _obj((r, c)), _obj((r, c))
        for i, row in enumerate(vals):
            for j, z in enumerate(row):
                re[i, j] = int(z.re * den)
                im[i, j] = int(z.im * den)
        return cls(EXACT, (r, c), re=re, im=im, den=den)

    @classmethod
    def from_numpy(cls, arr) -> "ComplexMatrix":
        arr = np.atleast_2d(np.asarray(arr, dtype=np.complex128))
        return cls(FLOAT, arr.shape, data=arr.copy())

    @classmethod
    def from_int_arrays(cls, re, im=None, den: int = 1) -> "ComplexMatrix":
        re = np.array(re, dtype=object)
        if re.ndim != 2:
            raise ShapeError("expected a 2-D array")
        im = _obj(re.shape) if im is None else np.array(im, dtype=object)
        return cls(EXACT, re.shape, re=re.copy(), im=im.copy(), den=den)

    @classmethod
    def zeros(cls, rows: int, cols: int, mode: str = EXACT) -> "ComplexMatrix":
        if mode == FLOAT:
            return cls(FLOAT, (rows, cols), data=np.zeros((rows, cols), dtype=np.complex128))
        return cls(EXACT, (rows, cols), re=_obj((rows, cols)), im=_obj((rows, cols)))

    @classmethod
    def identity(cls, n: int, mode: str = EXACT) -> "ComplexMatrix":
        return cls.diag([1] * n, mode)

    @classmethod
    def diag(cls, values: Sequence, mode: str = EXACT) -> "ComplexMatrix":
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(rows, mode, shape=(n, n))

    # -- inspection ---------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def is_real(self) -> bool:
        if self._real is None:
            if self.mode == EXACT:
                self._real = not bool((self._im != 0).any())
            else:
                self._real = not bool(np.any(self._data.imag != 0))
        return self._real

    def entry(self, i: int, j: int):
        if self.mode == EXACT:
            return QI(Fraction(self._re[i, j], self._den), Fraction(self._im[i, j], self._den))
        return complex(self._data[i, j])

    def entries(self) -> list:
        """Row-major list of scalars."""
        return [self.entry(i, j) for i in range(self.rows) for j in range(self.cols)]

    def tolist(self) -> list:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def diagonal(self) -> list:
        return [self.entry(i, i) for i in range(min(self.shape))]

    def to_complex(self) -> np.ndarray:
        if self.mode == FLOAT:
            return np.array(self._data)
        out = np.empty(self.shape, dtype=np.complex128)
        for (i, j), v in np.ndenumerate(self._re):
            out[i, j] = complex(Fraction(v, self._den)) + 1j * float(Fraction(self._im[i, j], self._den))
        return out

    def int_parts(self):
        """Exact mode only: ``(re, im, den)`` with entry = (re + i*im) / den."""
        self._need(EXACT)
        return self._re, self._im, self._den

    def is_zero(self) -> bool:
        if self.mode == EXACT:
            return not bool((self._re != 0).any() or (self._im != 0).any())
        return not bool(np.any(self._data != 0))

    def is_upper_triangular(self) -> bool:
        if self.mode == EXACT:
            low = np.tril_indices(self.rows, -1, self.cols)
            return not bool((self._re[low] != 0).any() or (self._im[low] != 0).any())
        return not bool(np.any(np.tril(self._data, -1) != 0))

    def max_abs(self) -> float:
        if self.rows == 0 or self.cols == 0:
            return 0.0
        return float(np.max(np.abs(self.to_complex())))

    def _need(self, mode):
        if self.mode != mode:
            raise ModeMismatchError(f"expected a {mode} matrix, got {self.mode}")

    def _same(self, other: "ComplexMatrix"):
        if not isinstance(other, ComplexMatrix):
            raise TypeError(f"expected ComplexMatrix, got {type(other).__name__}")
        if self.mode != other.mode:
            raise ModeMismatchError(f"cannot combine {self.mode} and {other.mode} matrices")

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ComplexMatrix) or self.mode != other.mode or self.shape != other.shape:
            return False
        if self.mode == EXACT:
            return (self._den == other._den and bool(np.all(self._re == other._re))
                    and bool(np.all(self._im == other._im)))
        return bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def allclose(self, other: "ComplexMatrix", atol: float = 1e-9) -> bool:
        return self.shape == other.shape and bool(np.allclose(self.to_complex(), other.to_complex(), atol=atol))

    def _combine(self, other, sign):
        self._same(other)
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.mode == FLOAT:
            return ComplexMatrix(FLOAT, self.shape, data=self._data + sign * other._data)
        d1, d2 = self._den, other._den
        if d1 == d2:
            return ComplexMatrix(EXACT, self.shape, re=self._re + sign * other._re,
                                 im=self._im + sign * other._im, den=d1)
        return ComplexMatrix(EXACT, self.shape, re=self._re * d2 + sign * other._re * d1,
                             im=self._im * d2 + sign * other._im * d1, den=d1 * d2)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        if self.mode == FLOAT:
            return ComplexMatrix(FLOAT, self.shape, data=-self._data)
        return ComplexMatrix(EXACT, self.shape, re=-self._re, im=-self._im, den=self._den)

    def scale(self, s) -> "ComplexMatrix":
        if self.mode == FLOAT:
            return ComplexMatrix(FLOAT, self.shape, data=self._data * scalar(s, FLOAT))
        q = QI.coerce(s)
        d = q.re.denominator * q.im.denominator // math.gcd(q.re.denominator, q.im.denominator)
        a, b = int(q.re * d), int(q.im * d)
        return ComplexMatrix(EXACT, self.shape, re=self._re * a - self._im * b,
                             im=self._re * b + self._im * a, den=self._den * d)

    def shift(self, lam) -> "ComplexMatrix":
        """``self - lam * I`` for a square matrix."""
        if self.rows != self.cols:
            raise ShapeError("shift needs a square matrix")
        return self - ComplexMatrix.identity(self.rows, self.mode).scale(lam)

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        self._same(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        shape = (self.rows, other.cols)
        if self.mode == FLOAT:
            return ComplexMatrix(FLOAT, shape, data=self._data @ other._data)
        r1, i1, r2, i2 = self._re, self._im, other._re, other._im
        if self.is_real and other.is_real:
            re, im = r1.dot(r2), _obj(shape)
        elif self.is_real:
            re, im = r1.dot(r2), r1.dot(i2)
        elif other.is_real:
            re, im = r1.dot(r2), i1.dot(r2)
        else:
            re = r1.dot(r2) - i1.dot(i2)
            im = r1.dot(i2) + i1.dot(r2)
        if shape[0] == 0 or shape[1] == 0 or self.cols == 0:
            re, im = _obj(shape), _obj(shape)
        return ComplexMatrix(EXACT, shape, re=np.asarray(re, dtype=object).reshape(shape),
                             im=np.asarray(im, dtype=object).reshape(shape), den=self._den * other._den)

    def power(self, k: int) -> "ComplexMatrix":
        if self.rows != self.cols:
            raise ShapeError("power needs a square matrix")
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = ComplexMatrix.identity(self.rows, self.mode)
        base = self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    def transpose(self) -> "ComplexMatrix":
        shape = (self.cols, self.rows)
        if self.mode == FLOAT:
            return ComplexMatrix(FLOAT, shape, data=self._data.T.copy())
        return ComplexMatrix(EXACT, shape, re=self._re.T.copy(), im=self._im.T.copy(), den=self._den)

    @property
    def T(self) -> "ComplexMatrix":
        return self.transpose()

    def conj(self) -> "ComplexMatrix":
        if self.mode == FLOAT:
            return ComplexMatrix(FLOAT, self.shape, data=self._data.conj())
        return ComplexMatrix(EXACT, self.shape, re=self._re.copy(), im=-self._im, den=self._den)

    def adjoint(self) -> "ComplexMatrix":
        """Conjugate transpose."""
        return self.conj().transpose()

    def with_entry(self, i: int, j: int, value) -> "ComplexMatrix":
        """Copy with one entry replaced (used for mutation tests)."""
        rows = self.tolist()
        rows[i][j] = value
        return ComplexMatrix.from_rows(rows, self.mode, shape=self.shape)

    def __repr__(self):
        return f"ComplexMatrix({self.mode}, {self.rows}x{self.cols})"


def _common_den(ms: Sequence[ComplexMatrix]):
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (m._den for m in ms), 1)
    res = [m._re * (den // m._den) if m._den != den else m._re for m in ms]
    ims = [m._im * (den // m._den) if m._den != den else m._im for m in ms]
    return res, ims, den


def _check_mode(ms: Sequence[ComplexMatrix]) -> str:
    if not ms:
        raise ShapeError("need at least one matrix")
    mode = ms[0].mode
    for m in ms[1:]:
        if m.mode != mode:
            raise ModeMismatchError("cannot stack exact and float matrices")
    return mode


def hstack(ms: Iterable[ComplexMatrix]) -> ComplexMatrix:
    """Block row ``[A1 | A2 | ...]``; its column space is the sum of the column spaces."""
    ms = list(ms)
    mode = _check_mode(ms)
    if len({m.rows for m in ms}) != 1:
        raise ShapeError("hstack needs equal row counts")
    shape = (ms[0].rows, sum(m.cols for m in ms))
    if mode == FLOAT:
        return ComplexMatrix(FLOAT, shape, data=np.hstack([m._data for m in ms]).reshape(shape))
    res, ims, den = _common_den(ms)
    return ComplexMatrix(EXACT, shape, re=np.hstack(res).reshape(shape), im=np.hstack(ims).reshape(shape), den=den)


def vstack(ms: Iterable[ComplexMatrix]) -> ComplexMatrix:
    """Block column; its kernel is the intersection of the kernels."""
    ms = list(ms)
    mode = _check_mode(ms)
    if len({m.cols for m in ms}) != 1:
        raise ShapeError("vstack needs equal column counts")
    shape = (sum(m.rows for m in ms), ms[0].cols)
    if mode == FLOAT:
        return ComplexMatrix(FLOAT, shape, data=np.vstack([m._data for m in ms]).reshape(shape))
    res, ims, den = _common_den(ms)
    return ComplexMatrix(EXACT, shape, re=np.vstack(res).reshape(shape), im=np.vstack(ims).reshape(shape), den=den)


def block(grid: Sequence[Sequence[ComplexMatrix]]) -> ComplexMatrix:
    """Assemble a block matrix from a rectangular grid of blocks."""
    return vstack([hstack(row) for row in grid])


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product ``a (x) b``."""
    a._same(b)
    shape = (a.rows * b.rows, a.cols * b.cols)
    if a.mode == FLOAT:
        return ComplexMatrix(FLOAT, shape, data=np.kron(a._data, b._data).reshape(shape))

    def k(x, y):
        if x.size == 0 or y.size == 0:
            return _obj(shape)
        return np.kron(x, y).reshape(shape)

    if a.is_real and b.is_real:
        re, im = k(a._re, b._re), _obj(shape)
    else:
        re = k(a._re, b._re) - k(a._im, b._im)
        im = k(a._re, b._im) + k(a._im, b._re)
    return ComplexMatrix(EXACT, shape, re=re, im=im, den=a._den * b._den)


# -- rank ---------------------------------------------------------------------


def _bareiss_real(a: np.ndarray) -> int:
    m, n = a.shape
    prev = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        if r + 1 < m and c + 1 < n:
            a[r + 1:, c + 1:] = (a[r + 1:, c + 1:] * piv - np.outer(a[r + 1:, c], a[r, c + 1:])) // prev
        a[r + 1:, c] = 0
        prev = piv
        r += 1
    return r


def _bareiss_gauss(ar: np.ndarray, ai: np.ndarray) -> int:
    m, n = ar.shape
    qr, qi = 1, 0
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero((ar[r:, c] != 0) | (ai[r:, c] != 0))
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            ar[[r, p]] = ar[[p, r]]
            ai[[r, p]] = ai[[p, r]]
        pr, pi = ar[r, c], ai[r, c]
        if r + 1 < m and c + 1 < n:
            sr, si = ar[r + 1:, c + 1:], ai[r + 1:, c + 1:]
            cr, ci = ar[r + 1:, c], ai[r + 1:, c]
            br, bi = ar[r, c + 1:], ai[r, c + 1:]
            nr = sr * pr - si * pi - (np.outer(cr, br) - np.outer(ci, bi))
            ni = sr * pi + si * pr - (np.outer(cr, bi) + np.outer(ci, br))
            if qi == 0 and qr == 1:
                ar[r + 1:, c + 1:], ai[r + 1:, c + 1:] = nr, ni
            elif qi == 0:
                ar[r + 1:, c + 1:], ai[r + 1:, c + 1:] = nr // qr, ni // qr
            else:
                norm = qr * qr + qi * qi
                ar[r + 1:, c + 1:] = (nr * qr + ni * qi) // norm
                ai[r + 1:, c + 1:] = (ni * qr - nr * qi) // norm
        ar[r + 1:, c] = 0
        ai[r + 1:, c] = 0
        qr, qi = pr, pi
        r += 1
    return r


def exact_rank(m: ComplexMatrix) -> int:
    re, im, _ = m.int_parts()
    if m.rows == 0 or m.cols == 0:
        return 0
    nz = (re != 0) | (im != 0)
    keep_r = np.flatnonzero(nz.any(axis=1))
    keep_c = np.flatnonzero(nz.any(axis=0))
    if keep_r.size == 0:
        return 0
    re = re[np.ix_(keep_r, keep_c)]
    im = im[np.ix_(keep_r, keep_c)]
    # eliminate along the longer side so each step touches fewer rows
    if re.shape[0] > re.shape[1]:
        re, im = re.T, im.T
    re, im = np.array(re, dtype=object), np.array(im, dtype=object)
    if not (im != 0).any():
        return _bareiss_real(re)
    return _bareiss_gauss(re, im)


def rank(m: ComplexMatrix, cfg: RankConfig | None = None) -> int:
    """Rank of ``m``; exact by Bareiss elimination or float by singular values."""
    cfg = cfg or RankConfig(m.mode)
    if cfg.mode != m.mode:
        raise ModeMismatchError(f"{m.mode} matrix with {cfg.mode} rank configuration")
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.mode == EXACT:
        return exact_rank(m)
    s = np.linalg.svd(m.to_complex(), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > cfg.rel_tolerance * s[0]))


def kernel_dim(m: ComplexMatrix, cfg: RankConfig | None = None) -> int:
    return m.cols - rank(m, cfg)


def cokernel_dim(m: ComplexMatrix, cfg: RankConfig | None = None) -> int:
    return m.rows - rank(m, cfg)
