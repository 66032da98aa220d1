"""Dense exact matrices over Q(i).

Entries are held as two row-major tables of ``mpq`` (real and imaginary
parts).  Rank and nullspace come from fraction-free Gauss-Jordan elimination
on Gaussian integers: every row is scaled to clear denominators, and each
elimination step divides exactly by the previous pivot, so intermediate
entries stay bounded by minors of the input instead of growing as fractions.
"""

from __future__ import annotations

from math import gcd, lcm
from typing import Iterable, Sequence

from gmpy2 import mpq

from twisted_hodge.errors import DimensionError, DivisionByZero
from twisted_hodge.field import GaussianRational

__all__ = ["ExactMatrix", "rank_nullspace", "GaussJordan", "gauss_jordan"]

_Q0 = mpq(0)
_Q1 = mpq(1)


def _zero_rows(rows, cols):
    return tuple((_Q0,) * cols for _ in range(rows))


class ExactMatrix:
    """Immutable ``rows x cols`` matrix over Q(i)."""

    __slots__ = ("rows", "cols", "re", "im", "_real")

    def __init__(self, rows: int, cols: int, re=None, im=None):
        self.rows = rows
        self.cols = cols
        self.re = tuple(tuple(r) for r in re) if re is not None else _zero_rows(rows, cols)
        if im is None:
            self.im = _zero_rows(rows, cols)
            self._real = True
        else:
            self.im = tuple(tuple(r) for r in im)
            self._real = None
        if len(self.re) != rows or len(self.im) != rows or any(
            len(r) != cols for r in self.re
        ) or any(len(r) != cols for r in self.im):
            raise DimensionError(f"entry table does not match shape {rows}x{cols}")

    # construction helpers
    @classmethod
    def _raw(cls, rows, cols, re, im, real=None):
        m = object.__new__(cls)
        m.rows, m.cols, m.re, m.im, m._real = rows, cols, re, im, real
        return m

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        """Build from nested sequences of scalars (ints, fractions, strings, GaussianRational)."""
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        re, im = [], []
        for row in entries:
            if len(row) != cols:
                raise DimensionError("ragged rows")
            vals = [GaussianRational.coerce(x) for x in row]
            re.append(tuple(v.re for v in vals))
            im.append(tuple(v.im for v in vals))
        return cls._raw(rows, cols, tuple(re), tuple(im))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        z = _zero_rows(rows, cols)
        return cls._raw(rows, cols, z, z, True)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        re = tuple(tuple(_Q1 if i == j else _Q0 for j in range(n)) for i in range(n))
        return cls._raw(n, n, re, _zero_rows(n, n), True)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "ExactMatrix":
        return cls.from_entries([list(c) for c in columns], rows).transpose() if columns else cls.zeros(rows, 0)

    @classmethod
    def from_parts(cls, re, im) -> "ExactMatrix":
        re = tuple(tuple(mpq(x) for x in r) for r in re)
        im = tuple(tuple(mpq(x) for x in r) for r in im)
        rows = len(re)
        cols = len(re[0]) if rows else 0
        return cls(rows, cols, re, im)

    # access
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, idx) -> GaussianRational:
        i, j = idx
        return GaussianRational(self.re[i][j], self.im[i][j])

    def is_real(self) -> bool:
        if self._real is None:
            self._real = not any(any(r) for r in self.im)
        return self._real

    def row(self, i) -> list[GaussianRational]:
        return [GaussianRational(a, b) for a, b in zip(self.re[i], self.im[i])]

    def column(self, j) -> list[GaussianRational]:
        return [GaussianRational(self.re[i][j], self.im[i][j]) for i in range(self.rows)]

    def entries(self) -> list[list[GaussianRational]]:
        return [self.row(i) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.re) and (self.is_real() or not any(any(r) for r in self.im))

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.rows, self.cols, self.re, self.im))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix({self.rows}x{self.cols}: [{body}])"

    # linear structure
    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        re = tuple(tuple(map(_add, a, b)) for a, b in zip(self.re, other.re))
        if self.is_real() and other.is_real():
            return ExactMatrix._raw(self.rows, self.cols, re, self.im, True)
        im = tuple(tuple(map(_add, a, b)) for a, b in zip(self.im, other.im))
        return ExactMatrix._raw(self.rows, self.cols, re, im)

    def __neg__(self) -> "ExactMatrix":
        re = tuple(tuple(-x for x in r) for r in self.re)
        im = self.im if self.is_real() else tuple(tuple(-x for x in r) for r in self.im)
        return ExactMatrix._raw(self.rows, self.cols, re, im, self._real)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = GaussianRational.coerce(c)
        a, b = c.re, c.im
        if b == 0:
            re = tuple(tuple(a * x for x in r) for r in self.re)
            im = self.im if self.is_real() else tuple(tuple(a * x for x in r) for r in self.im)
            return ExactMatrix._raw(self.rows, self.cols, re, im, self._real)
        re = tuple(tuple(a * x - b * y for x, y in zip(r, s)) for r, s in zip(self.re, self.im))
        im = tuple(tuple(a * y + b * x for x, y in zip(r, s)) for r, s in zip(self.re, self.im))
        return ExactMatrix._raw(self.rows, self.cols, re, im)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        rows, cols = self.rows, other.cols
        if rows == 0 or cols == 0 or self.cols == 0:
            return ExactMatrix.zeros(rows, cols)
        bre = _sparse_rows(other.re)
        re_rr = _matmul(self.re, bre, cols)
        if self.is_real() and other.is_real():
            return ExactMatrix._raw(rows, cols, re_rr, _zero_rows(rows, cols), True)
        bim = _sparse_rows(other.im)
        if other.is_real():
            return ExactMatrix._raw(rows, cols, re_rr, _matmul(self.im, bre, cols))
        if self.is_real():
            return ExactMatrix._raw(rows, cols, re_rr, _matmul(self.re, bim, cols))
        re_ii = _matmul(self.im, bim, cols)
        re = tuple(tuple(map(_sub, a, b)) for a, b in zip(re_rr, re_ii))
        im = tuple(
            tuple(map(_add, a, b)) for a, b in zip(_matmul(self.re, bim, cols), _matmul(self.im, bre, cols))
        )
        return ExactMatrix._raw(rows, cols, re, im)

    def apply(self, vector: Sequence) -> list[GaussianRational]:
        v = ExactMatrix.from_entries([[x] for x in vector], 1) if len(vector) else ExactMatrix.zeros(0, 1)
        return (self @ v).column(0)

    def conj(self) -> "ExactMatrix":
        if self.is_real():
            return self
        im = tuple(tuple(-x for x in r) for r in self.im)
        return ExactMatrix._raw(self.rows, self.cols, self.re, im, False)

    def transpose(self) -> "ExactMatrix":
        re = tuple(zip(*self.re)) if self.rows else _zero_rows(self.cols, 0)
        if self.is_real():
            return ExactMatrix._raw(self.cols, self.rows, re, _zero_rows(self.cols, self.rows), True)
        im = tuple(zip(*self.im))
        return ExactMatrix._raw(self.cols, self.rows, re, im, False)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    @property
    def H(self) -> "ExactMatrix":
        """Conjugate transpose."""
        return self.transpose().conj()

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        re = tuple(a + b for a, b in zip(self.re, other.re))
        im = tuple(a + b for a, b in zip(self.im, other.im))
        return ExactMatrix._raw(self.rows, self.cols + other.cols, re, im)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise DimensionError("vstack needs equal column counts")
        real = True if (self.is_real() and other.is_real()) else None
        return ExactMatrix._raw(self.rows + other.rows, self.cols, self.re + other.re, self.im + other.im, real)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "ExactMatrix":
        rows, cols = list(rows), list(cols)
        re = tuple(tuple(self.re[i][j] for j in cols) for i in rows)
        im = tuple(tuple(self.im[i][j] for j in cols) for i in rows)
        return ExactMatrix._raw(len(rows), len(cols), re, im, True if self.is_real() else None)

    # elimination
    def rank(self) -> int:
        return gauss_jordan(self).rank

    def nullspace_vectors(self) -> list[list[GaussianRational]]:
        return gauss_jordan(self).nullspace_vectors()

    def rref(self) -> "ExactMatrix":
        """Reduced row echelon form with unit pivots (zero rows dropped)."""
        return gauss_jordan(self).rref()

    def inverse(self) -> "ExactMatrix":
        if self.rows != self.cols:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        gj = gauss_jordan(self.hstack(ExactMatrix.identity(n)))
        if gj.pivots[:n] != list(range(n)) or len(gj.pivots) < n:
            raise DivisionByZero("matrix is singular")
        r = gj.rref()
        return r.submatrix(range(n), range(n, 2 * n))

    def determinant(self) -> GaussianRational:
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        return _determinant(self)


def _add(a, b):
    return a + b


def _sub(a, b):
    return a - b


def _sparse_rows(rows):
    return [[(j, x) for j, x in enumerate(r) if x] for r in rows]


def _matmul(a_rows, b_sparse, cols):
    """Dense rows times a row-sparse matrix; the operators here are mostly zeros."""
    out = []
    for r in a_rows:
        acc = [_Q0] * cols
        for x, brow in zip(r, b_sparse):
            if x:
                for j, y in brow:
                    acc[j] = acc[j] + x * y
        out.append(tuple(acc))
    return tuple(out)


# ---------------------------------------------------------------------------
# Fraction-free Gauss-Jordan on Gaussian integers


def _gdiv(ar, ai, br, bi):
    """Exact quotient of Gaussian integers (ar + ai i) / (br + bi i)."""
    n = br * br + bi * bi
    qr, rr = divmod(ar * br + ai * bi, n)
    qi, ri = divmod(ai * br - ar * bi, n)
    assert rr == 0 and ri == 0, "fraction-free step produced an inexact division"
    return qr, qi


def _integer_rows(m: ExactMatrix):
    """Scale each row by the lcm of its denominators; returns lists of ints."""
    re_rows, im_rows = [], []
    for r, s in zip(m.re, m.im):
        den = 1
        for x in r:
            den = lcm(den, int(x.denominator))
        for x in s:
            den = lcm(den, int(x.denominator))
        re_rows.append([int(x * den) for x in r])
        im_rows.append([int(x * den) for x in s])
    return re_rows, im_rows


class GaussJordan:
    """Result of fraction-free reduction: ``rows`` equal ``D`` times the RREF.

    ``D`` (``det_re + det_im i``) is the last pivot; all pivot entries equal it.
    """

    __slots__ = ("ncols", "pivots", "re", "im", "det_re", "det_im")

    def __init__(self, ncols, pivots, re, im, det_re, det_im):
        self.ncols = ncols
        self.pivots = pivots
        self.re = re
        self.im = im
        self.det_re = det_re
        self.det_im = det_im

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _scaled(self, x_re, x_im):
        d = GaussianRational(self.det_re, self.det_im)
        return GaussianRational(x_re, x_im) / d

    def rref(self) -> ExactMatrix:
        r = self.rank
        n = self.ncols
        d2 = mpq(self.det_re * self.det_re + self.det_im * self.det_im)
        dr, di = self.det_re, self.det_im
        re = []
        im = []
        for i in range(r):
            # (a + b i) / (dr + di i) = ((a dr + b di) + (b dr - a di) i) / |d|^2
            re.append(tuple(mpq(a * dr + b * di) / d2 for a, b in zip(self.re[i], self.im[i])))
            im.append(tuple(mpq(b * dr - a * di) / d2 for a, b in zip(self.re[i], self.im[i])))
        return ExactMatrix._raw(r, n, tuple(re), tuple(im))

    def nullspace_vectors(self) -> list[list[GaussianRational]]:
        """Gaussian-integer nullspace basis, one vector per free column."""
        pivset = set(self.pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        out = []
        for f in free:
            vr = [0] * self.ncols
            vi = [0] * self.ncols
            vr[f], vi[f] = self.det_re, self.det_im
            for row, c in enumerate(self.pivots):
                vr[c] = -self.re[row][f]
                vi[c] = -self.im[row][f]
            g = gcd(*vr, *vi) or 1
            out.append([GaussianRational(mpq(a // g), mpq(b // g)) for a, b in zip(vr, vi)])
        return out


def gauss_jordan(m: ExactMatrix) -> GaussJordan:
    re, im = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    real = m.is_real()
    prev_r, prev_i = 1, 0
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if re[i][c] or im[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            re[r], re[piv] = re[piv], re[r]
            im[r], im[piv] = im[piv], im[r]
        pr, pi = re[r][c], im[r][c]
        rr, ri = re[r], im[r]
        for i in range(nrows):
            if i == r:
                continue
            xr, xi = re[i], im[i]
            ar, ai = xr[c], xi[c]
            if real:
                # (p * x - a * row_r) / prev, all real
                new = [(pr * x - ar * y) // prev_r for x, y in zip(xr, rr)]
                re[i] = new
            else:
                nr, ni = [], []
                for j in range(ncols):
                    x_r, x_i = xr[j], xi[j]
                    y_r, y_i = rr[j], ri[j]
                    t_r = pr * x_r - pi * x_i - (ar * y_r - ai * y_i)
                    t_i = pr * x_i + pi * x_r - (ar * y_i + ai * y_r)
                    if (prev_i == 0 and prev_r == 1) or not (t_r or t_i):
                        nr.append(t_r)
                        ni.append(t_i)
                    else:
                        q_r, q_i = _gdiv(t_r, t_i, prev_r, prev_i)
                        nr.append(q_r)
                        ni.append(q_i)
                re[i], im[i] = nr, ni
        prev_r, prev_i = pr, pi
        pivots.append(c)
        r += 1
    # rows r.. are zero; earlier pivot rows were rescaled by every later step,
    # so every pivot entry now equals the last pivot
    return GaussJordan(ncols, pivots, re[:r], im[:r], prev_r, prev_i)


def rank_nullspace(a: ExactMatrix):
    """Return ``(rank, nullspace Subspace)`` of ``a``."""
    from twisted_hodge.subspace import Subspace

    gj = gauss_jordan(a)
    return gj.rank, Subspace.from_vectors(gj.nullspace_vectors(), a.cols)


def _determinant(m: ExactMatrix) -> GaussianRational:
    n = m.rows
    rows = [m.row(i) for i in range(n)]
    det = GaussianRational(1, 0)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return GaussianRational(0, 0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        p = rows[c][c]
        det = det * p
        inv = p.inverse()
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det
