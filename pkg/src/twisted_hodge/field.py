"""The Gaussian rationals Q(i).

Real and imaginary parts are ``gmpy2.mpq`` values, which are always kept in
lowest terms with a positive denominator, so structural equality is value
equality.
"""

from __future__ import annotations

import re
from numbers import Rational

from gmpy2 import mpq

from twisted_hodge.errors import DivisionByZero, ParseError

__all__ = ["GaussianRational", "field_normalize", "parse_scalar", "to_mpq", "ZERO", "ONE", "I"]


def to_mpq(value) -> mpq:
    """Coerce an int, Fraction, mpq or ``"a/b"`` string to ``mpq``.

    Floats are refused: every coefficient in this package is exact.
    """
    if isinstance(value, float):
        raise ParseError(f"floating point value {value!r} is not exact; use a fraction")
    if isinstance(value, str):
        try:
            return mpq(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed rational {value!r}") from exc
    if isinstance(value, Rational) or type(value).__name__ in ("mpq", "mpz"):
        return mpq(value)
    raise ParseError(f"cannot interpret {value!r} as a rational number")


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_MPQ0) else to_mpq(re)
        self.im = im if type(im) is type(_MPQ0) else to_mpq(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise ParseError(f"floating point value {value!r} is not exact")
        if isinstance(value, str):
            return parse_scalar(value)
        return cls(value, 0)

    # arithmetic
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise DivisionByZero("inverse of zero in Q(i)")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> mpq:
        return self.re * self.re + self.im * self.im

    # comparison / hashing
    def __eq__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return format_scalar(self)


_MPQ0 = mpq(0)
ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)


def _coerce_or_none(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Rational)) or type(value).__name__ in ("mpq", "mpz"):
        return GaussianRational(value, 0)
    return None


def field_normalize(re_num, re_den=1, im_num=0, im_den=1) -> GaussianRational:
    """Build the canonical element ``re_num/re_den + (im_num/im_den) i``."""
    if re_den == 0 or im_den == 0:
        raise DivisionByZero("zero denominator")
    return GaussianRational(mpq(re_num, re_den), mpq(im_num, im_den))


def _fmt_q(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: GaussianRational) -> str:
    """Render in the coefficient grammar, e.g. ``-1/2+3/5i``."""
    if x.im == 0:
        return _fmt_q(x.re)
    im = x.im
    if im == 1:
        im_s = "i"
    elif im == -1:
        im_s = "-i"
    else:
        im_s = _fmt_q(im) + "i"
    if x.re == 0:
        return im_s
    sign = "" if im_s.startswith("-") else "+"
    return f"{_fmt_q(x.re)}{sign}{im_s}"


_RAT = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?P<re>[+-]?{_RAT})?(?:(?P<imsign>[+-])?(?P<im>{_RAT})?\*?i)?$"
)


def parse_scalar(text: str) -> GaussianRational:
    """Parse ``[-]a/b`` optionally followed by ``[+|-]c/d i``.

    Whitespace is ignored; ``i``, ``-i``, ``2i`` and ``1/2*i`` are accepted, as
    is one pair of enclosing parentheses.
    """
    s = "".join(str(text).split())
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    m = _SCALAR_RE.match(s)
    if not s or m is None or (m.group("re") is None and not s.endswith("i")):
        raise ParseError(f"malformed coefficient {text!r}")
    try:
        re_part = mpq(m.group("re")) if m.group("re") else mpq(0)
        im_part = mpq(0)
        if s.endswith("i"):
            im_part = mpq(m.group("im")) if m.group("im") else mpq(1)
            if m.group("imsign") == "-":
                im_part = -im_part
            elif m.group("imsign") is None and m.group("re") is not None:
                # "2i" parses as re="2" with no imaginary digits
                if m.group("im") is None:
                    im_part, re_part = re_part, mpq(0)
                else:
                    raise ParseError(f"malformed coefficient {text!r}")
    except ZeroDivisionError as exc:
        raise DivisionByZero(f"zero denominator in {text!r}") from exc
    return GaussianRational(re_part, im_part)
