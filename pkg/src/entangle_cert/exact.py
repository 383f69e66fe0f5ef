"""Exact scalars over the Gaussian rationals Q(i).

A :class:`GaussianRational` is stored as ``(a + b*i) / d`` with ``d > 0`` and
``gcd(a, b, d) == 1``, which keeps arithmetic on plain Python integers.
Real and imaginary parts are exposed as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = [
    "GaussianRational",
    "ParseError",
    "gr",
    "gr_arith",
    "gr_conj",
    "parse_gr",
    "ZERO",
    "ONE",
    "I",
]


class ParseError(ValueError):
    """Raised when a scalar or document cannot be parsed; ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ", ".join(f"{k} {v}" for k, v in (("line", line), ("column", column)) if v is not None)
        super().__init__(f"{message} ({where})" if where else message)
        self.message = message
        self.line = line
        self.column = column


def _normalize(a: int, b: int, d: int) -> tuple[int, int, int]:
    if d == 0:
        raise ZeroDivisionError("GaussianRational with zero denominator")
    if d < 0:
        a, b, d = -a, -b, -d
    if a == 0 and b == 0:
        return 0, 0, 1
    if d != 1:
        g = gcd(gcd(a, b), d)
        if g != 1:
            a, b, d = a // g, b // g, d // g
    return a, b, d


class GaussianRational:
    """Immutable complex number with rational real and imaginary parts."""

    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re=0, im=0):
        re = _as_fraction(re)
        im = _as_fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._a, self._b, self._d = _normalize(a, b, d)
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = object.__new__(cls)
        obj._a, obj._b, obj._d = _normalize(a, b, d)
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int):
            return cls._raw(value, 0, 1)
        if isinstance(value, (Fraction, Rational)):
            return cls._raw(value.numerator, 0, value.denominator)
        if isinstance(value, str):
            return parse_gr(value)
        if isinstance(value, complex):
            raise TypeError("refusing to convert a float complex into an exact scalar")
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    # -- components ---------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def numer(self) -> tuple[int, int]:
        """Gaussian-integer numerator ``(a, b)`` of ``(a + b i) / d``."""
        return self._a, self._b

    @property
    def denom(self) -> int:
        return self._d

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def is_integral(self) -> bool:
        return self._d == 1

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussianRational._raw(
            self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d
        )

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(GaussianRational)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        obj._hash = None
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, e = self._a, self._b, o._a, o._b
        if b == 0 and e == 0:
            return GaussianRational._raw(a * c, 0, self._d * o._d)
        return GaussianRational._raw(a * c - b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if self.is_zero():
            raise ZeroDivisionError("division by zero GaussianRational")
        # d / (a + b i) = d (a - b i) / (a^2 + b^2)
        n = self._a * self._a + self._b * self._b
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._d)

    def abs2(self) -> Fraction:
        """Squared modulus ``re^2 + im^2`` as an exact rational."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # -- comparison / hashing -----------------------------------------------
    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ParseError):
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._hash is None:
            if self._b == 0:
                self._hash = hash(Fraction(self._a, self._d))
            else:
                self._hash = hash((self._a, self._b, self._d))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- conversion ---------------------------------------------------------
    def __complex__(self):
        # int / int true division is correctly rounded
        return complex(self._a / self._d, self._b / self._d)

    def to_complex(self) -> complex:
        return complex(self)

    def __str__(self):
        return format_gr(self)

    def __repr__(self):
        return f"GaussianRational('{format_gr(self)}')"

    def __reduce__(self):
        return (parse_gr, (format_gr(self),))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_gr(x: GaussianRational) -> str:
    """Canonical whitespace-free rendering: ``p/q`` or ``p/q+r/si``."""
    re_part = _fmt_frac(x.re)
    if x.is_real():
        return re_part
    im = x.im
    sign = "-" if im < 0 else "+"
    return f"{re_part}{sign}{_fmt_frac(abs(im))}i"


_NUM = r"\d+(?:/\d+)?"
_CANON = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<isign>[+-])(?P<im>{_NUM})i)?$")
_LOOSE_IMAG = re.compile(rf"^(?P<sign>[+-]?)(?P<im>{_NUM})?\*?i$")
_LOOSE = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<isign>[+-])(?P<im>{_NUM})?\*?i$")


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {s!r}") from exc


def parse_gr(text: str) -> GaussianRational:
    """Parse a Gaussian rational.

    Accepts the canonical grammar (``3``, ``-5/7``, ``1/2-1/3i``) plus the
    convenience spellings ``i``, ``-i``, ``2i``, ``1+i``.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty scalar literal")
    m = _CANON.match(s)
    if m:
        re_part = _frac(m.group("re"))
        im_part = Fraction(0)
        if m.group("im") is not None:
            im_part = _frac(m.group("im"))
            if m.group("isign") == "-":
                im_part = -im_part
        return GaussianRational(re_part, im_part)
    m = _LOOSE_IMAG.match(s)
    if m:
        im_part = _frac(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("sign") == "-":
            im_part = -im_part
        return GaussianRational(0, im_part)
    m = _LOOSE.match(s)
    if m:
        re_part = _frac(m.group("re"))
        im_part = _frac(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("isign") == "-":
            im_part = -im_part
        return GaussianRational(re_part, im_part)
    raise ParseError(f"cannot parse Gaussian rational {text!r}")


def gr(value) -> GaussianRational:
    """Shorthand constructor accepting ints, Fractions, strings and GaussianRationals."""
    return GaussianRational.coerce(value)


def gr_arith(a, b, op: str) -> GaussianRational:
    """Apply ``op`` in ``{'+', '-', '*', '/'}`` (unicode variants accepted)."""
    a, b = gr(a), gr(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        if b.is_zero():
            raise ZeroDivisionError("division by zero GaussianRational")
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def gr_conj(a) -> GaussianRational:
    return gr(a).conj()
