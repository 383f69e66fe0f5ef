"""Sparse multivariate polynomials over Q(i) with monomial orders and a text form.

Text grammar: terms ``c*x0^2*x1`` joined by ``+``/``-``; coefficients are
integers, rationals ``p/q`` or parenthesised Gaussian rationals ``(1+2i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Callable, Iterable, Mapping, Sequence

from .exact import ONE, ZERO, GaussianRational, ParseError, format_gr, gr, parse_gr

Exps = tuple[int, ...]


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given by an additive sort key (larger key = larger monomial)."""

    name: str
    key: Callable[[Exps], tuple]

    def __repr__(self):
        return f"MonomialOrder({self.name})"


def _lex_key(e: Exps) -> tuple:
    return e


def _grevlex_key(e: Exps) -> tuple:
    return (sum(e),) + tuple(-x for x in reversed(e))


LEX = MonomialOrder("lex", _lex_key)
GREVLEX = MonomialOrder("grevlex", _grevlex_key)


@lru_cache(maxsize=None)
def block_order(k: int) -> MonomialOrder:
    """Elimination order: grevlex on the first ``k`` variables, ties broken by grevlex on the rest."""

    def key(e: Exps) -> tuple:
        return _grevlex_key(e[:k]) + _grevlex_key(e[k:])

    return MonomialOrder(f"block{k}", key)


def order_by_name(name: str) -> MonomialOrder:
    if name == "lex":
        return LEX
    if name == "grevlex":
        return GREVLEX
    m = re.fullmatch(r"block(\d+)", name)
    if m:
        return block_order(int(m.group(1)))
    raise ValueError(f"unknown monomial order {name!r}")


def default_gens(n: int, prefix: str = "x") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("gens", "_terms", "_hash")

    def __init__(self, gens: Sequence[str], terms: Mapping[Exps, object] | None = None):
        self.gens = tuple(gens)
        n = len(self.gens)
        clean: dict[Exps, GaussianRational] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for {n} variables")
            c = gr(c)
            if not c.is_zero():
                clean[e] = clean[e] + c if e in clean else c
                if clean[e].is_zero():
                    del clean[e]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, gens: tuple[str, ...], terms: dict) -> "MultiPoly":
        p = object.__new__(cls)
        p.gens = gens
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, gens) -> "MultiPoly":
        return cls._raw(tuple(gens), {})

    @classmethod
    def const(cls, gens, c) -> "MultiPoly":
        gens = tuple(gens)
        return cls(gens, {(0,) * len(gens): c})

    @classmethod
    def var(cls, gens, which) -> "MultiPoly":
        gens = tuple(gens)
        i = gens.index(which) if isinstance(which, str) else int(which)
        e = [0] * len(gens)
        e[i] = 1
        return cls._raw(gens, {tuple(e): ONE})

    @classmethod
    def from_univariate(cls, gens, var, coeffs: Sequence) -> "MultiPoly":
        """``coeffs[j]`` multiplies ``var**j``."""
        gens = tuple(gens)
        i = gens.index(var) if isinstance(var, str) else int(var)
        terms = {}
        for j, c in enumerate(coeffs):
            e = [0] * len(gens)
            e[i] = j
            terms[tuple(e)] = c
        return cls(gens, terms)

    # inspection

    @property
    def terms(self) -> dict[Exps, GaussianRational]:
        return dict(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.gens)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get((0,) * self.nvars, ZERO)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var) -> int:
        i = self._index(var)
        return max((e[i] for e in self._terms), default=-1)

    def variables(self) -> tuple[str, ...]:
        used = [False] * self.nvars
        for e in self._terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(g for g, u in zip(self.gens, used) if u)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def ordered_terms(self, order: MonomialOrder = LEX) -> list[tuple[Exps, GaussianRational]]:
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = LEX) -> tuple[Exps, GaussianRational]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=order.key)
        return e, self._terms[e]

    def leading_monomial(self, order: MonomialOrder = LEX) -> Exps:
        return self.leading_term(order)[0]

    def leading_coeff(self, order: MonomialOrder = LEX) -> GaussianRational:
        return self.leading_term(order)[1]

    def _index(self, var) -> int:
        return self.gens.index(var) if isinstance(var, str) else int(var)

    # arithmetic

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.gens != self.gens:
                raise ValueError(f"variable mismatch {self.gens} vs {other.gens}")
            return other
        return MultiPoly.const(self.gens, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[e]
                else:
                    out[e] = v
        return MultiPoly._raw(self.gens, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.gens, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = gr(other)
            if c.is_zero():
                return MultiPoly.zero(self.gens)
            return MultiPoly._raw(self.gens, {e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        out: dict[Exps, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly._raw(self.gens, {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * gr(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(self.gens, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_monomial(self, e: Exps, c=ONE) -> "MultiPoly":
        c = gr(c)
        return MultiPoly._raw(
            self.gens, {tuple(a + b for a, b in zip(k, e)): c * v for k, v in self._terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.gens == other.gens and self._terms == other._terms
        try:
            return self == MultiPoly.const(self.gens, other)
        except (TypeError, ValueError, ParseError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self._terms.items())))
        return self._hash

    # normalisation

    def monic(self, order: MonomialOrder = LEX) -> "MultiPoly":
        if self.is_zero():
            return self
        return self * self.leading_coeff(order).inverse()

    def primitive(self, order: MonomialOrder = LEX) -> "MultiPoly":
        """Scale to coprime Gaussian-integer coefficients with a positive leading coefficient when possible.

        The content removed is the rational-integer gcd of all real and
        imaginary parts. If the leading coefficient is real it is made
        positive; if it is purely imaginary it is rotated to the positive reals.
        """
        if self.is_zero():
            return self
        den = 1
        for c in self._terms.values():
            den = lcm(den, c.denom)
        ints = []
        for c in self._terms.values():
            a, b = c.numer
            ints.extend((a * (den // c.denom), b * (den // c.denom)))
        g = gcd(*ints)
        scale = gr(Fraction(den, g))
        lc = self.leading_coeff(order) * scale
        if lc.re == 0:
            scale = scale * (-gr("i") if lc.im > 0 else gr("i"))
        elif lc.re < 0:
            scale = -scale
        return self * scale

    def conj_coeffs(self) -> "MultiPoly":
        return MultiPoly._raw(self.gens, {e: c.conj() for e, c in self._terms.items()})

    # substitution and change of ring

    def substitute(self, values: Mapping, drop: bool = True) -> "MultiPoly":
        """Replace variables (by name or index) with scalars; optionally drop them from ``gens``."""
        idx = {self._index(k): gr(v) for k, v in values.items()}
        keep = [i for i in range(self.nvars) if not (drop and i in idx)]
        gens = tuple(self.gens[i] for i in keep)
        out: dict[Exps, GaussianRational] = {}
        for e, c in self._terms.items():
            for i, v in idx.items():
                if e[i]:
                    c = c * v ** e[i]
            if c.is_zero():
                continue
            ne = tuple(e[i] if i not in idx else 0 for i in keep) if not drop else tuple(e[i] for i in keep)
            prev = out.get(ne)
            out[ne] = c if prev is None else prev + c
        return MultiPoly._raw(gens, {e: c for e, c in out.items() if not c.is_zero()})

    def reorder(self, gens: Sequence[str]) -> "MultiPoly":
        """Re-express over a different variable list; every used variable must appear in ``gens``."""
        gens = tuple(gens)
        pos = []
        for g in self.gens:
            pos.append(gens.index(g) if g in gens else None)
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(gens)
            for i, x in enumerate(e):
                if x:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.gens[i]} missing from target ring")
                    ne[pos[i]] = x
            out[tuple(ne)] = c
        return MultiPoly._raw(gens, out)

    def univariate_coeffs(self, var) -> list[GaussianRational]:
        """Coefficients ``c_0..c_deg`` when the polynomial only involves ``var``."""
        i = self._index(var)
        deg = self.degree_in(i)
        coeffs = [ZERO] * (deg + 1)
        for e, c in self._terms.items():
            if any(x for j, x in enumerate(e) if j != i):
                raise ValueError("polynomial is not univariate in " + self.gens[i])
            coeffs[e[i]] = c
        return coeffs

    def evaluate(self, point) -> complex:
        """Float evaluation; ``point`` is a sequence aligned with ``gens`` or a name mapping."""
        if isinstance(point, Mapping):
            point = [point[g] for g in self.gens]
        pt = [complex(v) for v in point]
        total = 0j
        for e, c in self._terms.items():
            t = complex(c)
            for v, x in zip(pt, e):
                if x:
                    t *= v**x
            total += t
        return total

    def evaluate_exact(self, point) -> GaussianRational:
        if isinstance(point, Mapping):
            point = [point[g] for g in self.gens]
        pt = [gr(v) for v in point]
        total = ZERO
        for e, c in self._terms.items():
            t = c
            for v, x in zip(pt, e):
                if x:
                    t = t * v**x
            total = total + t
        return total

    # text

    def to_str(self, order: MonomialOrder = LEX) -> str:
        return format_poly(self, order)

    def __str__(self):
        return format_poly(self, LEX)

    def __repr__(self):
        return f"MultiPoly({format_poly(self, LEX)!r}, gens={self.gens})"


def _format_coeff(c: GaussianRational) -> tuple[str, str]:
    """Sign and magnitude text for a coefficient."""
    if c.is_real():
        r = c.re
        return ("-" if r < 0 else "+"), str(abs(r))
    if c.re == 0 and c.im < 0:
        return "-", "(" + format_gr(-c) + ")"
    return "+", "(" + format_gr(c) + ")"


def _format_monomial(e: Exps, gens: Sequence[str]) -> str:
    parts = []
    for g, x in zip(gens, e):
        if x == 1:
            parts.append(g)
        elif x > 1:
            parts.append(f"{g}^{x}")
    return "*".join(parts)


def format_poly(p: MultiPoly, order: MonomialOrder = LEX) -> str:
    if p.is_zero():
        return "0"
    out = []
    for k, (e, c) in enumerate(p.ordered_terms(order)):
        sign, mag = _format_coeff(c)
        mono = _format_monomial(e, p.gens)
        if mono and mag == "1":
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = mag
        if k == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(sign + body)
    return "".join(out)


_TERM_SPLIT = re.compile(r"\s+")


def _split_terms(text: str) -> list[tuple[int, str, int]]:
    """Split on top-level ``+``/``-`` (not inside parentheses or exponents)."""
    terms = []
    depth = 0
    start = 0
    sign = 1
    i = 0
    if text and text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        i = start = 1
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", column=i + 1)
        elif ch in "+-" and depth == 0 and i > start and text[i - 1] not in "^*/":
            terms.append((sign, text[start:i], start))
            sign = -1 if ch == "-" else 1
            start = i + 1
        i += 1
    if depth:
        raise ParseError("unbalanced '('", column=len(text))
    terms.append((sign, text[start:], start))
    return terms


def parse_poly(text: str, gens: Sequence[str] | None = None) -> MultiPoly:
    """Parse the polynomial text grammar; ``gens`` defaults to the ``x<k>`` names found."""
    s = _TERM_SPLIT.sub("", text).replace("−", "-")
    if not s:
        raise ParseError("empty polynomial")
    if gens is None:
        found = sorted({int(m) for m in re.findall(r"x(\d+)", s)})
        gens = default_gens(max(found) + 1 if found else 0)
    gens = tuple(gens)
    names = sorted(gens, key=len, reverse=True)
    out = MultiPoly.zero(gens)
    for sign, body, col in _split_terms(s):
        if not body:
            raise ParseError("empty term", column=col + 1)
        coeff = gr(sign)
        e = [0] * len(gens)
        for factor in _split_factors(body, col):
            if factor.startswith("("):
                if not factor.endswith(")"):
                    raise ParseError(f"bad factor {factor!r}", column=col + 1)
                coeff = coeff * parse_gr(factor[1:-1])
                continue
            name = next((g for g in names if factor == g or factor.startswith(g + "^")), None)
            if name is not None:
                power = 1
                if factor != name:
                    try:
                        power = int(factor[len(name) + 1 :])
                    except ValueError:
                        raise ParseError(f"bad exponent in {factor!r}", column=col + 1) from None
                e[gens.index(name)] += power
                continue
            try:
                coeff = coeff * parse_gr(factor)
            except ParseError:
                raise ParseError(f"unknown factor {factor!r}", column=col + 1) from None
        out = out + MultiPoly(gens, {tuple(e): coeff})
    return out


def _split_factors(body: str, col: int) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    parts.append(body[start:])
    if any(not p for p in parts):
        raise ParseError("empty factor", column=col + 1)
    # "p/q" rational prefixes stay glued; a trailing "/q" after a variable is not allowed
    return parts


def format_system(polys: Iterable[MultiPoly], order: MonomialOrder = LEX) -> str:
    """One polynomial per line, trailing newline."""
    return "".join(format_poly(p, order) + "\n" for p in polys)


def parse_system(text: str, gens: Sequence[str] | None = None) -> list[MultiPoly]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if gens is None:
        found = sorted({int(m) for ln in lines for m in re.findall(r"x(\d+)", ln)})
        gens = default_gens(max(found) + 1 if found else 0)
    out = []
    for n, ln in enumerate(lines, 1):
        try:
            out.append(parse_poly(ln, gens))
        except ParseError as exc:
            raise ParseError(exc.message, line=n, column=exc.column) from None
    return out
