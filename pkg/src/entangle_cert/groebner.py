"""Reduced Groebner bases over Q(i), ideal membership and lex elimination.

Internally polynomials are kept fraction-free: lists of ``(key, exps, (re, im))``
terms with Gaussian-integer coefficients, sorted by decreasing monomial key.
Every reduction result is made primitive (rational-integer content removed).
Pairs are selected by the normal strategy and pruned with the Gebauer-Moeller
form of the product and chain criteria. Zero-dimensional lex bases are
obtained from grevlex by FGLM change of ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from operator import add
from typing import Iterable, Sequence

from .exact import ONE, ZERO, GaussianRational, gr
from .poly import GREVLEX, LEX, MonomialOrder, MultiPoly, format_poly, order_by_name

__all__ = [
    "GroebnerBasis",
    "NotZeroDimensional",
    "NotShapePosition",
    "Elimination",
    "buchberger",
    "contains_one",
    "reduce",
    "s_polynomial",
    "fglm",
    "eliminate_to_univariate",
]


class NotZeroDimensional(ValueError):
    pass


class NotShapePosition(ValueError):
    """Lex basis is not triangular-linear; ``generator`` still carries the univariate polynomial."""

    def __init__(self, message, generator=None, basis=None):
        super().__init__(message)
        self.generator = generator
        self.basis = basis


# Gaussian integers as (re, im)


def _gmul(x, y):
    a, b = x
    c, d = y
    return (a * c - b * d, a * d + b * c)


def _gdiv_round(x, y):
    a, b = x
    c, d = y
    n = c * c + d * d
    re = a * c + b * d
    im = b * c - a * d
    return ((2 * re + n) // (2 * n), (2 * im + n) // (2 * n))


def _gdiv_exact(x, y):
    a, b = x
    c, d = y
    n = c * c + d * d
    re, im = a * c + b * d, b * c - a * d
    assert re % n == 0 and im % n == 0, "inexact Gaussian division"
    return (re // n, im // n)


def _ggcd(x, y):
    while y != (0, 0):
        q = _gdiv_round(x, y)
        qy = _gmul(q, y)
        x, y = y, (x[0] - qy[0], x[1] - qy[1])
    return x


# internal polynomials


class _Ring:
    __slots__ = ("n", "order", "keyf", "cache")

    def __init__(self, n: int, order: MonomialOrder):
        self.n = n
        self.order = order
        self.keyf = order.key
        self.cache: dict = {}

    def key(self, e):
        k = self.cache.get(e)
        if k is None:
            k = self.keyf(e)
            self.cache[e] = k
        return k

    def from_poly(self, p: MultiPoly) -> list:
        den = 1
        for c in p._terms.values():
            den = den * c.denom // gcd(den, c.denom)
        terms = []
        for e, c in p._terms.items():
            a, b = c.numer
            s = den // c.denom
            terms.append((self.key(e), e, (a * s, b * s)))
        terms.sort(key=lambda t: t[0], reverse=True)
        return _primitive(terms)

    def to_poly(self, gens, terms, scale: GaussianRational = ONE) -> MultiPoly:
        inv = scale.inverse()
        return MultiPoly._raw(
            tuple(gens), {e: GaussianRational._raw(a, b, 1) * inv for _, e, (a, b) in terms}
        )

    def monomial_key(self, e):
        return self.key(e)


def _content(terms) -> int:
    g = 0
    for _, _, (a, b) in terms:
        g = gcd(g, a, b)
        if g == 1:
            return 1
    return g


def _primitive(terms):
    g = _content(terms)
    if g > 1:
        terms = [(k, e, (a // g, b // g)) for k, e, (a, b) in terms]
    return terms


def _combine(ring: _Ring, p, a, mp, q, b, mq):
    """``a*mp*p - b*mq*q`` with both leading terms dropped (they cancel by construction)."""
    out = []
    kmp = ring.key(mp) if mp is not None else None
    kmq = ring.key(mq) if mq is not None else None

    def shifted(terms, m, km, c):
        for k, e, x in terms[1:]:
            if m is not None:
                e = tuple(map(add, e, m))
                k = tuple(map(add, k, km))
            yield k, e, _gmul(c, x)

    it1 = shifted(p, mp, kmp, a)
    it2 = shifted(q, mq, kmq, b)
    t1 = next(it1, None)
    t2 = next(it2, None)
    while t1 is not None and t2 is not None:
        if t1[0] > t2[0]:
            out.append(t1)
            t1 = next(it1, None)
        elif t1[0] < t2[0]:
            k, e, (x, y) = t2
            out.append((k, e, (-x, -y)))
            t2 = next(it2, None)
        else:
            x = t1[2][0] - t2[2][0]
            y = t1[2][1] - t2[2][1]
            if x or y:
                out.append((t1[0], t1[1], (x, y)))
            t1 = next(it1, None)
            t2 = next(it2, None)
    while t1 is not None:
        out.append(t1)
        t1 = next(it1, None)
    while t2 is not None:
        k, e, (x, y) = t2
        out.append((k, e, (-x, -y)))
        t2 = next(it2, None)
    return out


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(map(max, a, b))


def _sub_exps(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _reduce_internal(ring: _Ring, p, basis, full: bool = True):
    """Fraction-free normal form.

    Returns ``(r, scale)`` with ``r == scale * NF(p)``, ``scale`` a Gaussian
    rational; ``r`` is primitive.
    """
    scale = ONE
    r: list = []
    lms = [(g[0][1], g) for g in basis]
    p = list(p)
    while p:
        e = p[0][1]
        hit = None
        for lm, g in lms:
            if _divides(lm, e):
                hit = g
                break
        if hit is None:
            if not full:
                r = p
                break
            r.append(p[0])
            p = p[1:]
            continue
        lcp = p[0][2]
        lcg = hit[0][2]
        h = _ggcd(lcp, lcg)
        ca = _gdiv_exact(lcg, h)
        cb = _gdiv_exact(lcp, h)
        m = _sub_exps(e, hit[0][1])
        if not any(m):
            m = None
        p = _combine(ring, p, ca, None, hit, cb, m)
        if ca != (1, 0):
            r = [(k, x, _gmul(ca, c)) for k, x, c in r]
            scale = scale * GaussianRational._raw(ca[0], ca[1], 1)
        g = gcd(_content(p), _content(r)) if r else _content(p)
        if p and g > 1:
            p = [(k, x, (a // g, b // g)) for k, x, (a, b) in p]
            r = [(k, x, (a // g, b // g)) for k, x, (a, b) in r]
            scale = scale / g
    g = _content(r)
    if g > 1:
        r = [(k, x, (a // g, b // g)) for k, x, (a, b) in r]
        scale = scale / g
    return r, scale


def _spoly(ring: _Ring, f, g):
    lf, lg = f[0][1], g[0][1]
    L = _lcm(lf, lg)
    cf, cg = f[0][2], g[0][2]
    h = _ggcd(cf, cg)
    mf = _sub_exps(L, lf)
    mg = _sub_exps(L, lg)
    return _combine(
        ring,
        f,
        _gdiv_exact(cg, h),
        mf if any(mf) else None,
        g,
        _gdiv_exact(cf, h),
        mg if any(mg) else None,
    )


def _update(polys, G: list[int], B: list[tuple[int, int]], hi: int):
    """Gebauer-Moeller installation of the new basis element ``hi``."""
    lm = lambda i: polys[i][0][1]  # noqa: E731
    h = lm(hi)
    C = [(g, hi) for g in G]
    D = []
    while C:
        g1, _ = C.pop(0)
        l1 = _lcm(lm(g1), h)
        disjoint = all(not (x and y) for x, y in zip(lm(g1), h))
        if disjoint or not any(
            _divides(_lcm(lm(g2), h), l1) for g2, _ in C + D
        ):
            D.append((g1, hi))
    E = [(g, x) for g, x in D if not all(not (a and b) for a, b in zip(lm(g), h))]
    B_new = []
    for g1, g2 in B:
        l12 = _lcm(lm(g1), lm(g2))
        if (
            _divides(h, l12)
            and _lcm(lm(g1), h) != l12
            and _lcm(h, lm(g2)) != l12
        ):
            continue
        B_new.append((g1, g2))
    B_new.extend(E)
    G_new = [g for g in G if not _divides(h, lm(g))]
    G_new.append(hi)
    return G_new, B_new


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis: monic generators sorted by decreasing leading monomial."""

    gens: tuple[str, ...]
    order: MonomialOrder
    generators: list[MultiPoly] = field(default_factory=list)
    stats: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def contains_one(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    def reduce(self, p: MultiPoly) -> MultiPoly:
        return reduce(p, self)

    def contains(self, p: MultiPoly) -> bool:
        return reduce(p, self).is_zero()

    def is_zero_dimensional(self) -> bool:
        if self.contains_one():
            return True
        n = len(self.gens)
        pure = set()
        for e in self.leading_monomials():
            nz = [i for i, x in enumerate(e) if x]
            if len(nz) == 1:
                pure.add(nz[0])
        return len(pure) == n

    def standard_monomials(self) -> list[tuple[int, ...]]:
        """Monomials outside the leading ideal (finite only for zero-dimensional ideals)."""
        if not self.is_zero_dimensional():
            raise NotZeroDimensional("quotient ring is infinite-dimensional")
        if self.contains_one():
            return []
        lms = self.leading_monomials()
        n = len(self.gens)
        bounds = [0] * n
        for e in lms:
            nz = [i for i, x in enumerate(e) if x]
            if len(nz) == 1:
                i = nz[0]
                bounds[i] = e[i] if not bounds[i] else min(bounds[i], e[i])
        out = []

        def rec(i, cur):
            if i == n:
                t = tuple(cur)
                if not any(_divides(lm, t) for lm in lms):
                    out.append(t)
                return
            for x in range(bounds[i]):
                cur.append(x)
                rec(i + 1, cur)
                cur.pop()

        rec(0, [])
        out.sort(key=self.order.key)
        return out

    def vector_space_dim(self) -> int:
        return len(self.standard_monomials())

    def s_polynomials_reduce_to_zero(self) -> bool:
        """Buchberger criterion checked on every pair of generators."""
        ring = _Ring(len(self.gens), self.order)
        internal = [ring.from_poly(g) for g in self.generators]
        for i in range(len(internal)):
            for j in range(i + 1, len(internal)):
                s = _spoly(ring, internal[i], internal[j])
                r, _ = _reduce_internal(ring, s, internal)
                if r:
                    return False
        return True

    def to_text(self) -> str:
        return "".join(format_poly(g, self.order) + "\n" for g in self.generators)

    def to_dict(self) -> dict:
        return {
            "gens": list(self.gens),
            "order": self.order.name,
            "generators": [format_poly(g, self.order) for g in self.generators],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroebnerBasis":
        from .poly import parse_poly

        gens = tuple(d["gens"])
        return cls(gens, order_by_name(d["order"]), [parse_poly(t, gens) for t in d["generators"]])


def _polys_of(system) -> list[MultiPoly]:
    if hasattr(system, "polys"):
        return list(system.polys)
    return list(system)


def buchberger(system, order: MonomialOrder | str = GREVLEX, gens: Sequence[str] | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``system``."""
    if isinstance(order, str):
        order = order_by_name(order)
    polys_in = _polys_of(system)
    if gens is None:
        if hasattr(system, "gens"):
            gens = system.gens
        elif polys_in:
            gens = polys_in[0].gens
        else:
            gens = ()
    gens = tuple(gens)
    for p in polys_in:
        if p.gens != gens:
            raise ValueError("all generators must share the variable list")
    ring = _Ring(len(gens), order)
    polys: list = []
    G: list[int] = []
    B: list[tuple[int, int]] = []
    stats = {"pairs": 0, "reductions_to_zero": 0}

    def install(h) -> bool:
        nonlocal G, B
        polys.append(h)
        if len(h) == 1 and not any(h[0][1]):
            return True
        G, B = _update(polys, G, B, len(polys) - 1)
        return False

    inputs = sorted(
        (ring.from_poly(p) for p in polys_in if not p.is_zero()), key=lambda t: t[0][0]
    )
    unit = False
    for f in inputs:
        r, _ = _reduce_internal(ring, f, [polys[i] for i in G])
        if r and install(r):
            unit = True
            break

    def pair_key(pq):
        L = _lcm(polys[pq[0]][0][1], polys[pq[1]][0][1])
        return (sum(L), ring.key(L), pq)

    while B and not unit:
        B.sort(key=pair_key, reverse=True)
        i, j = B.pop()
        stats["pairs"] += 1
        s = _spoly(ring, polys[i], polys[j])
        if not s:
            stats["reductions_to_zero"] += 1
            continue
        r, _ = _reduce_internal(ring, s, [polys[k] for k in G])
        if not r:
            stats["reductions_to_zero"] += 1
            continue
        if install(r):
            unit = True

    if unit:
        return GroebnerBasis(gens, order, [MultiPoly.const(gens, 1)], stats)
    basis = [polys[i] for i in G]
    # minimise, then interreduce tails
    basis = [
        g for idx, g in enumerate(basis)
        if not any(_divides(h[0][1], g[0][1]) for j, h in enumerate(basis) if j != idx)
    ]
    reduced = []
    for idx, g in enumerate(basis):
        others = [h for j, h in enumerate(basis) if j != idx]
        tail, scale = _reduce_internal(ring, g[1:], others)
        lead = ring.to_poly(gens, [g[0]])
        rest = ring.to_poly(gens, tail, scale) if tail else MultiPoly.zero(gens)
        reduced.append((lead + rest).monic(order))
    reduced.sort(key=lambda p: order.key(p.leading_monomial(order)), reverse=True)
    return GroebnerBasis(gens, order, reduced, stats)


def contains_one(gb: GroebnerBasis) -> bool:
    return gb.contains_one()


def reduce(p: MultiPoly, gb: GroebnerBasis) -> MultiPoly:
    """Exact normal form of ``p`` modulo the basis."""
    if p.gens != gb.gens:
        raise ValueError("polynomial and basis use different variables")
    if p.is_zero():
        return p
    ring = _Ring(len(gb.gens), gb.order)
    internal = [ring.from_poly(g) for g in gb.generators]
    pi = ring.from_poly(p)
    # from_poly made pi primitive; remember that scaling
    lead_e, lead_c = p.leading_term(gb.order)
    pscale = GaussianRational._raw(pi[0][2][0], pi[0][2][1], 1) / lead_c
    r, scale = _reduce_internal(ring, pi, internal)
    if not r:
        return MultiPoly.zero(p.gens)
    return ring.to_poly(p.gens, r, scale * pscale)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
    ef, cf = f.leading_term(order)
    eg, cg = g.leading_term(order)
    L = _lcm(ef, eg)
    return f.mul_monomial(_sub_exps(L, ef), cf.inverse()) - g.mul_monomial(_sub_exps(L, eg), cg.inverse())


# FGLM


def fglm(gb: GroebnerBasis, target: MonomialOrder = LEX) -> GroebnerBasis:
    """Change of ordering for a zero-dimensional ideal."""
    if gb.contains_one():
        return GroebnerBasis(gb.gens, target, [MultiPoly.const(gb.gens, 1)])
    std = gb.standard_monomials()
    pos = {e: i for i, e in enumerate(std)}
    n = len(gb.gens)
    dim = len(std)

    def nf_vec(e):
        p = reduce(MultiPoly._raw(gb.gens, {e: ONE}), gb)
        v = [ZERO] * dim
        for m, c in p._terms.items():
            v[pos[m]] = c
        return v

    rows: list[tuple[int, list, dict]] = []  # pivot, vector (pivot entry 1), expression over basis monomials
    basis_monos: list = []
    new_lms: list = []
    new_polys: list[MultiPoly] = []
    zero = (0,) * n
    candidates = {zero}
    while candidates:
        t = min(candidates, key=target.key)
        candidates.discard(t)
        if any(_divides(lm, t) for lm in new_lms):
            continue
        v = nf_vec(t)
        expr: dict = {}
        for piv, w, e in rows:
            c = v[piv]
            if c.is_zero():
                continue
            v = [x - c * y for x, y in zip(v, w)]
            for k, val in e.items():
                expr[k] = expr.get(k, ZERO) + c * val
        nz = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if nz is None:
            terms = {t: ONE}
            for k, val in expr.items():
                if not val.is_zero():
                    terms[basis_monos[k]] = terms.get(basis_monos[k], ZERO) - val
            new_polys.append(MultiPoly(gb.gens, terms))
            new_lms.append(t)
            continue
        # v = NF(t) - sum expr_k NF(b_k); store normalised
        k_new = len(basis_monos)
        basis_monos.append(t)
        inv = v[nz].inverse()
        e = {k: -val * inv for k, val in expr.items() if not val.is_zero()}
        e[k_new] = inv
        rows.append((nz, [x * inv for x in v], e))
        for i in range(n):
            s = list(t)
            s[i] += 1
            candidates.add(tuple(s))
    new_polys = [p.monic(target) for p in new_polys]
    new_polys.sort(key=lambda p: target.key(p.leading_monomial(target)), reverse=True)
    return GroebnerBasis(gb.gens, target, new_polys)


@dataclass
class Elimination:
    """Univariate generator in ``keep`` plus optional back-substitution expressions."""

    keep: str
    generator: MultiPoly
    back_subst: dict[str, MultiPoly] | None
    lex_basis: GroebnerBasis
    degree: int

    def to_dict(self) -> dict:
        return {
            "keep": self.keep,
            "generator": str(self.generator),
            "back_subst": None if self.back_subst is None else {k: str(v) for k, v in self.back_subst.items()},
            "degree": self.degree,
        }


def eliminate_to_univariate(system, keep, require_shape: bool = True) -> Elimination:
    """Lex basis with ``keep`` smallest; returns its univariate member and, in shape position, ``x_j = h_j(keep)``."""
    polys = _polys_of(system)
    gens = tuple(system.gens) if hasattr(system, "gens") else polys[0].gens
    keep = gens[keep] if isinstance(keep, int) else keep
    if keep not in gens:
        raise ValueError(f"unknown variable {keep!r}")
    ordered = tuple(g for g in gens if g != keep) + (keep,)
    moved = [p.reorder(ordered) for p in polys]
    gb = buchberger(moved, GREVLEX, ordered)
    if gb.contains_one():
        raise NotZeroDimensional("system has no solutions (basis is {1})")
    if not gb.is_zero_dimensional():
        raise NotZeroDimensional("ideal is positive-dimensional")
    lex = fglm(gb, LEX)
    n = len(ordered)
    uni = [g for g in lex.generators if set(g.variables()) <= {keep}]
    if not uni:
        raise NotZeroDimensional("no univariate member in the kept variable")
    g = uni[-1]
    ring1 = (keep,)
    generator = MultiPoly._raw(ring1, {(e[-1],): c for e, c in g._terms.items()}).primitive(LEX)
    back = None
    shape = len(lex.generators) == n
    if shape:
        back = {}
        for v_idx, v in enumerate(ordered[:-1]):
            e_v = tuple(1 if i == v_idx else 0 for i in range(n))
            hit = [p for p in lex.generators if p.leading_monomial(LEX) == e_v]
            if len(hit) != 1 or set(hit[0].variables()) - {v, keep}:
                shape = False
                break
            tail = hit[0] - MultiPoly._raw(ordered, {e_v: ONE})
            back[v] = MultiPoly._raw(ring1, {(e[-1],): -c for e, c in tail._terms.items()})
    if not shape:
        if require_shape:
            raise NotShapePosition("lex basis is not in shape position", generator, lex)
        back = None
    return Elimination(keep, generator, back, lex, generator.total_degree())
