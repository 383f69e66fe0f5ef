import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entangle_cert.exact import GaussianRational, ParseError, gr
from entangle_cert.poly import GREVLEX, LEX, MultiPoly, format_poly, format_system, parse_poly, parse_system

GENS = ("x0", "x1", "x2")

coeffs = st.builds(GaussianRational, st.integers(-9, 9), st.integers(-3, 3))
monomials = st.tuples(*(st.integers(0, 3) for _ in GENS))
polys = st.dictionaries(monomials, coeffs, max_size=6).map(lambda d: MultiPoly(GENS, d))


@given(polys)
def test_format_parse_round_trip(p):
    if p.is_zero():
        return
    assert parse_poly(format_poly(p), GENS) == p
    assert format_poly(parse_poly(format_poly(p), GENS)) == format_poly(p)


@given(polys, polys, polys)
@settings(max_examples=50)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == MultiPoly.zero(GENS)


@given(polys, st.lists(st.integers(-3, 3), min_size=3, max_size=3))
@settings(max_examples=50)
def test_evaluation_is_a_homomorphism(p, point):
    q = p * p + p
    v = p.evaluate_exact(point)
    assert q.evaluate_exact(point) == v * v + v


def test_display_order_is_lex():
    p = parse_poly("x1*x2 - 3*x0^2 + 42*x1^2 + x0*x2 - 11*x0*x1")
    assert format_poly(p) == "-3*x0^2-11*x0*x1+x0*x2+42*x1^2+x1*x2"


def test_complex_coefficients_are_parenthesised():
    p = MultiPoly(("x0",), {(1,): gr("1+i"), (0,): gr("-1/2i")})
    text = format_poly(p)
    assert text == "(1+1i)*x0-(0+1/2i)"
    assert parse_poly(text, ("x0",)) == p


def test_orders():
    p = parse_poly("x0*x2^2 + x1^3", GENS)
    assert p.leading_monomial(LEX) == (1, 0, 2)
    assert p.leading_monomial(GREVLEX) == (0, 3, 0)


def test_substitute_and_primitive():
    p = parse_poly("2*x0*x1 + 4*x1^2 - 6", ("x0", "x1"))
    assert p.substitute({0: 1}) == parse_poly("2*x1+4*x1^2-6", ("x1",))
    assert p.primitive() == parse_poly("x0*x1+2*x1^2-3", ("x0", "x1"))


def test_system_round_trip():
    text = "-3*x0^2+x1\nx0*x1-1/2\n"
    assert format_system(parse_system(text)) == text


@pytest.mark.parametrize("text", ["", "x0^", "x0**", "3*y", "(1+)*x0"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_poly(text, ("x0",))
