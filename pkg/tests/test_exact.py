from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from entangle_cert.exact import GaussianRational, ParseError, format_gr, gr, gr_arith, parse_gr

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
scalars = st.builds(GaussianRational, fractions, fractions)
nonzero = scalars.filter(lambda x: not x.is_zero())


@given(scalars)
def test_format_parse_round_trip(x):
    assert parse_gr(format_gr(x)) == x
    assert format_gr(parse_gr(format_gr(x))) == format_gr(x)


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == gr(0)


@given(scalars, nonzero)
def test_division_inverts_multiplication(a, b):
    assert (a / b) * b == a
    assert b * b.inverse() == gr(1)


@given(scalars, scalars)
def test_conjugation_is_a_ring_map(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.abs2() == (a * a.conj()).re
    assert (a * a.conj()).im == 0


@given(scalars, scalars)
def test_matches_python_complex(a, b):
    assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9 * (1 + abs(complex(a) * complex(b)))


@pytest.mark.parametrize(
    "text,value",
    [
        ("3", GaussianRational(3)),
        ("-5/7", GaussianRational(Fraction(-5, 7))),
        ("1/2-1/3i", GaussianRational(Fraction(1, 2), Fraction(-1, 3))),
        ("i", GaussianRational(0, 1)),
        ("-i", GaussianRational(0, -1)),
        ("1+i", GaussianRational(1, 1)),
        ("-3+2i", GaussianRational(-3, 2)),
        ("2i", GaussianRational(0, 2)),
    ],
)
def test_parse_accepts_canonical_and_loose_forms(text, value):
    assert parse_gr(text) == value


@pytest.mark.parametrize("text", ["", "1+", "abc", "1/0", "1++2i", "i1"])
def test_parse_rejects_junk(text):
    with pytest.raises(ParseError):
        parse_gr(text)


def test_canonical_strings():
    assert format_gr(gr("1+i")) == "1+1i"
    assert format_gr(gr("-6/4")) == "-3/2"
    assert format_gr(gr("0-1/2i")) == "0-1/2i"


def test_gr_arith_operators():
    assert gr_arith("1+i", "1-i", "*") == gr(2)
    assert gr_arith("1", "i", "/") == gr("-i")
    assert gr_arith("3", "1", "−") == gr(2)
    with pytest.raises(ZeroDivisionError):
        gr_arith(1, 0, "/")
    with pytest.raises(ValueError):
        gr_arith(1, 1, "%")


def test_float_complex_is_refused():
    with pytest.raises(TypeError):
        gr(0.5 + 1j)


def test_parse_error_carries_position():
    e = ParseError("bad", line=3, column=7)
    assert (e.line, e.column) == (3, 7)
    assert "line 3, column 7" in str(e)
