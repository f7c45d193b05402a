from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from planegerms.algebra import GaussianRational, scalar
from planegerms.bivariate import BivarPoly
from planegerms.parser import ParseError, format_poly, parse_poly, tokenize

gauss = st.builds(GaussianRational, st.fractions(-9, 9, max_denominator=6),
                  st.fractions(-3, 3, max_denominator=4))
polys = st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), gauss, max_size=6).map(
    lambda d: BivarPoly({k: v for k, v in d.items() if not v.is_zero()}))


@given(polys)
def test_format_round_trips(f):
    assert parse_poly(format_poly(f)) == f


def test_precedence():
    x, y = BivarPoly.x(), BivarPoly.y()
    assert parse_poly("-x^2") == -(x * x)
    assert parse_poly("2*x^3*y") == 2 * x ** 3 * y
    assert parse_poly("x - y - 1") == x - y - 1
    assert parse_poly("(x+y)^2") == x * x + 2 * x * y + y * y
    assert parse_poly("x**2 / 4") == BivarPoly.const(scalar(Fraction(1, 4))) * x * x
    assert parse_poly("x^2 − 3·y") == x * x - 3 * y
    assert parse_poly("i*x") == BivarPoly.const(GaussianRational(0, 1)) * x


@pytest.mark.parametrize("text,pos,msg", [
    ("2x", 1, "implicit multiplication"),
    ("x y", 2, "implicit multiplication"),
    ("(x+y)(x-y)", 5, "implicit multiplication"),
    ("x^y", 2, "exponent"),
    ("x^-2", 2, "exponent"),
    ("x^2^3", 3, "chained"),
    ("x/y", 1, "non-constant"),
    ("x/0", 1, "division by zero"),
    ("x + z", 4, "unknown symbol"),
    ("x + $", 4, "unexpected character"),
    ("(x+y", 4, "expected ')'"),
    ("", 0, "empty"),
    ("x +", 3, "end of input"),
])
def test_errors_carry_positions(text, pos, msg):
    with pytest.raises(ParseError) as err:
        parse_poly(text)
    assert err.value.pos == pos
    assert msg in str(err.value)
    # the caret line points under the offending column
    assert str(err.value).splitlines()[-1] == "  " + " " * pos + "^"


def test_tokens():
    toks = tokenize(" x**2 + 10*y")
    assert [(t.kind, t.value, t.pos) for t in toks] == [
        ("name", "x", 1), ("op", "^", 2), ("num", "2", 4), ("op", "+", 6),
        ("num", "10", 8), ("op", "*", 10), ("name", "y", 11), ("end", "", 12)]


@pytest.mark.parametrize("text,out", [
    ("x^2 - y^3", "x^2 - y^3"),
    ("-y^3 + x^2", "x^2 - y^3"),
    ("0*x", "0"),
    ("x/2 - 3", "-3 + 1/2*x"),
])
def test_format(text, out):
    assert format_poly(parse_poly(text)) == out
