from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from planegerms.algebra import ONE, is_zero, scalar
from planegerms.puiseux import (INF, ArcClass, PuiseuxSeries, SameBranch, Unresolved,
                                branch_contact, conjugates, contact, format_series)

F = Fraction
expo = st.fractions(min_value=0, max_value=6, max_denominator=3)
coef = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)
terms = st.dictionaries(expo, coef, max_size=5)


def ps(d: dict, omega=INF) -> PuiseuxSeries:
    return PuiseuxSeries({e: scalar(c) for e, c in d.items()}, omega)


def brute_product(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def as_dict(s: PuiseuxSeries) -> dict:
    return {e: F(int(c.re.numerator), int(c.re.denominator)) for e, c in s.terms}


@given(terms, terms)
def test_exact_product_matches_convolution(a, b):
    assert as_dict(ps(a) * ps(b)) == brute_product(a, b)


@given(terms, terms)
def test_sum_and_difference(a, b):
    s = ps(a) + ps(b)
    want = {e: a.get(e, 0) + b.get(e, 0) for e in set(a) | set(b)}
    assert as_dict(s) == {e: c for e, c in want.items() if c}
    assert not (ps(a) - ps(a)).terms


@given(terms, terms, st.fractions(min_value=1, max_value=8, max_denominator=3))
def test_truncated_product_is_sound(a, b, w):
    # every term reported below omega must agree with the exact product
    full = brute_product(a, b)
    got = ps(a).known_below(w) * ps(b)
    assert got.omega <= w + min(b, default=INF)
    for e, c in as_dict(got).items():
        assert e < got.omega
        assert full.get(e) == c
    for e, c in full.items():
        if e < got.omega:
            assert as_dict(got).get(e) == c


@given(terms, terms, terms)
def test_contact_is_ultrametric(a, b, c):
    A, B, C = ps(a), ps(b), ps(c)
    assume(a != b and b != c and a != c)
    ab, bc, ac = contact(A, B), contact(B, C), contact(A, C)
    assert ab == contact(B, A)
    assert ac >= min(ab, bc)


def test_contact_of_equal_exact_series():
    assert contact(ps({2: 1}), ps({2: 1})) == INF


def test_unknown_coefficients_raise():
    s = ps({1: 1}, omega=3)
    assert s.coefficient(2) == 0
    with pytest.raises(Unresolved):
        s.coefficient(3)
    with pytest.raises(Unresolved):
        (s - ps({1: 1})).ord()
    with pytest.raises(Unresolved):
        s.truncate(4)


def test_ramification_and_conjugates():
    s = ps({3: 1, F(7, 2): 2})
    assert s.ramification() == 2
    cs = conjugates(s)
    assert len(cs) == 2
    assert contact(cs[0], cs[1]) == F(7, 2)
    cube = ps({F(4, 3): 1})
    c3 = conjugates(cube)
    assert len(c3) == 3
    for x in c3:
        # (c y^(4/3))^3 = y^4 for every conjugate
        assert is_zero((x ** 3).coefficient(4) - ONE)


def test_branch_contact():
    a = ArcClass(ps({F(3, 2): 1}), 2)
    b = ArcClass(ps({F(3, 2): 1, 2: 1}), 2)
    assert branch_contact(a, b) == 2
    with pytest.raises(SameBranch):
        branch_contact(a, a)


@pytest.mark.parametrize("d,omega,text", [
    ({2: 1, 4: -1}, INF, "y^2 - y^4"),
    ({2: -1}, INF, "-y^2"),
    ({F(3, 2): F(1, 2)}, 3, "1/2*y^(3/2) + O(y^3)"),
    ({}, INF, "0"),
    ({0: 3, 1: -2}, INF, "3 - 2*y"),
])
def test_format(d, omega, text):
    assert format_series(ps(d, omega)) == text


@given(terms, st.fractions(min_value=-2, max_value=2, max_denominator=3))
def test_shift_multiplies_by_monomial(a, e):
    assert as_dict(ps(a).shift(e)) == as_dict(ps(a) * ps({e: 1}))
