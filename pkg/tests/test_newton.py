from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from planegerms.algebra import ONE, SplittingContext, is_zero, scalar
from planegerms.bivariate import BivarPoly
from planegerms.newton import (NewtonPolygon, RootFinder, coefficient_state, evaluate_at_series,
                               expand_along, group_conjugates, is_mini_regular, lower_left_hull,
                               mini_regularize, newton_polygon, root_contact, weierstrass)
from planegerms.parser import parse_poly
from planegerms.puiseux import PuiseuxSeries, Unresolved

F = Fraction
point = st.tuples(st.integers(0, 8), st.integers(0, 12))


def brute_vertices(points):
    """Vertices by definition: minimisers of q*i + j for some q > 0 that are extreme."""
    best = {}
    for i, j in points:
        best[i] = min(best.get(i, j), j)
    pts = sorted(best.items())
    out = []
    for p in pts:
        # p is a vertex iff it is the unique minimiser for some q > 0
        qs = [F(k, 4) for k in range(1, 400)]
        for q in qs:
            vals = [q * i + j for i, j in pts]
            m = min(vals)
            if q * p[0] + p[1] == m and vals.count(m) == 1:
                out.append(p)
                break
    jmin = min(j for _, j in pts)
    left = min(i for i, j in pts if j == jmin)
    if (left, jmin) not in out:
        out.append((left, jmin))
    return sorted(out)


@given(st.lists(point, min_size=1, max_size=8))
def test_hull_matches_brute_force(points):
    hull = lower_left_hull(points)
    assert [(i, int(j)) for i, j in hull] == brute_vertices(points)


@given(st.lists(point, min_size=1, max_size=8),
       st.fractions(min_value=F(1, 7), max_value=10, max_denominator=7))
def test_tropical_matches_brute_force(points, q):
    poly = NewtonPolygon(points)
    assert poly.tropical(q) == min(q * i + j for i, j in points)


@given(st.lists(point, min_size=2, max_size=8))
def test_edges_have_increasing_coslopes(points):
    es = NewtonPolygon(points).edges
    slopes = [e.coslope for e in es]
    assert slopes == sorted(slopes)
    assert all(s > 0 for s in slopes)


def test_certified_range():
    poly = NewtonPolygon([(0, 10), (2, 4), (4, 0)], certified_below=3)
    assert [e.coslope for e in poly.edges] == [2, 3]
    with pytest.raises(Unresolved):
        poly.highest_coslope
    with pytest.raises(Unresolved):
        poly.tropical(3)
    assert poly.tropical(1) == 4


def test_cusp_polygon():
    poly = newton_polygon(parse_poly("x^2 - y^3"))
    assert poly.vertices == ((0, 3), (2, 0))
    assert poly.highest_coslope == F(3, 2)
    assert poly.vertical_intercept == 3


def test_mini_regularize():
    f = parse_poly("x*y")
    assert not is_mini_regular(f)
    g, lam = mini_regularize(f)
    assert lam == 1 and is_mini_regular(g)
    h, lam0 = mini_regularize(parse_poly("x^2 - y^3"))
    assert lam0 == 0


@pytest.mark.parametrize("text", ["x^2 - y^3 + x^3", "(1 + x)*(x^2 - y^5) + y*x^4",
                                  "(2 + y + x^2)*(x - y^2)*(x + y^3)"])
def test_weierstrass_factor_divides(text):
    f = parse_poly(text)
    st_, m = weierstrass(f, 24)
    W = BivarPoly({(k, int(e)): c for k, d in enumerate(st_.a) for e, c in d.items()})
    assert W.terms[(m, 0)] == ONE
    # f = U * W: the remainder of f by W vanishes modulo y^24, checked by plugging in roots
    ctx = SplittingContext()
    roots = RootFinder(ctx, f).roots()
    assert len(roots) == m
    for r in roots:
        r.refine_to(6)
        s = r.series()
        val = evaluate_at_series(W, s, cap=6)
        assert all(e >= 6 for e, _ in val.terms)


def _product(branches):
    x = BivarPoly.x()
    f = BivarPoly.const(1)
    for b in branches:
        p = BivarPoly({(0, e): scalar(c) for e, c in b.items()})
        f = f * (x - p)
    return f


branch = st.dictionaries(st.integers(1, 5), st.integers(-3, 3).filter(bool), min_size=1, max_size=3)


@settings(max_examples=40)
@given(st.lists(branch, min_size=1, max_size=4, unique_by=lambda d: tuple(sorted(d.items()))))
def test_roots_of_products_recovered(branches):
    f = _product(branches)
    roots = RootFinder(SplittingContext(), f).roots()
    assert len(roots) == len(branches)
    found = []
    for r in roots:
        r.refine_to(6)
        found.append({int(e): int(c.re) for e, c in r.series().terms if e < 6})
    want = [{e: c for e, c in b.items()} for b in branches]
    assert sorted(map(sorted, map(dict.items, found))) == sorted(map(sorted, map(dict.items, want)))
    # contacts between recovered roots are the orders of the branch differences
    for a, b in combinations(range(len(roots)), 2):
        d = {e: found[a].get(e, 0) - found[b].get(e, 0) for e in set(found[a]) | set(found[b])}
        assert root_contact(roots[a], roots[b]) == min(e for e, c in d.items() if c)


def test_ramified_roots_and_conjugates():
    ctx = SplittingContext()
    f = parse_poly("(x^2 - y^3)^2 - 4*x*y^5 - y^7")
    roots = RootFinder(ctx, f).roots()
    assert len(roots) == 4
    for r in roots:
        r.refine_to(3)
    groups = group_conjugates(ctx, roots)
    assert sorted(len(g) for g in groups) == [4]
    assert all(r.ramification == 4 for r in roots)
    assert sorted(root_contact(a, b) for a, b in combinations(roots, 2)) == [
        F(3, 2), F(3, 2), F(3, 2), F(3, 2), F(7, 4), F(7, 4)]


def test_algebraic_roots():
    ctx = SplittingContext()
    roots = RootFinder(ctx, parse_poly("x^2 - 2*y^2")).roots()
    assert len(roots) == 2
    cs = [r.series().coefficient(1) for r in roots]
    assert all(is_zero(c * c - 2) for c in cs)
    assert is_zero(cs[0] + cs[1])


def test_exact_roots_detected():
    roots = RootFinder(SplittingContext(), parse_poly("(x - y^2)*(x + y^3)")).roots()
    for r in roots:
        r.refine_to(10)
    assert all(r.exact for r in roots)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 4), st.integers(-3, 3)), max_size=8),
       branch)
def test_expand_along_matches_composition(monos, gam):
    f = BivarPoly({(i, j): scalar(c) for i, j, c in monos if c})
    gamma = PuiseuxSeries({e: scalar(c) for e, c in gam.items()})
    st_ = expand_along(f, gamma)
    x, y = BivarPoly.x(), BivarPoly.y()
    gpoly = BivarPoly({(0, e): scalar(c) for e, c in gam.items()})
    direct = f.compose(x + gpoly, y) if f.terms else f
    want = coefficient_state(direct)
    for k in range(len(st_.a)):
        got = {e: c for e, c in st_.a[k].items()}
        ref = want.a[k] if k < len(want.a) else {}
        assert got == {e: c for e, c in ref.items() if not c.is_zero()}
