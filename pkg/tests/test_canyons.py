from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from germs import DEFORMED, PAIRS, CUSPS, SMALL, germ
from planegerms.algebra import is_zero, scalar
from planegerms.canyons import (SameCanyon, canyon_clusters, canyon_contact, compare_lipschitz,
                                common_scaling, group_canyons, hp_invariants, lipschitz_signature)
from planegerms.puiseux import INF

F = Fraction
ISOLATED = [CUSPS, DEFORMED, PAIRS] + list(SMALL)


@settings(max_examples=30)
@given(st.integers(2, 6), st.integers(1, 6))
def test_brieskorn_pham_degree(a, k):
    # |f_x| ~ |y|^(q(a-1)) and |f_y| ~ |y|^(b-1) along x = u y^q balance at q = (b-1)/(a-1)
    b = a + k
    g = germ(f"x^{a}-y^{b}")
    (c,) = group_canyons(g)
    assert c.degree == F(b - 1, a - 1)
    assert c.h == b and is_zero(c.a_h + 1)


def test_homogeneous_canyons_are_cones():
    g = germ("x*y*(x+y)")
    cs = group_canyons(g)
    assert [c.degree for c in cs] == [1, 1]
    assert canyon_clusters(g) == [] and hp_invariants(g) == []


@pytest.mark.parametrize("text", ISOLATED)
def test_canyons_partition_polar_roots(text):
    g = germ(text)
    cs = group_canyons(g)
    seen = sorted(m for c in cs for m in c.members)
    assert seen == list(range(len(g.polar_roots)))
    for c in cs:
        prs = [g.polar_roots[m] for m in c.members]
        assert all(pr.h == c.h for pr in prs)
        if c.degree != INF:
            # the defining relation holds inside a canyon and fails across canyons
            assert all(pr.d_gr == c.degree for pr in prs)
            assert c.degree >= 1 and c.degree <= c.h


@pytest.mark.parametrize("text", [CUSPS, DEFORMED, PAIRS])
def test_canyon_contacts(text):
    g = germ(text)
    cs = [c for c in group_canyons(g) if c.degree != INF and c.degree > 1]
    for c1, c2 in combinations(cs, 2):
        k = canyon_contact(c1, c2)
        assert k == canyon_contact(c2, c1)
        assert k <= min(c1.degree, c2.degree)
    for c in cs:
        with pytest.raises(SameCanyon):
            canyon_contact(c, c)
    for cl in canyon_clusters(g):
        assert sorted(a for cls in cl.classes for a in cls) == sorted(cl.canyons)
        for a in cl.canyons:
            assert len(cl.omega[a]) == len(cl.canyons) - 1


def test_double_cusp_canyons():
    g = germ(CUSPS)
    assert sorted((d, h) for d, h in ((c.degree, c.h) for c in group_canyons(g))) == [
        (3, 8), (5, 10), (5, 10)]
    assert len(canyon_clusters(g)) == 3


@pytest.mark.parametrize("text", ISOLATED)
def test_self_comparison(text):
    v = compare_lipschitz(text, text)
    assert v.compatible
    # with rational coefficients the identity pairing is the first one tried
    if all(c.a_h is None or c.a_h.level == 0 for c in group_canyons(germ(text))):
        assert all(s.value == 1 for s in v.scalings.values())


@pytest.mark.parametrize("c,n", [(2, 3), (F(1, 4), 3), (-1, 3)])
def test_cusp_rescaling(c, n):
    # (x, y) -> (x, t y) sends a_h to a_h * t^h
    v = compare_lipschitz("x^2-y^3", f"x^2-{c}*y^3" if c > 0 else f"x^2+{-c}*y^3")
    assert v.compatible
    (s,) = v.scalings.values()
    assert s.num == n and s.value == c


def test_different_quotients_are_distinct():
    v = compare_lipschitz("x^2-y^3", "x^2-y^5")
    assert not v.compatible and "Q=" in v.witness
    assert lipschitz_signature(germ("x^2-y^3")) != lipschitz_signature(germ("x^2-y^5"))


def test_hp_coefficients_must_scale_together():
    # two canyons on one line: c^h must map both coefficients at once
    f = "(x-y^2)*(x+y^2)*(x-2*y^3)"
    assert compare_lipschitz(f, f).compatible
    pairs = [(scalar(1), scalar(8), 3), (scalar(1), scalar(64), 6)]
    assert str(common_scaling(pairs)) == "c = 2"
    assert common_scaling([(scalar(1), scalar(2), 3), (scalar(1), scalar(3), 6)]) is None


@given(st.integers(1, 4), st.integers(1, 4), st.sampled_from([2, 3, 5]))
def test_common_scaling_finds_power(p, q, base):
    # b = c^h a for c = base and h in {p, q}; the certificate is c^gcd(p, q)
    sc = common_scaling([(scalar(1), scalar(base ** p), p), (scalar(3), scalar(3 * base ** q), q)])
    assert sc is not None and sc.den == 1 and sc.num == gcd(p, q)
    assert sc.value == base ** sc.num
    assert str(sc) == f"c = {base}"
