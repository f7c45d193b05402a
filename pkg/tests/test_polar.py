from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from germs import DEFORMED, CUSPS, NONISOLATED, SMALL, SMOOTH, germ, poly
from planegerms.polar import (EmptyCluster, EmptyPolar, NonIsolated, loj_grad, milnor_number,
                              nontangential_rho, oracle_milnor, partial_rho, partial_rho_table,
                              polar_quotients, quotient_set, rho0, tangent_cone, tangential_milnor,
                              tangential_rho)

F = Fraction


@settings(max_examples=25)
@given(st.integers(2, 6), st.integers(2, 9))
def test_brieskorn_pham(a, b):
    # x^a - y^b with a <= b: polar arc x = 0 counted a - 1 times, quotient b
    a, b = min(a, b), max(a, b)
    text = f"x^{a}-y^{b}"
    g = germ(text)
    assert milnor_number(g) == (a - 1) * (b - 1) == oracle_milnor(poly(text))
    assert polar_quotients(g) == [(b, a - 1)]


@settings(max_examples=25)
@given(st.integers(2, 5), st.integers(1, 4))
def test_quasi_homogeneous_quotient(a, k):
    b = a + k
    g = germ(f"x^{a}-y^{b}")
    assert quotient_set(g) == [b]
    assert loj_grad(g) == b - 1
    assert rho0(g) == F(b - 1, b)


@pytest.mark.parametrize("text", list(SMALL))
def test_milnor_agrees_with_resultant(text):
    assert milnor_number(germ(text)) == SMALL[text] == oracle_milnor(poly(text))


@pytest.mark.parametrize("text", list(SMALL) + [CUSPS, DEFORMED])
def test_exponents_are_consistent(text):
    g = germ(text)
    qs = polar_quotients(g)
    q = max(h for h, _ in qs)
    assert loj_grad(g) == q - 1
    assert rho0(g) == (F(q) - 1) / q
    # every partial exponent is bounded by the global one
    for key, rho in partial_rho_table(g).items():
        assert rho <= rho0(g)
    assert sum(tangential_milnor(g, ln) for ln in range(tangent_cone(g).r)) + \
        sum(a.weight * (a.h - 1) for a in g.polar_arcs
            if a.tangent_line is None and not a.on_zero_locus) == milnor_number(g)


@pytest.mark.parametrize("text", NONISOLATED)
def test_nonisolated_is_reported(text):
    with pytest.raises(NonIsolated):
        milnor_number(germ(text))
    with pytest.raises(NonIsolated):
        oracle_milnor(poly(text))


@pytest.mark.parametrize("text", SMOOTH)
def test_smooth_germs(text):
    g = germ(text)
    assert milnor_number(g) == 0 == oracle_milnor(poly(text))
    with pytest.raises(EmptyPolar):
        polar_quotients(g)


def test_tangent_cone():
    cone = tangent_cone(germ("x*y*(x+y)"))
    assert cone.r == 3 and sorted(m for _, m in cone.lines) == [1, 1, 1]
    cone = tangent_cone(germ(CUSPS))
    assert cone.r == 1 and cone.lines[0][1] == 4


def test_ordinary_triple_point():
    g = germ("x*y*(x+y)")
    # two transverse polar arcs, each with quotient 3
    assert nontangential_rho(g) == F(2, 3)
    with pytest.raises(EmptyCluster):
        tangential_rho(g, 0)
    with pytest.raises(EmptyCluster):
        partial_rho(g, 0, F(7, 3))


def test_cusp_table():
    g = germ("x^2-y^3")
    assert partial_rho_table(g) == {(0, F(3, 2)): F(2, 3)}
    assert tangential_milnor(g, 0) == 2
