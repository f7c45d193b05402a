"""Polar quotients, Lojasiewicz exponents and Milnor numbers of a germ."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .analysis import GermAnalysis, PolarArc, analyze
from .bivariate import BivarPoly, to_sympy


class NonIsolated(ArithmeticError):
    """``f_x`` and ``f_y`` share a component through the origin."""


class EmptyPolar(ValueError):
    """There is no polar arc off the zero locus."""


class EmptyCluster(ValueError):
    """No polar arc carries the requested key."""


def germ(f) -> GermAnalysis:
    return f if isinstance(f, GermAnalysis) else analyze(f)


@dataclass
class TangentCone:
    m: int
    lines: list  # (slope c of the line x = c*y, multiplicity r_k)

    @property
    def r(self) -> int:
        return len(self.lines)


def tangent_cone(f) -> TangentCone:
    g = germ(f)
    return TangentCone(g.m, [(ln.slope, ln.multiplicity) for ln in g.lines])


def classify_polar_arcs(f) -> list[PolarArc]:
    return germ(f).polar_arcs


def _finite(g: GermAnalysis) -> list[PolarArc]:
    return [a for a in g.polar_arcs if not a.on_zero_locus]


def polar_quotients(f) -> list[tuple[object, int]]:
    """``(q_j, m_j)`` per polar branch, ``m_j`` counting roots with multiplicity."""
    g = germ(f)
    arcs = _finite(g)
    if not arcs:
        raise EmptyPolar("no polar arc off the zero locus")
    return sorted((a.h, a.weight) for a in arcs)


def quotient_set(f, line: int | None = ...) -> list:
    """Distinct polar quotients, optionally restricted to arcs tangent to ``line``."""
    g = germ(f)
    arcs = [a for a in _finite(g) if line is ... or a.tangent_line == line]
    return sorted({a.h for a in arcs})


def milnor_number(f) -> int:
    """``sum m_j (q_j - 1)``; a smooth germ has no polar branch and gives 0."""
    g = germ(f)
    if not g.isolated():
        raise NonIsolated("a polar branch lies on the zero locus")
    return int(sum(a.weight * (a.h - 1) for a in g.polar_arcs))


def loj_grad(f) -> Fraction:
    """Lojasiewicz exponent of the gradient: ``max Q - 1``."""
    q = max(h for h, _ in polar_quotients(f))
    return Fraction(q) - 1


def rho0(f) -> Fraction:
    q = Fraction(max(h for h, _ in polar_quotients(f)))
    return (q - 1) / q


def _rho(arcs: list[PolarArc]) -> Fraction:
    if not arcs:
        raise EmptyCluster("no polar arc with this key")
    q = Fraction(max(a.h for a in arcs))
    return (q - 1) / q


def partial_rho(f, line: int | None, delta) -> Fraction:
    """Exponent restricted to arcs tangent to ``line`` with contact ``delta`` (``None``: non-tangential)."""
    g = germ(f)
    return _rho([a for a in _finite(g) if a.tangent_line == line and a.delta == delta])


def tangential_rho(f, line: int) -> Fraction:
    g = germ(f)
    return _rho([a for a in _finite(g) if a.tangent_line == line])


def nontangential_rho(f) -> Fraction:
    g = germ(f)
    return _rho([a for a in _finite(g) if a.tangent_line is None])


def tangential_milnor(f, line: int) -> int:
    """Sum over polar branches tangent to ``line`` that are off the zero locus."""
    g = germ(f)
    return int(sum(a.weight * (a.h - 1) for a in _finite(g) if a.tangent_line == line))


def partial_rho_table(f) -> dict[tuple, Fraction]:
    g = germ(f)
    keys = sorted({(a.tangent_line, a.delta) for a in _finite(g)},
                  key=lambda k: (-1 if k[0] is None else k[0], k[1]))
    return {k: partial_rho(g, *k) for k in keys}


# ------------------------------------------------------------------ resultant oracle

def oracle_milnor(f: BivarPoly) -> int:
    """Intersection multiplicity of ``f_x`` and ``f_y`` at the origin via a resultant.

    After the linear change ``y -> y + t x`` (first ``t = 0, 1, 2, ...`` that
    works), both partials have constant leading coefficient in ``x`` and no
    common zero other than the origin lies on ``y = 0``; the multiplicity is
    then the order at ``y = 0`` of ``Res_x(f_x, f_y)``.
    """
    import sympy

    x, y = sympy.symbols("x y")
    F = to_sympy(f).as_expr()
    P, Q = sympy.diff(F, x), sympy.diff(F, y)
    Pp, Qp = sympy.Poly(P, x, y), sympy.Poly(Q, x, y)
    if Pp.eval({x: 0, y: 0}) != 0 or Qp.eval({x: 0, y: 0}) != 0:
        return 0
    if Pp.is_zero or Qp.is_zero:
        raise NonIsolated("a partial derivative vanishes identically")
    common = sympy.gcd(Pp, Qp)
    if common.total_degree() > 0:
        if common.eval({x: 0, y: 0}) == 0:
            raise NonIsolated("the partials share a component through the origin")
        Pp = sympy.Poly(sympy.quo(Pp, common), x, y)
    for t in range(0, 64):
        A = sympy.Poly(Pp.as_expr().subs(y, y + t * x), x, y)
        B = sympy.Poly(Qp.as_expr().subs(y, y + t * x), x, y)
        la = sympy.Poly(A, x).LC()
        lb = sympy.Poly(B, x).LC()
        if not (sympy.Poly(la, y).is_ground and sympy.Poly(lb, y).is_ground):
            continue
        a0 = sympy.Poly(A.as_expr().subs(y, 0), x)
        b0 = sympy.Poly(B.as_expr().subs(y, 0), x)
        g0 = sympy.gcd(a0, b0)
        if g0.degree() > 0 and sympy.Poly(g0.as_expr(), x) != sympy.Poly(x ** g0.degree(), x) * g0.LC():
            continue
        res = sympy.Poly(sympy.resultant(A.as_expr(), B.as_expr(), x), y)
        if res.is_zero:
            raise NonIsolated("resultant vanishes identically")
        return min(m[0] for m in res.monoms())
    raise RuntimeError("no suitable linear change found")
