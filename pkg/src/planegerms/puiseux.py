"""Truncated Puiseux series in ``y`` with exact coefficients.

A series carries the exponents it knows and a bound ``omega``: every term with
exponent below ``omega`` is present.  ``omega = inf`` means the series is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import ONE, ZERO, Tower, adjoin_root_of_unity, is_zero, power, scalar

INF = math.inf


class Unresolved(Exception):
    """The requested quantity depends on terms that are not known yet."""


class SameBranch(ValueError):
    """Two arc classes coincide."""


def _coeff(c):
    if isinstance(c, (int, Fraction)):
        return scalar(c)
    return c


def _nonzero(c) -> bool:
    return not is_zero(c)


class PuiseuxSeries:
    __slots__ = ("terms", "omega")

    def __init__(self, terms: Iterable | dict = (), omega=INF):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        for e, c in items:
            e = Fraction(e)
            if e < omega:
                c = _coeff(c)
                acc[e] = acc[e] + c if e in acc else c
        self.terms = tuple((e, acc[e]) for e in sorted(acc) if _nonzero(acc[e]))
        self.omega = omega if omega == INF else Fraction(omega)

    @classmethod
    def _raw(cls, terms: tuple, omega) -> "PuiseuxSeries":
        s = object.__new__(cls)
        s.terms = terms
        s.omega = omega
        return s

    @classmethod
    def monomial(cls, c, e) -> "PuiseuxSeries":
        return cls([(e, c)])

    @property
    def exact(self) -> bool:
        return self.omega == INF

    def ord(self):
        if self.terms:
            return self.terms[0][0]
        if self.omega == INF:
            return INF
        raise Unresolved(f"no term known below {self.omega}")

    def ord_lower_bound(self):
        return self.terms[0][0] if self.terms else self.omega

    def leading(self):
        if not self.terms:
            self.ord()
            raise ValueError("zero series has no leading term")
        return self.terms[0]

    def coefficient(self, e):
        e = Fraction(e)
        if e >= self.omega:
            raise Unresolved(f"coefficient of y^{e} is not known")
        for x, c in self.terms:
            if x == e:
                return c
            if x > e:
                break
        return ZERO

    def exponents(self) -> list[Fraction]:
        return [e for e, _ in self.terms]

    def ramification(self) -> int:
        n = 1
        for e, _ in self.terms:
            n = math.lcm(n, e.denominator)
        return n

    def truncate(self, e) -> "PuiseuxSeries":
        """Exact polynomial arc made of the terms with exponent strictly below ``e``."""
        if e != INF and e > self.omega:
            raise Unresolved(f"terms below {e} are not all known")
        if e == INF and self.omega != INF:
            raise Unresolved("series is not exact")
        return PuiseuxSeries._raw(tuple(t for t in self.terms if t[0] < e), INF)

    def known_below(self, e) -> "PuiseuxSeries":
        """Same series with ``omega`` lowered to ``e``."""
        w = min(self.omega, e)
        return PuiseuxSeries._raw(tuple(t for t in self.terms if t[0] < w), w)

    def __add__(self, o):
        if not isinstance(o, PuiseuxSeries):
            o = PuiseuxSeries([(0, o)])
        w = min(self.omega, o.omega)
        acc = dict(t for t in self.terms if t[0] < w)
        for e, c in o.terms:
            if e < w:
                acc[e] = acc[e] + c if e in acc else c
        return PuiseuxSeries(acc, w)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._raw(tuple((e, -c) for e, c in self.terms), self.omega)

    def __sub__(self, o):
        if not isinstance(o, PuiseuxSeries):
            o = PuiseuxSeries([(0, o)])
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, PuiseuxSeries):
            return self.scale(o)
        lo_a, lo_b = self.ord_lower_bound(), o.ord_lower_bound()
        w = min(self.omega + lo_b, o.omega + lo_a)
        acc: dict = {}
        for e1, c1 in self.terms:
            if e1 + lo_b >= w:
                break
            for e2, c2 in o.terms:
                e = e1 + e2
                if e >= w:
                    break
                p = c1 * c2
                acc[e] = acc[e] + p if e in acc else p
        return PuiseuxSeries(acc, w)

    def __rmul__(self, o):
        return self.scale(o)

    def scale(self, c) -> "PuiseuxSeries":
        c = _coeff(c)
        return PuiseuxSeries(((e, x * c) for e, x in self.terms), self.omega)

    def shift(self, e) -> "PuiseuxSeries":
        """Multiply by ``y^e``."""
        e = Fraction(e)
        return PuiseuxSeries._raw(tuple((x + e, c) for x, c in self.terms), self.omega + e)

    def __pow__(self, n: int):
        out = PuiseuxSeries([(0, ONE)])
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return format_series(self)


def format_series(s: PuiseuxSeries, var: str = "y") -> str:
    from .algebra import format_scalar

    parts = []
    for e, c in s.terms:
        cs = format_scalar(c) if hasattr(c, "level") else repr(c)
        sign = "-" if cs.startswith("-") else "+"
        cs = cs[1:] if sign == "-" else cs
        if e == 0:
            parts.append((sign, cs))
            continue
        mono = var if e == 1 else (f"{var}^{e}" if e.denominator == 1 else f"{var}^({e})")
        parts.append((sign, mono if cs == "1" else f"{cs}*{mono}"))
    if not parts:
        body = "0"
    else:
        body = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        body += "".join(f" {sg} {t}" for sg, t in parts[1:])
    if s.omega != INF:
        w = s.omega
        body += f" + O({var}^{w if w.denominator == 1 else '(' + str(w) + ')'})"
    return body


def contact(a: PuiseuxSeries, b: PuiseuxSeries):
    """Order of ``a - b``; ``inf`` for equal exact series."""
    return (a - b).ord()


def conjugates(series: PuiseuxSeries, n: int | None = None, eps=None) -> list[PuiseuxSeries]:
    """All ``n`` images of ``series`` under ``y^(1/n) -> eps^j y^(1/n)``."""
    n = n or series.ramification()
    if eps is None:
        tower = Tower.of(*(c for _, c in series.terms))
        eps = adjoin_root_of_unity(n, tower)[1]
    out = []
    for j in range(n):
        terms = []
        for e, c in series.terms:
            k = int(e * n) * j % n
            terms.append((e, c if k == 0 else c * power(eps, k)))
        out.append(PuiseuxSeries._raw(tuple(terms), series.omega))
    return out


@dataclass
class ArcClass:
    """One Galois orbit of Puiseux roots: representative, ramification, multiplicity."""

    representative: PuiseuxSeries
    ramification: int = 1
    multiplicity_as_root: int = 1

    def conjugates(self, eps=None) -> list[PuiseuxSeries]:
        return conjugates(self.representative, self.ramification, eps)


def branch_contact(a: ArcClass, b: ArcClass, eps=None):
    """Maximal contact between members of two arc classes."""
    best = -INF
    ra = a.representative
    for other in b.conjugates(eps):
        c = contact(ra, other)
        if c == INF:
            raise SameBranch("the two classes coincide")
        best = max(best, c)
    return best
