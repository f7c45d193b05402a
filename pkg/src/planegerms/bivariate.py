"""Bivariate polynomials in ``x, y`` over Q(i) (or a tower)."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .algebra import ONE, ZERO, GaussianRational, _szero, is_zero, scalar


class BivarPoly:
    """Sparse polynomial ``sum c_ij x^i y^j`` stored as ``{(i, j): c}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | Iterable = ()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict = {}
        for (i, j), c in items:
            c = scalar(c)
            k = (int(i), int(j))
            acc[k] = acc[k] + c if k in acc else c
        self.terms = {k: c for k, c in acc.items() if not _szero(c)}

    @classmethod
    def x(cls) -> "BivarPoly":
        return cls({(1, 0): ONE})

    @classmethod
    def y(cls) -> "BivarPoly":
        return cls({(0, 1): ONE})

    @classmethod
    def const(cls, c) -> "BivarPoly":
        return cls({(0, 0): scalar(c)})

    def _lift(self, o) -> "BivarPoly":
        return o if isinstance(o, BivarPoly) else BivarPoly.const(o)

    def __add__(self, o):
        o = self._lift(o)
        return BivarPoly(list(self.terms.items()) + list(o.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        acc: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in o.terms.items():
                k = (i1 + i2, j1 + j2)
                p = c1 * c2
                acc[k] = acc[k] + p if k in acc else p
        return BivarPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = BivarPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, o):
        if not isinstance(o, BivarPoly):
            o = self._lift(o)
        d = self - o
        return all(is_zero(c) for c in d.terms.values())

    def __hash__(self):
        return hash(tuple(sorted((k, repr(c)) for k, c in self.terms.items())))

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.terms.values())

    def partial_x(self) -> "BivarPoly":
        return BivarPoly({(i - 1, j): c * scalar(i) for (i, j), c in self.terms.items() if i})

    def partial_y(self) -> "BivarPoly":
        return BivarPoly({(i, j - 1): c * scalar(j) for (i, j), c in self.terms.items() if j})

    def order(self) -> int:
        """Multiplicity at the origin (lowest total degree)."""
        if not self.terms:
            raise ValueError("zero polynomial")
        return min(i + j for i, j in self.terms)

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def x_degree(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def y_degree(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def initial_form(self) -> "BivarPoly":
        m = self.order()
        return BivarPoly({k: c for k, c in self.terms.items() if sum(k) == m})

    def evaluate(self, x, y):
        acc = None
        for (i, j), c in self.terms.items():
            t = c * (x ** i) * (y ** j)
            acc = t if acc is None else acc + t
        return ZERO if acc is None else acc

    def compose(self, X: "BivarPoly", Y: "BivarPoly") -> "BivarPoly":
        """``f(X(x, y), Y(x, y))``."""
        xs: dict[int, BivarPoly] = {0: BivarPoly.const(1)}
        ys: dict[int, BivarPoly] = {0: BivarPoly.const(1)}
        for i in range(1, self.x_degree() + 1):
            xs[i] = xs[i - 1] * X
        for j in range(1, self.y_degree() + 1):
            ys[j] = ys[j - 1] * Y
        acc: dict = {}
        for (i, j), c in self.terms.items():
            for k, v in (xs[i] * ys[j]).terms.items():
                p = v * c
                acc[k] = acc[k] + p if k in acc else p
        return BivarPoly(acc)

    def x_coefficients(self) -> list[dict[int, object]]:
        """``[c_0(y), c_1(y), ...]`` with ``f = sum c_i(y) x^i``; each a ``{j: coeff}`` dict."""
        out: list[dict] = [dict() for _ in range(self.x_degree() + 1)]
        for (i, j), c in self.terms.items():
            out[i][j] = c
        return out

    def is_gaussian(self) -> bool:
        return all(isinstance(c, GaussianRational) for c in self.terms.values())

    def sorted_terms(self) -> list[tuple[tuple[int, int], object]]:
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def __repr__(self):
        from .parser import format_poly

        return format_poly(self)


def to_sympy(f: BivarPoly):
    """Convert to a sympy ``Poly`` over ``QQ_I`` (or ``QQ`` when real)."""
    import sympy

    x, y = sympy.symbols("x y")
    real = all(not c.im for c in f.terms.values())
    rep = {}
    for (i, j), c in f.terms.items():
        re = sympy.Rational(int(c.re.numerator), int(c.re.denominator))
        im = sympy.Rational(int(c.im.numerator), int(c.im.denominator))
        rep[(i, j)] = re + sympy.I * im
    domain = "QQ" if real else "QQ_I"
    if not rep:
        return sympy.Poly(0, x, y, domain=domain)
    return sympy.Poly.from_dict(rep, x, y, domain=domain)


def from_sympy(p) -> BivarPoly:
    import sympy

    out = {}
    for (i, j), c in p.as_dict().items():
        c = sympy.nsimplify(c) if not c.is_number else c
        re, im = sympy.re(c), sympy.im(c)
        out[(i, j)] = GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return BivarPoly(out)
