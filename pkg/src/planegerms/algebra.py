"""Exact arithmetic over Q(i) and towers of algebraic extensions.

Extensions are adjoined with possibly reducible defining polynomials.  Zero
tests are decided by a gcd with the defining polynomial; when that gcd is a
proper factor the test raises :class:`TowerSplit` and the caller picks a
branch (dynamic evaluation).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from gmpy2 import mpq


class TowerSplit(Exception):
    """A defining polynomial turned out to be reducible."""

    def __init__(self, level: "Level", factors: list[tuple]):
        super().__init__(f"defining polynomial of {level.name} splits into {len(factors)} factors")
        self.level = level
        self.factors = factors
        self._branches: list[Level] | None = None
        self._maps: dict[int, dict] = {}

    def branches(self) -> list["Level"]:
        if self._branches is None:
            self._branches = [Level(self.level.name, self.level.parent, f) for f in self.factors]
        return self._branches

    def specialize(self, element, branch: int):
        """Image of ``element`` in the chosen branch; levels above are rebuilt once per branch."""
        mapping = self._maps.setdefault(branch, {self.level: self.branches()[branch]})
        return coerce(element, mapping)


# ---------------------------------------------------------------- Q(i)

class GaussianRational:
    """``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")
    level = 0
    gen = None

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def conjugate(self) -> "GaussianRational":
        return _gr(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return _gr(self.re / n, -self.im / n)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def is_rational(self) -> bool:
        return not self.im

    def __add__(self, o):
        if type(o) is GaussianRational:
            return _gr(self.re + o.re, self.im + o.im)
        o = _sc(o)
        return NotImplemented if o is None else add(self, o)

    __radd__ = __add__

    def __sub__(self, o):
        if type(o) is GaussianRational:
            return _gr(self.re - o.re, self.im - o.im)
        o = _sc(o)
        return NotImplemented if o is None else sub(self, o)

    def __rsub__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else sub(o, self)

    def __mul__(self, o):
        if type(o) is GaussianRational:
            if not self.im and not o.im:
                return _gr(self.re * o.re, self.im)
            return _gr(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        o = _sc(o)
        return NotImplemented if o is None else mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else div(self, o)

    def __rtruediv__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else div(o, self)

    def __neg__(self):
        return _gr(-self.re, -self.im)

    def __pow__(self, n: int):
        return power(self, n)

    def __eq__(self, o):
        if type(o) is GaussianRational:
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Fraction)) or type(o) is type(mpq()):
            return self.re == o and not self.im
        return False

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return format_scalar(self)


def _gr(re, im) -> GaussianRational:
    g = object.__new__(GaussianRational)
    g.re = re
    g.im = im
    return g


ZERO = _gr(mpq(0), mpq(0))
ONE = _gr(mpq(1), mpq(0))
I = _gr(mpq(0), mpq(1))


def scalar(v):
    """Coerce ints, Fractions, complex-free numbers into the scalar domain."""
    if isinstance(v, (GaussianRational, TowerElement)):
        return v
    if isinstance(v, (int, Fraction)) or type(v) is type(mpq()):
        return _gr(mpq(v), mpq(0))
    if isinstance(v, complex):
        return _gr(mpq(Fraction(v.real)), mpq(Fraction(v.imag)))
    raise TypeError(f"cannot use {type(v).__name__} as a scalar")


def _sc(v):
    try:
        return scalar(v)
    except TypeError:
        return None


def _szero(a) -> bool:
    # syntactic zero; canonical tower elements are never syntactically zero
    return type(a) is GaussianRational and not a.re and not a.im


# ---------------------------------------------------------------- towers

class Level:
    """One step ``K_k = K_{k-1}[t]/(p)`` of a tower, ``p`` monic."""

    __slots__ = ("name", "parent", "poly", "index", "_approx", "__weakref__")

    def __init__(self, name: str, parent: "Level | None", poly: Sequence):
        self.name = name
        self.parent = parent
        self.index = 1 if parent is None else parent.index + 1
        self.poly = tuple(poly)
        self._approx = None
        if len(self.poly) < 2 or self.poly[-1] != ONE:
            raise ValueError("defining polynomial must be monic of degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def chain(self) -> list["Level"]:
        out, lv = [], self
        while lv is not None:
            out.append(lv)
            lv = lv.parent
        return out[::-1]

    def __repr__(self):
        return f"Level({self.name}: {format_upoly(self.poly, 't')})"


class Tower:
    """A chain of levels, identified by its top level."""

    __slots__ = ("top",)

    def __init__(self, top: Level | None = None):
        self.top = top

    @property
    def levels(self) -> list[Level]:
        return [] if self.top is None else self.top.chain()

    @property
    def depth(self) -> int:
        return 0 if self.top is None else self.top.index

    def extend(self, poly: Sequence, name: str | None = None):
        """Adjoin a root of ``poly`` (used as given, only made monic)."""
        p = _trim([scalar(c) for c in poly])
        if len(p) < 2:
            raise ValueError("need a polynomial of degree >= 1")
        p = poly_monic(p)
        if len(p) == 2:
            return self, neg(p[0])
        lv = Level(name or f"t{self.depth + 1}", self.top, p)
        return Tower(lv), TowerElement(lv, (ZERO, ONE))

    @staticmethod
    def of(*elements) -> "Tower":
        top = None
        for e in elements:
            g = getattr(e, "gen", None)
            if g is not None and (top is None or g.index > top.index):
                top = g
        return Tower(top)

    def __repr__(self):
        return "Tower(" + ", ".join(lv.name for lv in self.levels) + ")"


class TowerElement:
    """Element of ``K_k``: polynomial in the generator of ``gen`` with lower coefficients.

    Always reduced and demoted: the coefficient tuple has length between 2 and
    ``gen.degree`` and a nonzero last entry.
    """

    __slots__ = ("gen", "coeffs", "_h")

    def __init__(self, gen: Level, coeffs: tuple):
        self.gen = gen
        self.coeffs = coeffs
        self._h = None

    @property
    def level(self) -> int:
        return self.gen.index

    def is_zero(self) -> bool:
        return is_zero(self)

    def inverse(self):
        return inverse(self)

    def __add__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else add(self, o)

    __radd__ = __add__

    def __sub__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else sub(self, o)

    def __rsub__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else sub(o, self)

    def __mul__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else div(self, o)

    def __rtruediv__(self, o):
        o = _sc(o)
        return NotImplemented if o is None else div(o, self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n: int):
        return power(self, n)

    def __eq__(self, o):
        return type(o) is TowerElement and o.gen is self.gen and o.coeffs == self.coeffs

    def __hash__(self):
        if self._h is None:
            self._h = hash((id(self.gen), self.coeffs))
        return self._h

    def __repr__(self):
        return format_scalar(self)


def _make(gen: Level, coeffs: list):
    n = len(coeffs)
    while n and _szero(coeffs[n - 1]):
        n -= 1
    if n == 0:
        return ZERO
    if n == 1:
        return coeffs[0]
    return TowerElement(gen, tuple(coeffs[:n]))


def _check_gen(a: Level, b: Level) -> None:
    if a is not b:
        raise ValueError(f"elements live in incompatible towers ({a.name} vs {b.name})")


def add(a, b):
    la, lb = a.level, b.level
    if la == 0 and lb == 0:
        return _gr(a.re + b.re, a.im + b.im)
    if la < lb:
        a, b = b, a
        la, lb = lb, la
    ca = a.coeffs
    if la == lb:
        _check_gen(a.gen, b.gen)
        cb = b.coeffs
        if len(ca) < len(cb):
            ca, cb = cb, ca
        out = list(ca)
        for i, c in enumerate(cb):
            out[i] = add(out[i], c)
        return _make(a.gen, out)
    out = list(ca)
    out[0] = add(out[0], b)
    return _make(a.gen, out)


def neg(a):
    if a.level == 0:
        return _gr(-a.re, -a.im)
    return TowerElement(a.gen, tuple(neg(c) for c in a.coeffs))


def sub(a, b):
    if a.level == 0 and b.level == 0:
        return _gr(a.re - b.re, a.im - b.im)
    return add(a, neg(b))


def mul(a, b):
    la, lb = a.level, b.level
    if la == 0 and lb == 0:
        if not a.im and not b.im:
            return _gr(a.re * b.re, a.im)
        return _gr(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)
    if la < lb:
        a, b = b, a
        la, lb = lb, la
    if la != lb:
        if _szero(b):
            return ZERO
        return _make(a.gen, [mul(c, b) for c in a.coeffs])
    _check_gen(a.gen, b.gen)
    ca, cb = a.coeffs, b.coeffs
    out = [ZERO] * (len(ca) + len(cb) - 1)
    for i, x in enumerate(ca):
        if _szero(x):
            continue
        for j, y in enumerate(cb):
            if not _szero(y):
                out[i + j] = add(out[i + j], mul(x, y))
    return _reduce(a.gen, out)


def _reduce(gen: Level, out: list):
    p = gen.poly
    d = len(p) - 1
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k]
        if _szero(c):
            continue
        for j in range(d):
            if not _szero(p[j]):
                out[k - d + j] = sub(out[k - d + j], mul(c, p[j]))
        out[k] = ZERO
    return _make(gen, out[:d])


_INVERSES: dict = {}


def inverse(a):
    if a.level == 0:
        return a.inverse()
    hit = _INVERSES.get(a)
    if hit is not None:
        return hit
    gen = a.gen
    p = list(gen.poly)
    g, s = _half_xgcd(list(a.coeffs), p)
    if len(g) > 1:
        other = poly_divmod(p, g)[0]
        raise TowerSplit(gen, [tuple(g), tuple(poly_monic(other))])
    inv_g0 = inverse(g[0])
    res = _reduce(gen, [mul(c, inv_g0) for c in s]) if s else ZERO
    if len(_INVERSES) > 200000:
        _INVERSES.clear()
    _INVERSES[a] = res
    return res


def div(a, b):
    return mul(a, inverse(b))


def is_zero(a) -> bool:
    """Exact zero test; may raise :class:`TowerSplit` on a zero divisor."""
    t = type(a)
    if t is GaussianRational:
        return not a.re and not a.im
    if t is TowerElement:
        inverse(a)
        return False
    return a.is_zero()


def power(a, n: int):
    if n < 0:
        return power(inverse(a), -n)
    result = ONE
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def coerce(element, mapping: dict):
    """Rewrite ``element`` after replacing levels according to ``mapping``."""
    if element.level == 0:
        return element
    gen = _remap_level(element.gen, mapping)
    cs = [coerce(c, mapping) for c in element.coeffs]
    if gen is element.gen and all(x is y for x, y in zip(cs, element.coeffs)):
        return element
    return _reduce(gen, cs + [ZERO])


def _remap_level(lv: Level, mapping: dict) -> Level:
    hit = mapping.get(lv)
    if hit is not None:
        return hit
    parent = None if lv.parent is None else _remap_level(lv.parent, mapping)
    if parent is lv.parent:
        return lv
    new = Level(lv.name, parent, [coerce(c, mapping) for c in lv.poly])
    mapping[lv] = new
    return new


# ---------------------------------------------------------------- univariate polynomials
# Represented as lists or tuples of scalars, lowest degree first.

def _trim(p: list) -> list:
    p = list(p)
    while p and is_zero(p[-1]):
        p.pop()
    return p


def poly_monic(p: Sequence) -> list:
    p = _trim(p)
    if not p:
        return p
    lc = p[-1]
    if lc == ONE:
        return list(p[:-1]) + [ONE]
    inv = inverse(lc)
    return [mul(c, inv) for c in p[:-1]] + [ONE]


def poly_add(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = add(out[i], c)
    return out


def poly_sub(a: Sequence, b: Sequence) -> list:
    return poly_add(a, [neg(c) for c in b])


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _szero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = add(out[i + j], mul(x, y))
    return out


def poly_scale(a: Sequence, c) -> list:
    return [mul(x, c) for x in a]


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = _trim(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    inv = ONE if b[-1] == ONE else inverse(b[-1])
    r = list(a)
    q = [ZERO] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if _szero(c):
            continue
        c = mul(c, inv)
        q[k - db] = c
        for j in range(db + 1):
            r[k - db + j] = sub(r[k - db + j], mul(c, b[j]))
    return q, _trim(r[:db])


def poly_eval(p: Sequence, x):
    acc = ZERO
    for c in reversed(p):
        acc = add(mul(acc, x), c)
    return acc


def poly_derivative(p: Sequence) -> list:
    return [mul(c, scalar(k)) for k, c in enumerate(p)][1:]


def poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a)


def _half_xgcd(a: list, p: list) -> tuple[list, list]:
    """Return ``(g, s)`` with ``s*a = g (mod p)`` and ``g`` monic gcd."""
    r0, r1 = _trim(p), _trim(a)
    s0, s1 = [], [ONE]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    inv = inverse(r0[-1])
    return [mul(c, inv) for c in r0], [mul(c, inv) for c in s0]


def squarefree_part(p: Sequence) -> list:
    p = _trim(p)
    if len(p) <= 2:
        return poly_monic(p)
    g = poly_gcd(p, poly_derivative(p))
    return poly_monic(poly_divmod(p, g)[0])


def squarefree_decomposition(p: Sequence) -> list[tuple[list, int]]:
    """Yun's algorithm: monic squarefree ``(factor, multiplicity)`` pairs."""
    p = poly_monic(p)
    if len(p) <= 1:
        return []
    out = []
    dp = poly_derivative(p)
    a = poly_gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = poly_sub(c, poly_derivative(b))
    k = 1
    while len(_trim(b)) > 1:
        a = poly_gcd(b, d)
        if len(a) > 1:
            out.append((a, k))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = poly_sub(c, poly_derivative(b))
        k += 1
    return out


class ParametricPolynomial:
    """Polynomial in a formal parameter ``u`` with tower coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [scalar(c) for c in coeffs]
        while cs and _szero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def u() -> "ParametricPolynomial":
        return ParametricPolynomial([ZERO, ONE])

    def _lift(self, o) -> "ParametricPolynomial":
        return o if isinstance(o, ParametricPolynomial) else ParametricPolynomial([o])

    def __add__(self, o):
        return ParametricPolynomial(poly_add(self.coeffs, self._lift(o).coeffs))

    __radd__ = __add__

    def __sub__(self, o):
        return ParametricPolynomial(poly_sub(self.coeffs, self._lift(o).coeffs))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        return ParametricPolynomial(poly_mul(self.coeffs, self._lift(o).coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return ParametricPolynomial([neg(c) for c in self.coeffs])

    def is_zero(self) -> bool:
        return not _trim(self.coeffs)

    def degree(self) -> int:
        return len(_trim(self.coeffs)) - 1

    def evaluate(self, u):
        return poly_eval(self.coeffs, scalar(u))

    def __eq__(self, o):
        o = self._lift(o)
        return (self - o).is_zero()

    __hash__ = None

    def __repr__(self):
        return format_upoly(self.coeffs, "u")


# ---------------------------------------------------------------- formatting and numerics

def _fmt_q(q) -> str:
    q = mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(a) -> str:
    if a.level == 0:
        if not a.im:
            return _fmt_q(a.re)
        if not a.re:
            return "i" if a.im == 1 else ("-i" if a.im == -1 else f"{_fmt_q(a.im)}*i")
        sign = "+" if a.im > 0 else "-"
        im = abs(a.im)
        return f"({_fmt_q(a.re)}{sign}{'' if im == 1 else _fmt_q(im) + '*'}i)"
    parts = []
    for k, c in enumerate(a.coeffs):
        if _szero(c):
            continue
        mono = "" if k == 0 else (a.gen.name if k == 1 else f"{a.gen.name}^{k}")
        if not mono:
            parts.append(format_scalar(c))
        elif c == ONE:
            parts.append(mono)
        else:
            parts.append(f"{format_scalar(c)}*{mono}")
    return "(" + " + ".join(parts) + ")"


def format_upoly(p: Sequence, var: str) -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if _szero(c):
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            terms.append(format_scalar(c))
        elif c == ONE:
            terms.append(mono)
        else:
            terms.append(f"{format_scalar(c)}*{mono}")
    return " + ".join(terms) if terms else "0"


def approx(a) -> complex:
    """Decimal value under a fixed numeric embedding of the tower."""
    if a.level == 0:
        return complex(float(a.re), float(a.im))
    theta = _level_approx(a.gen)
    acc = 0j
    for c in reversed(a.coeffs):
        acc = acc * theta + approx(c)
    return acc


def _level_approx(lv: Level) -> complex:
    if lv._approx is None:
        cs = [approx(c) for c in reversed(lv.poly)]
        rts = np.roots(np.array(cs, dtype=complex))
        rts = sorted(rts, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        lv._approx = complex(rts[0])
    return lv._approx


def base_roots(p: Sequence) -> list[GaussianRational]:
    """Roots in Q(i) of a polynomial with Q(i) coefficients."""
    p = _trim(p)
    if len(p) < 2 or any(c.level for c in p):
        return []
    if len(p) == 2:
        return [neg(div(p[0], p[1]))]
    den = 1
    for c in p:
        den = int(np.lcm(den, int(c.re.denominator)))
        den = int(np.lcm(den, int(c.im.denominator)))
    lead = p[-1] * scalar(den)
    bound = min(max(int(lead.norm()), 1) * 4, 10**9)
    try:
        numeric = np.roots(np.array([approx(c) for c in reversed(p)], dtype=complex))
    except (OverflowError, ValueError, np.linalg.LinAlgError):
        return []
    found: list[GaussianRational] = []
    for z in numeric:
        if not np.isfinite(z):
            continue
        cand = _gr(mpq(Fraction(float(z.real)).limit_denominator(bound)),
                   mpq(Fraction(float(z.imag)).limit_denominator(bound)))
        if cand in found:
            continue
        if is_zero(poly_eval(p, cand)):
            found.append(cand)
    return sorted(found, key=lambda g: (g.re, g.im))


# ---------------------------------------------------------------- adjoining roots

def adjoin_root(p: Sequence, tower: Tower | None = None):
    """Extend by the squarefree part of ``p``; return ``(tower, root)``."""
    p = [scalar(c) for c in p]
    if tower is None:
        tower = Tower.of(*p)
    sq = squarefree_part(p)
    if len(sq) < 2:
        raise ValueError("constant polynomial has no root")
    if len(sq) == 2:
        return tower, neg(sq[0])
    rts = base_roots(sq)
    if rts:
        return tower, rts[0]
    return tower.extend(sq)


def cyclotomic(n: int) -> list[int]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_div(num, cyclotomic(d))
    return num


def _int_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(a) - 1, len(b) - 2, -1):
        c = a[k] // b[-1]
        q[k - len(b) + 1] = c
        for j, bj in enumerate(b):
            a[k - len(b) + 1 + j] -= c * bj
    return q


def adjoin_root_of_unity(n: int, tower: Tower | None = None):
    """Return ``(tower, eps)`` with ``eps`` a primitive n-th root of unity."""
    tower = tower or Tower()
    if n == 1:
        return tower, ONE
    if n == 2:
        return tower, scalar(-1)
    if n == 4:
        return tower, I
    return adjoin_root(cyclotomic(n), tower)


# ---------------------------------------------------------------- splitting-field engine

class SplittingContext:
    """Adjoins roots on demand, replaying recorded factorizations of split levels."""

    def __init__(self, hints: dict | None = None):
        self.tower = Tower()
        self.hints = dict(hints or {})
        self.events = 0
        self._by_name: dict[str, Level] = {}
        self._event_of: dict[int, int] = {}
        self._unity: dict[int, object] = {}

    def roots(self, p: Sequence) -> list[tuple[object, int]]:
        """Distinct roots of ``p`` with multiplicities."""
        out = []
        for fac, k in squarefree_decomposition([scalar(c) for c in p]):
            out.extend((r, k) for r in self.distinct_roots(fac))
        return out

    def distinct_roots(self, g: Sequence) -> list:
        g = poly_monic([scalar(c) for c in g])
        found = []
        if len(g) > 2 and not any(c.level for c in g):
            for r in base_roots(g):
                found.append(r)
                g = poly_divmod(g, [neg(r), ONE])[0]
        while len(g) > 2:
            n = self.events
            self.events += 1
            hint = self.hints.get(n)
            if hint is not None:
                factors = [poly_monic([self._from_portable(c) for c in f]) for f in hint]
                prod = [ONE]
                for f in factors:
                    prod = poly_mul(prod, f)
                if not _trim(poly_sub(prod, g)):
                    for f in factors:
                        found.extend(self.distinct_roots(f))
                    return found
            self.tower, theta = self.tower.extend(g, name=f"a{n}")
            self._by_name[f"a{n}"] = self.tower.top
            self._event_of[id(self.tower.top)] = n
            found.append(theta)
            g = poly_divmod(g, [neg(theta), ONE])[0]
        if len(g) == 2:
            found.append(neg(g[0]))
        return found

    def root_of_unity(self, n: int):
        if n not in self._unity:
            if n in (1, 2, 4):
                self._unity[n] = adjoin_root_of_unity(n)[1]
            else:
                self._unity[n] = self.distinct_roots([scalar(c) for c in cyclotomic(n)])[0]
        return self._unity[n]

    def event_of(self, level: Level) -> int | None:
        return self._event_of.get(id(level))

    def _to_portable(self, a):
        if a.level == 0:
            return ("q", str(a.re), str(a.im))
        return ("t", a.gen.name, tuple(self._to_portable(c) for c in a.coeffs))

    def _from_portable(self, obj):
        if obj[0] == "q":
            return _gr(mpq(obj[1]), mpq(obj[2]))
        lv = self._by_name[obj[1]]
        return _reduce(lv, [self._from_portable(c) for c in obj[2]] + [ZERO])

    def portable_factors(self, split: TowerSplit) -> list[tuple]:
        return [tuple(self._to_portable(c) for c in f) for f in split.factors]


def run_with_splitting(fn: Callable[[SplittingContext], object], max_restarts: int = 64):
    """Run ``fn(ctx)``; on a split, record the factorization and rerun from scratch."""
    hints: dict = {}
    for _ in range(max_restarts):
        ctx = SplittingContext(hints)
        try:
            return fn(ctx)
        except TowerSplit as split:
            n = ctx.event_of(split.level)
            if n is None:
                raise
            hints = {k: v for k, v in hints.items() if k < n}
            hints[n] = ctx.portable_factors(split)
    raise RuntimeError("too many tower splits")
