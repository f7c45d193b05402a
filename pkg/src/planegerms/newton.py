"""Newton polygons, relative polygons along arcs, and Newton-Puiseux root expansion."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (ONE, ZERO, SplittingContext, _szero, div, inverse, is_zero, mul, neg,
                      power, scalar)
from .bivariate import BivarPoly
from .puiseux import INF, PuiseuxSeries, Unresolved

DEFAULT_MAX_ORDER = 400


# ---------------------------------------------------------------- polygons

@dataclass(frozen=True)
class Edge:
    left: tuple
    right: tuple

    @property
    def coslope(self) -> Fraction:
        return Fraction(self.left[1] - self.right[1]) / (self.right[0] - self.left[0])

    @property
    def height(self) -> int:
        return self.right[0] - self.left[0]


def lower_left_hull(points: Sequence[tuple]) -> list[tuple]:
    """Vertices of the compact part of the Newton polygon, left to right."""
    best: dict[int, Fraction] = {}
    for i, j in points:
        j = Fraction(j)
        if i not in best or j < best[i]:
            best[i] = j
    if not best:
        return []
    pts = sorted(best.items())
    jmin = min(j for _, j in pts)
    end = next(k for k, (_, j) in enumerate(pts) if j == jmin)
    hull: list[tuple] = []
    for p in pts[: end + 1]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


class NewtonPolygon:
    """Compact faces of a Newton polygon.

    ``certified_below`` bounds the co-slopes that are known to be exact; data
    that depends on larger co-slopes raises :class:`Unresolved`.
    """

    def __init__(self, points: Sequence[tuple], certified_below=INF):
        self.points = tuple(sorted((int(i), Fraction(j)) for i, j in points))
        self.vertices = tuple(lower_left_hull(self.points))
        self.certified_below = certified_below

    @property
    def edges(self) -> list[Edge]:
        """Edges in increasing co-slope order."""
        v = self.vertices
        return [Edge(v[k - 1], v[k]) for k in range(len(v) - 1, 0, -1)]

    def certified_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.coslope < self.certified_below]

    def _check_top(self):
        es = self.edges
        if es and es[-1].coslope >= self.certified_below:
            raise Unresolved("highest co-slope is beyond the certified range")

    @property
    def highest_coslope(self):
        es = self.edges
        if not es:
            return None
        self._check_top()
        return es[-1].coslope

    @property
    def vertical_intercept(self):
        """Height of the vertex on the vertical axis, or ``inf`` if there is none."""
        self._check_top()
        if self.vertices and self.vertices[0][0] == 0:
            return self.vertices[0][1]
        return INF

    def tropical(self, q) -> Fraction:
        if q >= self.certified_below:
            raise Unresolved(f"co-slope {q} is beyond the certified range {self.certified_below}")
        return min(q * i + j for i, j in self.vertices)

    def __repr__(self):
        vs = ", ".join(f"({i}, {j})" for i, j in self.vertices)
        return f"NewtonPolygon([{vs}], certified_below={self.certified_below})"


def tropical_eval(polygon: NewtonPolygon, q) -> Fraction:
    return polygon.tropical(Fraction(q))


def newton_polygon(f: BivarPoly) -> NewtonPolygon:
    return NewtonPolygon([k for k in f.terms])


def mini_regularize(f: BivarPoly) -> tuple[BivarPoly, int]:
    """Apply ``(x, y) -> (x, y + lam*x)`` with the least ``lam >= 0`` making ``f`` mini-regular."""
    fm = f.initial_form()
    lam = 0
    while True:
        val = sum((c * power(scalar(lam), j) for (i, j), c in fm.terms.items()), ZERO)
        if not is_zero(val):
            break
        lam += 1
    if lam == 0:
        return f, 0
    return f.compose(BivarPoly.x(), BivarPoly.y() + BivarPoly.x() * lam), lam


def is_mini_regular(f: BivarPoly) -> bool:
    m = f.order()
    c = f.terms.get((m, 0))
    return c is not None and not is_zero(c)


# ---------------------------------------------------------------- coefficient states
# F(x1) = sum_k a_k(y) x1^k with a_k stored as {exponent: coeff} and an omega per coefficient.

class _NeedPrecision(Exception):
    pass


class CoeffState:
    __slots__ = ("a", "w")

    def __init__(self, a: list[dict], w: list):
        self.a = a
        self.w = w

    def order(self, k: int):
        """``(order, leading coefficient)``; order ``None`` when no term is known."""
        d = self.a[k]
        for e in sorted(d):
            c = d[e]
            if _szero(c):
                continue
            if is_zero(c):
                continue
            return e, c
        return None, None

    def series(self, k: int) -> PuiseuxSeries:
        return PuiseuxSeries(self.a[k], self.w[k])

    def shifted(self, c, s, cap=INF) -> "CoeffState":
        """Substitute ``x1 -> x1 + c*y^s``; terms at or above ``cap`` are dropped."""
        a = [dict(d) for d in self.a]
        w = list(self.w)
        n = len(a) - 1
        for j in range(n):
            for k in range(n - 1, j - 1, -1):
                src = a[k + 1]
                if src:
                    dst = a[k]
                    lim = min(w[k], cap)
                    for e, v in src.items():
                        e2 = e + s
                        if e2 < lim:
                            p = mul(c, v)
                            if e2 in dst:
                                dst[e2] = dst[e2] + p
                            else:
                                dst[e2] = p
                if w[k + 1] != INF:
                    w[k] = min(w[k], w[k + 1] + s)
        if cap != INF:
            w = [min(x, cap) for x in w]
        for k in range(n + 1):
            lim = w[k]
            a[k] = {e: v for e, v in a[k].items() if e < lim and not _szero(v)}
        return CoeffState(a, w)


def coefficient_state(f: BivarPoly, cap=INF) -> CoeffState:
    cols = f.x_coefficients()
    a = [{Fraction(j): c for j, c in d.items() if j < cap} for d in cols]
    return CoeffState(a, [cap] * len(a))


def expand_along(f: BivarPoly, gamma: PuiseuxSeries, cap=INF, kmax: int | None = None) -> CoeffState:
    """Coefficients of ``f(gamma + x1, y)`` for the known terms of ``gamma``.

    Coefficients ``a_k`` with ``k > kmax`` are not returned.  Orders at or above
    ``cap`` are not computed.
    """
    cols = f.x_coefficients()
    n = len(cols) - 1
    kmax = n if kmax is None else min(kmax, n)
    # exponents scaled to integers by their common denominator
    N = 1
    for e, _ in gamma.terms:
        N = _lcm(N, e.denominator)
    if cap != INF:
        N = _lcm(N, Fraction(cap).denominator)
    icap = INF if cap == INF else int(cap * N)
    g = [(int(e * N), c) for e, c in gamma.terms if e * N < icap]
    res: list[dict] = [dict() for _ in range(kmax + 1)]
    for i in range(n, -1, -1):
        # res <- res * (gamma + x1) + c_i
        new = [dict() for _ in range(kmax + 1)]
        for k in range(kmax + 1):
            src = res[k]
            if not src:
                continue
            if k + 1 <= kmax:
                dst = new[k + 1]
                for e, v in src.items():
                    dst[e] = dst[e] + v if e in dst else v
            dst = new[k]
            for e, v in src.items():
                for eg, cg in g:
                    e2 = e + eg
                    if e2 >= icap:
                        break
                    p = mul(v, cg)
                    dst[e2] = dst[e2] + p if e2 in dst else p
        for j, c in cols[i].items():
            jj = j * N
            if jj < icap:
                d = new[0]
                d[jj] = d[jj] + c if jj in d else c
        res = [{e: v for e, v in d.items() if not _szero(v)} for d in new]
    res = [{Fraction(e, N): v for e, v in d.items()} for d in res]
    return CoeffState(res, [cap] * (kmax + 1))


def polygon_of_state(st: CoeffState, kmax: int | None = None, certified_below=INF) -> NewtonPolygon:
    """Polygon of the known points; unknown coefficients shrink the certified range."""
    kmax = len(st.a) - 1 if kmax is None else min(kmax, len(st.a) - 1)
    pts, unknown = [], []
    for k in range(kmax + 1):
        e, _ = st.order(k)
        if e is not None:
            pts.append((k, e))
        elif st.w[k] != INF:
            unknown.append((k, st.w[k]))
    poly = NewtonPolygon(pts, certified_below)
    bound = certified_below
    for k, wk in unknown:
        bound = min(bound, _unknown_bound(poly, k, wk))
    poly.certified_below = bound
    return poly


def _unknown_bound(poly: NewtonPolygon, k: int, wk) -> Fraction:
    """Smallest co-slope at which a point ``(k, >= wk)`` could touch the polygon."""
    v = poly.vertices
    if not v:
        return Fraction(0)
    # candidate q values: breakpoints of the tropical function and crossings
    qs = sorted({e.coslope for e in poly.edges})
    lo = Fraction(0)
    segments = [lo] + qs
    for idx, q0 in enumerate(segments):
        q1 = segments[idx + 1] if idx + 1 < len(segments) else None
        # on [q0, q1] the minimum is attained at a fixed vertex
        probe = q0 + 1 if q1 is None else (q0 + q1) / 2
        i0, j0 = min(v, key=lambda p: probe * p[0] + p[1])
        # touch when q*k + wk <= q*i0 + j0
        if k == i0:
            if wk <= j0:
                return q0
            continue
        qc = Fraction(j0 - wk) / (k - i0)
        if k < i0:
            # holds for q >= qc
            start = max(q0, qc)
            if q1 is None or start <= q1:
                return start
        else:
            # holds for q <= qc
            if qc >= q0:
                return q0
    return INF


def relative_polygon(f: BivarPoly, gamma: PuiseuxSeries, cap=INF, kmax: int | None = None) -> NewtonPolygon:
    """Newton polygon of ``f(gamma + x1, y)`` certified below ``omega(gamma)``."""
    st = expand_along(f, gamma, cap=cap, kmax=kmax)
    return polygon_of_state(st, certified_below=gamma.omega)


# ---------------------------------------------------------------- Weierstrass preparation

def weierstrass(f: BivarPoly, precision: int) -> tuple[CoeffState, int]:
    """Distinguished polynomial ``W`` of ``f = U*W`` (monic in ``x`` of degree ``m``).

    Coefficients are exact when ``f`` is already monic up to a constant, and
    known modulo ``y^precision`` otherwise.
    """
    n = f.x_degree()
    cols = f.x_coefficients()
    m = next((i for i in range(n + 1) if 0 in cols[i]), None)
    if m is None:
        raise ValueError("polynomial vanishes on x = 0 identically")
    if m == 0:
        return CoeffState([{Fraction(0): ONE}], [INF]), 0
    if n == m and set(cols[m]) == {0}:
        inv = inverse(cols[m][0])
        a = [{Fraction(j): mul(c, inv) for j, c in d.items()} for d in cols]
        return CoeffState(a, [INF] * (m + 1)), m
    B = precision
    slices = [[ZERO] * (n + 1) for _ in range(B)]
    for (i, j), c in f.terms.items():
        if j < B:
            slices[j][i] = c
    g0 = slices[0][m:]
    while len(g0) > 1 and _szero(g0[-1]):
        g0.pop()
    ginv = [inverse(g0[0])]
    for k in range(1, m):
        acc = ZERO
        for l in range(1, min(k, len(g0) - 1) + 1):
            acc = acc + mul(g0[l], ginv[k - l])
        ginv.append(neg(mul(ginv[0], acc)))
    W: list[list] = [None] * B
    U: list[list] = [None] * B
    U[0] = g0
    for t in range(1, B):
        R = list(slices[t])
        for s_ in range(1, t):
            Wa, Ub = W[s_], U[t - s_]
            for p, wv in enumerate(Wa):
                if _szero(wv):
                    continue
                for q, uv in enumerate(Ub):
                    if not _szero(uv):
                        R[p + q] = R[p + q] - mul(wv, uv)
        Wt = [ZERO] * m
        for p in range(m):
            if _szero(R[p]):
                continue
            for q in range(m - p):
                Wt[p + q] = Wt[p + q] + mul(R[p], ginv[q])
        T = list(R)
        for p, wv in enumerate(Wt):
            if _szero(wv):
                continue
            for q, gv in enumerate(g0):
                T[p + q] = T[p + q] - mul(wv, gv)
        W[t] = Wt
        U[t] = T[m:]
    a = [dict() for _ in range(m + 1)]
    a[m][Fraction(0)] = ONE
    for t in range(1, B):
        for k, v in enumerate(W[t]):
            if not _szero(v):
                a[k][Fraction(t)] = v
    w = [Fraction(B)] * m + [INF]
    return CoeffState(a, w), m


# ---------------------------------------------------------------- Newton-Puiseux

class RootExpansion:
    """One Puiseux root of a squarefree factor, refined on demand.

    ``prefix`` holds every term with exponent below ``omega``; ``sep`` is the
    exponent at which the root became isolated from the other roots.
    """

    def __init__(self, finder: "RootFinder", state: CoeffState | None, prefix: list, sep,
                 exact: bool = False):
        self.finder = finder
        self.state = state
        self.prefix = prefix
        self.sep = sep
        self.exact = exact
        self.omega = INF
        self.stalled = False
        self.multiplicity = finder.multiplicity
        self.precision = finder.precision
        self.ramification = 1
        for e, _ in prefix:
            self.ramification = _lcm(self.ramification, e.denominator)
        if not exact:
            self._update()

    def _update(self):
        st = self.state
        e0, _ = st.order(0)
        e1, _ = st.order(1)
        if e1 is None:
            raise _NeedPrecision()
        if e0 is None:
            if st.w[0] == INF:
                self.exact = True
                self.omega = INF
                self.state = None
                return
            self.omega = st.w[0] - e1
            self.stalled = True
        else:
            self.omega = e0 - e1
            self.stalled = False

    def series(self) -> PuiseuxSeries:
        return PuiseuxSeries._raw(tuple(self.prefix), self.omega)

    def step(self):
        if self.exact:
            return
        if self.stalled:
            if self.finder.is_exact_root(self.prefix):
                self.exact = True
                self.omega = INF
                self.state = None
                return
            if self.omega > self.finder.max_order:
                raise Unresolved(f"expansion would exceed max order {self.finder.max_order}")
            self._reload()
            return
        st = self.state
        e0, c0 = st.order(0)
        e1, c1 = st.order(1)
        s = e0 - e1
        if s > self.finder.max_order:
            raise Unresolved(f"expansion would exceed max order {self.finder.max_order}")
        c = neg(div(c0, c1))
        self.prefix.append((s, c))
        self.state = st.shifted(c, s, cap=self._cap(e1, s))
        try:
            self._update()
        except _NeedPrecision:
            self._reload()

    def _reload(self):
        while True:
            # another root may already have raised the shared precision
            more = self.precision >= self.finder.precision
            self.state = self.finder.state_along(self.prefix, more=more)
            self.precision = self.finder.precision
            try:
                self._update()
                return
            except _NeedPrecision:
                continue

    def _cap(self, e1, s):
        return e1 + self.finder.max_order + 2

    def refine_to(self, e):
        """Expand until every term with exponent ``<= e`` is known."""
        while not self.exact and self.omega <= e:
            self.step()

    def __repr__(self):
        return f"RootExpansion({self.series()!r})"


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a // gcd(a, b) * b


class RootFinder:
    """Roots with positive order of one squarefree factor ``poly``."""

    def __init__(self, ctx: SplittingContext, poly: BivarPoly, multiplicity: int = 1,
                 max_order=DEFAULT_MAX_ORDER, precision: int | None = None):
        self.ctx = ctx
        self.poly = poly
        self.multiplicity = multiplicity
        self.max_order = max_order
        self.precision = precision or max(16, 2 * poly.y_degree() + 8)
        self._w: CoeffState | None = None
        self.m = 0

    def _weierstrass(self) -> CoeffState:
        if self._w is None:
            self._w, self.m = weierstrass(self.poly, self.precision)
        return self._w

    def is_exact_root(self, prefix: list) -> bool:
        st = expand_along(self.poly, PuiseuxSeries._raw(tuple(prefix), INF), kmax=0)
        return not st.a[0]

    def state_along(self, prefix: list, more: bool = False) -> CoeffState:
        if more:
            if all(w == INF for w in self._weierstrass().w):
                raise Unresolved("exact state cannot be improved")
            self.precision *= 2
            self._w = None
        st = self._weierstrass()
        for e, c in prefix:
            st = st.shifted(c, e)
        return st

    def roots(self) -> list[RootExpansion]:
        while True:
            try:
                st = self._weierstrass()
                if self.m == 0:
                    return []
                out: list[RootExpansion] = []
                self._split(st, self.m, Fraction(0), [], out)
                return out
            except _NeedPrecision:
                self.precision *= 2
                self._w = None

    def _split(self, st: CoeffState, r: int, s_prev, prefix: list, out: list):
        if r == 1:
            out.append(RootExpansion(self, st, list(prefix), prefix[-1][0] if prefix else Fraction(0)))
            return
        e0, _ = st.order(0)
        if e0 is None:
            if st.w[0] == INF or self.is_exact_root(prefix):
                out.append(RootExpansion(self, None, list(prefix), prefix[-1][0] if prefix else s_prev,
                                         exact=True))
                rest = CoeffState(st.a[1:], st.w[1:])
                self._split_edges(rest, r - 1, s_prev, prefix, out)
                return
            raise _NeedPrecision()
        self._split_edges(st, r, s_prev, prefix, out)

    def _split_edges(self, st: CoeffState, r: int, s_prev, prefix: list, out: list):
        if r == 0:
            return
        poly = polygon_of_state(st, kmax=r)
        edges = [e for e in poly.edges if e.coslope > s_prev]
        if not edges or edges[0].right[0] != r:
            raise _NeedPrecision()
        if edges[-1].coslope >= poly.certified_below:
            raise _NeedPrecision()
        for edge in edges:
            s = edge.coslope
            if s > self.max_order:
                raise Unresolved(f"expansion would exceed max order {self.max_order}")
            i0, j0 = edge.left
            face = []
            for i in range(i0, edge.right[0] + 1):
                j = j0 - s * (i - i0)
                face.append(st.a[i].get(j, ZERO) if j < st.w[i] else ZERO)
            for c, mult in self.ctx.roots(face):
                child = st.shifted(c, s)
                self._split(child, mult, s, prefix + [(s, c)], out)


def separate(roots: Sequence[RootExpansion], others: Sequence[RootExpansion] = ()) -> None:
    """Refine until every root's series is distinct from the others'."""
    pool = list(roots) + [o for o in others if o not in roots]
    for a in roots:
        for b in pool:
            if a is not b:
                root_contact(a, b)


def root_contact(a: RootExpansion, b: RootExpansion):
    """Contact order of two root expansions, refining as needed."""
    while True:
        sa, sb = a.series(), b.series()
        try:
            return (sa - sb).ord()
        except Unresolved:
            if a.exact and b.exact:
                raise
            if not a.exact and (b.exact or a.omega <= b.omega):
                a.step()
            else:
                b.step()


def group_conjugates(ctx: SplittingContext, roots: Sequence[RootExpansion]) -> list[list[RootExpansion]]:
    """Partition roots of one factor into Galois orbits ``y^(1/N) -> eps*y^(1/N)``."""
    remaining = list(roots)
    groups = []
    while remaining:
        lead = remaining.pop(0)
        n = lead.ramification
        if n == 1:
            groups.append([lead])
            continue
        eps = ctx.root_of_unity(n)
        members = [lead]
        upto = max(lead.sep, max((e for e, _ in lead.prefix if e <= lead.sep), default=0))
        base = [(e, c) for e, c in lead.prefix if e <= upto]
        for j in range(1, n):
            image = [(e, c if int(e * n) * j % n == 0 else mul(c, power(eps, int(e * n) * j % n)))
                     for e, c in base]
            match = None
            for cand in remaining:
                cp = [(e, c) for e, c in cand.prefix if e <= upto]
                if len(cp) == len(image) and all(x[0] == y[0] and is_zero(x[1] - y[1])
                                                  for x, y in zip(cp, image)):
                    match = cand
                    break
            if match is None:
                raise RuntimeError("conjugate root not found")
            remaining.remove(match)
            members.append(match)
        groups.append(members)
    return groups


def evaluate_at_series(f: BivarPoly, gamma: PuiseuxSeries, cap=INF) -> PuiseuxSeries:
    """``f(gamma(y), y)`` by direct Horner evaluation."""
    cols = f.x_coefficients()
    acc = PuiseuxSeries([], cap)
    g = gamma.known_below(cap) if cap != INF else gamma
    for i in range(len(cols) - 1, -1, -1):
        acc = acc * g + PuiseuxSeries({Fraction(j): c for j, c in cols[i].items()}, cap)
    return acc
