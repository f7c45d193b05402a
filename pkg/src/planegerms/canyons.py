"""Gradient degrees, gradient canyons and their Lipschitz invariants."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

from .analysis import InvariantViolation
from .algebra import (ONE, GaussianRational, Level, ParametricPolynomial, Tower, TowerSplit,
                      coerce, div, is_zero, mul, power, scalar)
from .newton import CoeffState, expand_along
from .puiseux import INF, PuiseuxSeries, Unresolved
from .tree import Bar, fmt_q


class SameCanyon(ValueError):
    """Both arguments denote one canyon."""


@dataclass
class GradientDegree:
    value: object
    target: object
    leading_u: ParametricPolynomial | None = None


def _points(st, cap) -> list[tuple[int, Fraction]]:
    pts = []
    for k in range(1, len(st.a)):
        e, _ = st.order(k)
        if e is not None and e < cap:
            pts.append((k, e))
    return pts


def _leading_u(st, q, level) -> ParametricPolynomial:
    """Coefficient of ``y^level`` in ``sum_k a_k (u y^q)^k`` as a polynomial in ``u``."""
    cs = []
    for k in range(len(st.a)):
        e = level - k * q
        cs.append(st.a[k].get(e, GaussianRational(0)) if e >= 0 else GaussianRational(0))
    return ParametricPolynomial(cs)


def _partials_along(f, gamma: PuiseuxSeries, cap, kmax: int) -> tuple[CoeffState, CoeffState]:
    """Expansions of ``f_x`` and ``f_y`` at ``gamma + x1`` from the one of ``f``.

    With ``F(x1, y) = f(gamma + x1, y) = sum A_k x1^k`` one has
    ``f_x = sum (k+1) A_{k+1} x1^k`` and ``f_y = dF/dy - gamma' f_x``.
    ``gamma`` is used as the exact polynomial of its known terms.
    """
    st = expand_along(f, gamma, cap=cap, kmax=kmax + 1)
    A = st.a + [dict() for _ in range(kmax + 2 - len(st.a))]
    dgamma = [(e - 1, mul(c, scalar(e))) for e, c in gamma.terms if e != 0 and e < cap]
    fx, fy = [], []
    for k in range(kmax + 1):
        fxk = {e: mul(c, scalar(k + 1)) for e, c in A[k + 1].items()}
        fyk = {e - 1: mul(c, scalar(e)) for e, c in A[k].items() if e != 0}
        for e1, c1 in fxk.items():
            for e2, c2 in dgamma:
                e = e1 + e2
                if e < cap - 1:
                    fyk[e] = fyk[e] - mul(c1, c2) if e in fyk else -mul(c1, c2)
        fx.append({e: c for e, c in fxk.items() if not is_zero(c)})
        fy.append({e: c for e, c in fyk.items() if e < cap - 1 and not is_zero(c)})
    return CoeffState(fx, [cap] * (kmax + 1)), CoeffState(fy, [cap - 1] * (kmax + 1))


def gradient_degree(g, pr) -> GradientDegree:
    """Gradient degree of one polar root of the analysed germ ``g``.

    The candidate is read from the points with ``i >= 1`` of the polygons of
    ``f_x`` and ``f_y`` along the arc.  It is accepted once it lies below the
    precision of the arc; the leading coefficient in ``u`` is then checked.
    """
    if pr.on_zero_locus:
        return GradientDegree(INF, INF)
    h = pr.h
    target = h - 1
    nx = g.f.x_degree() - 1
    kmax = min(g.m + 1, nx)
    root = pr.root
    while True:
        gamma = root.series()
        stx, sty = _partials_along(g.f, gamma, h + 1, kmax)
        ex, _ = stx.order(0)
        if ex is not None and ex < target:
            # f_x(gamma) still visible below the target: the arc is too coarse
            _refine(g, root, gamma.omega + (target - ex))
            continue
        e0, _ = sty.order(0)
        if e0 is None or e0 < target:
            _refine(g, root)
            continue
        if e0 != target:
            raise InvariantViolation(f"ord f_y along a polar arc is {e0}, expected {target}")
        pts = _points(stx, target) + _points(sty, target)
        cand = max((Fraction(target - j) / i for i, j in pts), default=Fraction(0))
        if cand <= 0:
            raise InvariantViolation("gradient degree is not positive")
        if kmax < nx and cand * (kmax + 1) < target:
            kmax = min(nx, math.ceil(target / cand))
            continue
        if cand >= gamma.omega:
            _refine(g, root, cand)
            continue
        lead = _leading_u(sty, cand, target)
        if lead.is_zero():
            raise InvariantViolation("leading coefficient in u vanishes identically")
        return GradientDegree(cand, target, lead)


def _refine(g, root, past=None):
    w = root.series().omega
    if w != INF and w > g.max_order:
        raise Unresolved(f"arc precision exceeded {g.max_order}")
    if past is not None:
        root.refine_to(past)
    else:
        root.step()


def compute_gradient_degrees(g) -> None:
    for pr in g.polar_roots:
        res = gradient_degree(g, pr)
        pr.d_gr = res.value
        if res.value != INF and res.value < pr.delta:
            raise InvariantViolation(f"gradient degree {res.value} below delta {pr.delta}")


# ------------------------------------------------------------------ independent oracle

def gradient_degree_formal(f, gamma: PuiseuxSeries, h, denominator: int = 1, qmax=None):
    """Scan ``q`` on the grid ``(1/denominator) Z`` for the gradient degree.

    Substitutes ``x = gamma + u y^q`` with a formal ``u`` directly into ``f_x``
    and ``f_y`` and returns the first ``q`` where the smaller order equals
    ``h - 1``.  ``gamma`` must be known (or exact) past ``qmax``.
    """
    target = Fraction(h) - 1
    fx, fy = f.partial_x(), f.partial_y()
    qmax = Fraction(qmax if qmax is not None else 4 * (target + 1))
    u = ParametricPolynomial.u()
    yser = PuiseuxSeries.monomial(ONE, 1)
    base = gamma.known_below(target + 1)
    step = Fraction(1, denominator)
    q = step
    while q <= qmax:
        xs = base + PuiseuxSeries([(q, u)], base.omega)
        ox = _order_upto(fx.evaluate(xs, yser), target)
        oy = _order_upto(fy.evaluate(xs, yser), target)
        if min(ox, oy) == target:
            return q
        q += step
    raise Unresolved(f"no gradient degree up to {qmax}")


def _order_upto(s: PuiseuxSeries, target):
    for e, c in s.terms:
        if not is_zero(c):
            return e
    if s.omega > target:
        return INF
    raise Unresolved("series not known up to the target order")


# ------------------------------------------------------------------ canyons

@dataclass
class Canyon:
    index: int
    representative: PuiseuxSeries
    degree: object
    members: list[int]
    h: object
    a_h: object
    line: int | None
    bar: Bar | None
    polar_arcs: list[int] = field(default_factory=list)


@dataclass
class CanyonCluster:
    key: tuple
    canyons: list[int]
    omega: dict[int, tuple]
    classes: list[list[int]]


def group_canyons(g) -> list[Canyon]:
    """Group polar roots into canyons: equal degree ``d`` and contact at least ``d``."""
    from .newton import root_contact

    if getattr(g, "_canyons", None) is not None:
        return g._canyons
    roots = [pr for pr in g.polar_roots if not pr.on_zero_locus]
    if any(pr.d_gr is None for pr in roots):
        compute_gradient_degrees(g)
    parent = list(range(len(roots)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    same = {}
    for a in range(len(roots)):
        for b in range(a + 1, len(roots)):
            ra, rb = roots[a], roots[b]
            # degree-1 canyons are cones around single arcs; they never merge
            ok = ra.d_gr == rb.d_gr and ra.d_gr > 1 and root_contact(ra.root, rb.root) >= ra.d_gr
            same[a, b] = ok
            if ok:
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for a in range(len(roots)):
        groups.setdefault(find(a), []).append(a)
    for members in groups.values():
        for a in members:
            for b in members:
                if a < b and not same[a, b]:
                    raise InvariantViolation("canyon relation is not transitive")
    out: list[Canyon] = []
    for members in sorted(groups.values()):
        lead = roots[members[0]]
        d = lead.d_gr
        rep = lead.root.series().truncate(d)
        for a in members[1:]:
            pr = roots[a]
            if pr.h != lead.h or not is_zero(pr.a_h - lead.a_h):
                raise InvariantViolation("canyon members disagree on (h, a_h)")
            if (pr.delta, pr.line, pr.bar) != (lead.delta, lead.line, lead.bar):
                raise InvariantViolation("a canyon straddles two polar clusters")
        out.append(Canyon(len(out), rep, d, [roots[a].index for a in members], lead.h, lead.a_h,
                          lead.line, lead.bar, sorted({roots[a].klass for a in members})))
    for pr in g.polar_roots:
        if pr.on_zero_locus:
            out.append(Canyon(len(out), pr.root.series(), INF, [pr.index], INF, None, None, None,
                              [pr.klass]))
    g._canyons = out
    return out


def canyon_contact(c1: Canyon, c2: Canyon):
    """Contact of two distinct canyons, read from their truncated representatives."""
    if c1 is c2:
        raise SameCanyon("a canyon has no contact with itself")
    dmin = min(c1.degree, c2.degree)
    diff = c1.representative - c2.representative
    e = diff.ord()
    if e >= dmin:
        if c1.degree == c2.degree:
            raise SameCanyon("representatives agree up to the canyon degree")
        return dmin
    return e


def canyon_clusters(g) -> list[CanyonCluster]:
    """Canyons of degree ``d > 1`` keyed by ``(line, d, bar)`` with contact multisets."""
    canyons = [c for c in group_canyons(g) if c.degree != INF and c.degree > 1]
    keyed: dict[tuple, list[int]] = {}
    for c in canyons:
        keyed.setdefault((c.line, c.degree, c.bar.id if c.bar else -1), []).append(c.index)
    by_id = {c.index: c for c in group_canyons(g)}
    out = []
    for key in sorted(keyed, key=lambda k: (-1 if k[0] is None else k[0], k[1], k[2])):
        ids = keyed[key]
        omega = {}
        for a in ids:
            cs = []
            for b in ids:
                if a != b:
                    c = canyon_contact(by_id[a], by_id[b])
                    bar = by_id[a].bar
                    if not c < key[1] or (bar is not None and c < bar.height):
                        raise InvariantViolation(f"canyon contact {c} outside [bar height, d)")
                    cs.append(c)
            omega[a] = tuple(sorted(cs))
        classes: dict[tuple, list[int]] = {}
        for a in ids:
            classes.setdefault(omega[a], []).append(a)
        out.append(CanyonCluster(key, ids, omega, [classes[k] for k in sorted(classes)]))
    return out


def hp_invariants(g) -> list[tuple[object, object]]:
    """``(d, a_h)`` for every canyon of degree ``d > 1``."""
    return [(c.degree, c.a_h) for c in group_canyons(g) if c.degree != INF and c.degree > 1]


# ------------------------------------------------------------------ signatures and comparison

def _fmt_omega(om: tuple) -> str:
    return "[" + ",".join(fmt_q(x) for x in om) + "]"


def canyon_decorations(g) -> dict[Bar, str]:
    """Per-bar text listing the canyons growing there as ``d:h:omega``."""
    per_bar: dict[Bar, list[str]] = {}
    for cl in canyon_clusters(g):
        for a in cl.canyons:
            c = next(x for x in group_canyons(g) if x.index == a)
            if c.bar is None:
                continue
            per_bar.setdefault(c.bar, []).append(
                f"{fmt_q(c.degree)}:{fmt_q(c.h)}:{_fmt_omega(cl.omega[a])}")
    return {b: ";".join(sorted(v)) for b, v in per_bar.items()}


def lipschitz_signature(g) -> str:
    """Discrete part of the canyon data, transportable between germs."""
    from .clusters import topo_signature

    topo = topo_signature(g)
    dec = canyon_decorations(g)
    tree = g.tree.canonical_encoding(dec)
    return f"{topo.serialize()}|canyons={tree}"


def _bezout(nums: list[int]) -> tuple[int, list[int]]:
    g, coeffs = 0, []
    for n in nums:
        if g == 0:
            g, coeffs = n, [1]
            continue
        # extended Euclid on (g, n)
        r0, r1, s0, s1, t0, t1 = g, n, 1, 0, 0, 1
        while r1:
            qq = r0 // r1
            r0, r1 = r1, r0 - qq * r1
            s0, s1 = s1, s0 - qq * s1
            t0, t1 = t1, t0 - qq * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        coeffs = [c * s0 for c in coeffs] + [t0]
        g = r0
    return g, coeffs


@dataclass
class Scaling:
    """``c^(num/den) = value``: the constant ``c`` is any root of this."""

    num: int
    den: int
    value: object

    def rational_c(self):
        v = self.value
        if not isinstance(v, GaussianRational) or v.im or v.re <= 0:
            return None
        x = Fraction(int(v.re.numerator), int(v.re.denominator))
        # c = x^(den/num); try an exact rational root
        p, q = self.den, self.num
        root = _rational_root(x, q)
        if root is None:
            return None
        return root ** p

    def __str__(self):
        c = self.rational_c()
        if c is not None:
            return f"c = {fmt_q(c)}"
        from .algebra import format_scalar

        expo = fmt_q(Fraction(self.num, self.den))
        return f"c^{expo} = {format_scalar(self.value)}"


def _rational_root(x: Fraction, n: int):
    def iroot(k: int):
        r = round(k ** (1.0 / n)) if k else 0
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == k:
                return cand
        return None

    a, b = iroot(x.numerator), iroot(x.denominator)
    return None if a is None or b is None else Fraction(a, b)


def common_scaling(pairs: list[tuple[object, object, object]]) -> Scaling | None:
    """Exact check that one ``c`` satisfies ``b = c^h a`` for every ``(a, b, h)``."""
    if not pairs:
        return Scaling(1, 1, ONE)
    den = 1
    for _, _, h in pairs:
        den = math.lcm(den, Fraction(h).denominator)
    ns = [int(Fraction(h) * den) for _, _, h in pairs]
    rhos = [div(b, a) for a, b, _ in pairs]
    g0, s = _bezout(ns)
    sigma = ONE
    for rho, si in zip(rhos, s):
        sigma = mul(sigma, power(rho, si))
    for rho, n in zip(rhos, ns):
        if not is_zero(rho - power(sigma, n // g0)):
            return None
    return Scaling(g0, den, sigma)


@dataclass
class LipschitzVerdict:
    compatible: bool
    witness: str
    scalings: dict = field(default_factory=dict)


def _line_canyons(g, values: dict) -> dict[object, list[tuple[tuple, tuple]]]:
    """Per line: ``(key, (h, a_h))`` for the canyons entering the HP comparison."""
    by_id = {c.index: c for c in group_canyons(g)}
    out: dict[object, list] = {}
    for cl in canyon_clusters(g):
        for a in cl.canyons:
            c = by_id[a]
            key = (c.degree, c.h, g.tree.bar_path(c.bar), cl.omega[a])
            out.setdefault(c.line, []).append((key, (c.h, values[a])))
    return out


MAX_ASSIGNMENTS = 20000


def _line_match(fl: list, gl: list) -> Scaling | None:
    keys_f = sorted(k for k, _ in fl)
    if keys_f != sorted(k for k, _ in gl):
        return None
    groups = {}
    for k, c in fl:
        groups.setdefault(k, ([], []))[0].append(c)
    for k, c in gl:
        groups[k][1].append(c)
    glist = list(groups.values())
    choices = [list(permutations(range(len(b)))) for _, b in glist]
    count = 0
    for combo in product(*choices):
        count += 1
        if count > MAX_ASSIGNMENTS:
            raise Unresolved("too many canyon matchings to examine")
        pairs = []
        for (fa, ga), perm in zip(glist, combo):
            for i, j in enumerate(perm):
                pairs.append((fa[i][1], ga[j][1], fa[i][0]))
        sc = common_scaling(pairs)
        if sc is not None:
            return sc
    return None


def _merge_towers(base: list, values: list) -> list:
    """Rebuild the tower of ``values`` on top of the tower of ``base``.

    The stacked levels may be reducible over the lower ones; a zero divisor
    then surfaces as :class:`TowerSplit` during the comparison.
    """
    parent = Tower.of(*base).top
    mapping: dict = {}
    for lv in Tower.of(*values).levels:
        new = Level(lv.name + "'", parent, [coerce(c, mapping) for c in lv.poly])
        mapping[lv] = parent = new
    return [coerce(v, mapping) for v in values]


def compare_lipschitz(f, g) -> LipschitzVerdict:
    """Necessary conditions for bi-Lipschitz equivalence of two germs."""
    from .polar import germ

    f, g = germ(f), germ(g)
    sf, sg = lipschitz_signature(f), lipschitz_signature(g)
    if sf != sg:
        return LipschitzVerdict(False, _first_difference(sf, sg))
    fv = {c.index: c.a_h for c in group_canyons(f) if c.a_h is not None}
    gv = {c.index: c.a_h for c in group_canyons(g) if c.a_h is not None}
    if f.ctx is not g.ctx:
        keys = list(gv)
        gv = dict(zip(keys, _merge_towers(list(fv.values()), [gv[k] for k in keys])))
    for _ in range(64):
        try:
            return _hp_verdict(f, g, fv, gv)
        except TowerSplit as split:
            # every branch is an embedding of the joint field; conjugate
            # choices only permute canyons with equal keys, which the
            # matching already ranges over
            fv = {k: split.specialize(v, 0) for k, v in fv.items()}
            gv = {k: split.specialize(v, 0) for k, v in gv.items()}
    raise RuntimeError("too many tower splits")


def _hp_verdict(f, g, fv: dict, gv: dict) -> LipschitzVerdict:
    lf, lg = _line_canyons(f, fv), _line_canyons(g, gv)
    fkeys, gkeys = list(lf), list(lg)
    table = {}
    for a in fkeys:
        for b in gkeys:
            table[a, b] = _line_match(lf[a], lg[b])

    def assign(i, used, acc):
        if i == len(fkeys):
            return acc
        for b in gkeys:
            if b not in used and table[fkeys[i], b] is not None:
                res = assign(i + 1, used | {b}, {**acc, fkeys[i]: table[fkeys[i], b]})
                if res is not None:
                    return res
        return None

    if len(fkeys) != len(gkeys):
        return LipschitzVerdict(False, "different number of lines carrying canyons")
    found = assign(0, frozenset(), {})
    if found is None:
        return LipschitzVerdict(False, "no per-line constant c maps the HP coefficients")
    desc = ", ".join(f"line {k if k is not None else '-'}: {v}" for k, v in
                     sorted(found.items(), key=lambda kv: -1 if kv[0] is None else kv[0]))
    return LipschitzVerdict(True, desc or "no canyons of degree > 1", found)


def _first_difference(a: str, b: str) -> str:
    pa, pb = a.split("|"), b.split("|")
    for x, y in zip(pa, pb):
        if x != y:
            return f"{x} != {y}"
    return "signatures differ"
