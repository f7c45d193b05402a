"""End-to-end analysis of a plane curve germ ``f(x, y) = 0`` at the origin."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import SplittingContext, is_zero, run_with_splitting
from .bivariate import BivarPoly, from_sympy, to_sympy
from .newton import (DEFAULT_MAX_ORDER, RootExpansion, RootFinder, expand_along, group_conjugates,
                     mini_regularize, polygon_of_state, root_contact)
from .puiseux import INF, ArcClass, Unresolved
from .tree import Bar, KuoLuTree


class InvariantViolation(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class NotAGerm(ValueError):
    """The polynomial does not define a curve germ through the origin."""


@dataclass
class Line:
    index: int
    slope: object
    multiplicity: int


@dataclass
class Leaf:
    index: int
    root: RootExpansion
    multiplicity: int
    klass: int = -1
    line: int = -1
    label: str = ""


@dataclass
class PolarRoot:
    index: int
    root: RootExpansion
    multiplicity: int
    on_zero_locus: bool
    klass: int = -1
    contacts: list = field(default_factory=list)
    delta: object = INF
    h: object = INF
    a_h: object = None
    bar: Bar | None = None
    line: int | None = None
    d_gr: object = None


@dataclass
class PolarArc:
    """A polar branch: one Galois orbit of roots of ``f_x``."""

    index: int
    members: list[int]
    arc: ArcClass
    on_zero_locus: bool
    delta: object
    h: object
    tangent_line: int | None
    bar: Bar | None
    branch_multiplicity: int
    root_multiplicity: int
    a_h: object = None
    d_gr: object = None

    @property
    def quotient(self):
        return self.h

    @property
    def weight(self) -> int:
        """Contribution count of the branch: ramification times root multiplicity."""
        return self.branch_multiplicity * self.root_multiplicity


def squarefree_factors(f: BivarPoly) -> list[tuple[BivarPoly, int]]:
    """Squarefree decomposition over Q(i) (computed with sympy)."""
    return [(from_sympy(p), k) for p, k in _sympy_sqf(_key(f))]


def _key(f: BivarPoly) -> tuple:
    return tuple(sorted(((i, j), (str(c.re), str(c.im))) for (i, j), c in f.terms.items()))


@lru_cache(maxsize=512)
def _sympy_sqf(key: tuple):
    f = _from_key(key)
    _, facs = to_sympy(f).sqf_list()
    return tuple((p, k) for p, k in facs if p.total_degree() > 0)


@lru_cache(maxsize=512)
def _sympy_gcd(k1: tuple, k2: tuple):
    g = to_sympy(_from_key(k1)).gcd(to_sympy(_from_key(k2)))
    return from_sympy(g) if g.total_degree() > 0 else None


@lru_cache(maxsize=512)
def _sympy_quo(k1: tuple, k2: tuple):
    return from_sympy(to_sympy(_from_key(k1)).exquo(to_sympy(_from_key(k2))))


def _from_key(key: tuple) -> BivarPoly:
    from .algebra import GaussianRational

    return BivarPoly({ij: GaussianRational(Fraction(re), Fraction(im)) for ij, (re, im) in key})


def common_factor(f: BivarPoly, g: BivarPoly) -> BivarPoly | None:
    return _sympy_gcd(_key(f), _key(g))


def _local_order(p: BivarPoly) -> int:
    return min((i for (i, j) in p.terms if j == 0), default=0)


class GermAnalysis:
    """All roots, the contact tree and decorated polar arcs of one germ.

    Everything is computed eagerly inside a :class:`SplittingContext`; use
    :func:`analyze` to get automatic recovery from tower splits.
    """

    def __init__(self, f: BivarPoly | str, ctx: SplittingContext | None = None, *, margin=1,
                 shear: int = 0, max_order=DEFAULT_MAX_ORDER, canyons: bool = True):
        if isinstance(f, str):
            from .parser import parse_poly

            f = parse_poly(f)
        if f.is_zero():
            raise NotAGerm("the zero polynomial does not define a curve")
        if (0, 0) in f.terms and not is_zero(f.terms[(0, 0)]):
            raise NotAGerm("f(0,0) != 0: the curve does not pass through the origin")
        self.source = f
        self.ctx = ctx or SplittingContext()
        self.margin = Fraction(margin)
        self.max_order = max_order
        g = f
        if shear:
            g = g.compose(BivarPoly.x(), BivarPoly.y() + BivarPoly.x() * shear)
        g, lam = mini_regularize(g)
        self.shear = shear + lam
        self.f = g
        self.m = g.order()
        self._roots()
        self._lines()
        self._tree()
        self._polar()
        if canyons:
            from .canyons import compute_gradient_degrees

            compute_gradient_degrees(self)
        self._finish()

    # ------------------------------------------------------------ roots of f

    def _roots(self):
        ctx = self.ctx
        self.factors = squarefree_factors(self.f)
        self.leaves: list[Leaf] = []
        self.leaf_classes: list[list[int]] = []
        for p, k in self.factors:
            if _local_order(p) == 0:
                continue
            finder = RootFinder(ctx, p, k, self.max_order)
            roots = finder.roots()
            for group in group_conjugates(ctx, roots):
                cid = len(self.leaf_classes)
                ids = []
                for r in group:
                    leaf = Leaf(len(self.leaves), r, k, cid)
                    self.leaves.append(leaf)
                    ids.append(leaf.index)
                self.leaf_classes.append(ids)
        for leaf in self.leaves:
            leaf.label = f"z{leaf.index + 1}"
        n = len(self.leaves)
        self._contact: dict = {}
        for i in range(n):
            for j in range(i + 1, n):
                c = root_contact(self.leaves[i].root, self.leaves[j].root)
                self._contact[i, j] = self._contact[j, i] = c

    def leaf_contact(self, i: int, j: int):
        return self._contact[i, j]

    # ------------------------------------------------------------ tangent cone

    def _lines(self):
        fm = self.f.initial_form()
        coeffs = [fm.terms.get((i, self.m - i)) for i in range(self.m + 1)]
        from .algebra import ZERO

        poly = [c if c is not None else ZERO for c in coeffs]
        self.lines = [Line(k, slope, r) for k, (slope, r) in enumerate(self.ctx.roots(poly))]
        for leaf in self.leaves:
            leaf.root.refine_to(1)
            c1 = leaf.root.series().coefficient(1)
            leaf.line = self._line_of(c1)

    def _line_of(self, c1) -> int:
        for ln in self.lines:
            if is_zero(c1 - ln.slope):
                return ln.index
        raise InvariantViolation("arc tangent to no line of the tangent cone")

    # ------------------------------------------------------------ tree

    def _tree(self):
        n = len(self.leaves)
        self.tree = KuoLuTree.build(
            n, self.leaf_contact, labels=[l.label for l in self.leaves],
            ramification=[l.root.ramification for l in self.leaves],
            multiplicity=[l.multiplicity for l in self.leaves])

    # ------------------------------------------------------------ polar arcs

    def _polar(self):
        ctx = self.ctx
        fx = self.f.partial_x()
        self.polar_roots: list[PolarRoot] = []
        self.polar_arcs: list[PolarArc] = []
        for q, k in squarefree_factors(fx):
            if _local_order(q) == 0:
                continue
            shared = common_factor(q, self.f)
            parts = []
            if shared is not None:
                parts.append((shared, True))
                rest = _sympy_quo(_key(q), _key(shared))
                if rest.total_degree() > 0:
                    parts.append((rest, False))
            else:
                parts.append((q, False))
            for part, on_zero in parts:
                if _local_order(part) == 0:
                    continue
                finder = RootFinder(ctx, part, k, self.max_order)
                for group in group_conjugates(ctx, finder.roots()):
                    members = []
                    for r in group:
                        pr = PolarRoot(len(self.polar_roots), r, k, on_zero, klass=len(self.polar_arcs))
                        self.polar_roots.append(pr)
                        members.append(pr.index)
                    lead = self.polar_roots[members[0]]
                    self.polar_arcs.append(PolarArc(
                        len(self.polar_arcs), members, None, on_zero, INF, INF, None, None,
                        lead.root.ramification, k))
        for pr in self.polar_roots:
            if not pr.on_zero_locus:
                self._decorate(pr)
        for arc in self.polar_arcs:
            lead = self.polar_roots[arc.members[0]]
            arc.delta, arc.h, arc.bar = lead.delta, lead.h, lead.bar
            arc.tangent_line, arc.a_h = lead.line, lead.a_h

    def _decorate(self, pr: PolarRoot):
        contacts = [root_contact(pr.root, leaf.root) for leaf in self.leaves]
        pr.contacts = contacts
        pr.delta = max(contacts)
        pr.bar = self.tree.bar_of(contacts)
        h_sum = sum(leaf.multiplicity * c for leaf, c in zip(self.leaves, contacts))
        pr.root.refine_to(pr.delta)
        while True:
            gamma = pr.root.series()
            st = expand_along(self.f, gamma, cap=h_sum + 1, kmax=self.m)
            poly = polygon_of_state(st, certified_below=gamma.omega)
            try:
                h = poly.vertical_intercept
                top = poly.highest_coslope
                break
            except Unresolved:
                pr.root.step()
        if h != h_sum:
            raise InvariantViolation(f"ord f(gamma) = {h} but the contact sum gives {h_sum}")
        if top != pr.delta:
            raise InvariantViolation(f"top co-slope {top} differs from delta {pr.delta}")
        pr.h = h
        pr.a_h = st.order(0)[1]
        c1 = gamma.coefficient(1)
        pr.line = None if pr.delta == 1 else self._line_of(c1)

    # ------------------------------------------------------------ final refinement

    def _finish(self):
        """Refine every arc by the safety margin past the exponents its data depends on."""
        for i, leaf in enumerate(self.leaves):
            need = max((self._contact[i, j] for j in range(len(self.leaves)) if j != i), default=1)
            self.leaf_needed = getattr(self, "leaf_needed", {})
            self.leaf_needed[i] = need
            leaf.root.refine_to(need + self.margin)
        for pr in self.polar_roots:
            need = pr.delta if pr.d_gr is None or pr.d_gr == INF else max(pr.delta, pr.d_gr)
            if need != INF:
                pr.root.refine_to(need + self.margin)
        for arc in self.polar_arcs:
            lead = self.polar_roots[arc.members[0]]
            arc.arc = ArcClass(lead.root.series(), lead.root.ramification, arc.root_multiplicity)
            arc.d_gr = lead.d_gr

    # ------------------------------------------------------------ convenience

    @property
    def r(self) -> int:
        return len(self.lines)

    def leaf_class(self, idx: int) -> ArcClass:
        ids = self.leaf_classes[idx]
        lead = self.leaves[ids[0]]
        return ArcClass(lead.root.series(), lead.root.ramification, lead.multiplicity)

    def zero_set(self) -> list[ArcClass]:
        return [self.leaf_class(k) for k in range(len(self.leaf_classes))]

    def isolated(self) -> bool:
        return not any(a.on_zero_locus for a in self.polar_arcs)


def analyze(f: BivarPoly | str, **kwargs) -> GermAnalysis:
    """Analyse a germ, re-running from scratch whenever a tower splits."""
    return run_with_splitting(lambda ctx: GermAnalysis(f, ctx, **kwargs))


