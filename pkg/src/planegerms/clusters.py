"""Polar clusters and the topological signature of a germ."""
from __future__ import annotations

from dataclasses import dataclass

from .analysis import GermAnalysis, InvariantViolation
from .polar import germ
from .tree import fmt_q


@dataclass
class PolarCluster:
    line: int | None
    delta: object
    h: object
    bar: object
    members: list[int]

    @property
    def key(self) -> tuple:
        return (self.line, self.delta, self.h, self.bar.name if self.bar else None)


def _arcs(g: GermAnalysis):
    return [a for a in g.polar_arcs if not a.on_zero_locus]


def _line_key(k):
    return -1 if k is None else k


def cluster_partition(f) -> list[PolarCluster]:
    """Polar arcs grouped by ``(line, delta, h, bar)``; bars are compared by position."""
    g = germ(f)
    groups: dict[tuple, list[int]] = {}
    for a in _arcs(g):
        groups.setdefault((a.tangent_line, a.delta, a.h, a.bar.id if a.bar else -1), []).append(a.index)
    out = []
    for key in sorted(groups, key=lambda k: (_line_key(k[0]), k[1], k[2], k[3])):
        lead = g.polar_arcs[groups[key][0]]
        out.append(PolarCluster(key[0], key[1], key[2], lead.bar, groups[key]))
    return out


def clusters_by_delta(f) -> dict[tuple, list[int]]:
    """``(line, delta) -> arcs``."""
    g = germ(f)
    out: dict[tuple, list[int]] = {}
    for a in _arcs(g):
        out.setdefault((a.tangent_line, a.delta), []).append(a.index)
    return dict(sorted(out.items(), key=lambda kv: (_line_key(kv[0][0]), kv[0][1])))


def clusters_by_h(f) -> dict[tuple, list[int]]:
    """``(line, h) -> arcs``."""
    g = germ(f)
    out: dict[tuple, list[int]] = {}
    for a in _arcs(g):
        out.setdefault((a.tangent_line, a.h), []).append(a.index)
    return dict(sorted(out.items(), key=lambda kv: (_line_key(kv[0][0]), kv[0][1])))


def nontangential_count(f) -> int:
    """Number of polar roots (with multiplicity) transverse to every line; must be ``r - 1``."""
    g = germ(f)
    n = sum(a.weight for a in g.polar_arcs if a.tangent_line is None and not a.on_zero_locus)
    if n != g.r - 1:
        raise InvariantViolation(f"{n} non-tangential polar roots but r - 1 = {g.r - 1}")
    return n


def bar_decorations(g: GermAnalysis) -> dict:
    """Per-bar text: the set of ``(delta, h)`` occupied by polar roots on that bar."""
    occ: dict = {}
    for pr in g.polar_roots:
        if pr.on_zero_locus or pr.bar is None:
            continue
        occ.setdefault(pr.bar, set()).add((pr.delta, pr.h))
    return {b: ";".join(f"{fmt_q(d)},{fmt_q(h)}" for d, h in sorted(s)) for b, s in occ.items()}


@dataclass(frozen=True)
class TopoSignature:
    m: int
    quotients: tuple
    line_multiplicities: tuple
    nontangential: int
    tree: str
    zero_locus_polar: int

    def serialize(self) -> str:
        q = ",".join(fmt_q(x) for x in self.quotients)
        r = ",".join(str(x) for x in self.line_multiplicities)
        return (f"m={self.m}|Q={{{q}}}|lines=[{r}]|PC1m={self.nontangential}"
                f"|nonisolated={self.zero_locus_polar}|tree={self.tree}")


def topo_signature(f) -> TopoSignature:
    g = germ(f)
    quotients = tuple(sorted({a.h for a in _arcs(g)}))
    mults = tuple(sorted(ln.multiplicity for ln in g.lines))
    nt = sum(a.weight for a in _arcs(g) if a.tangent_line is None)
    tree = g.tree.canonical_encoding(bar_decorations(g))
    zl = sum(1 for a in g.polar_arcs if a.on_zero_locus)
    return TopoSignature(g.m, quotients, mults, nt, tree, zl)


@dataclass
class Verdict:
    compatible: bool
    witness: str

    def __str__(self):
        return "Compatible" if self.compatible else f"Distinct: {self.witness}"


_FIELDS = [("m", "multiplicity"), ("quotients", "polar quotient set"),
           ("line_multiplicities", "tangent line multiplicities"),
           ("nontangential", "non-tangential polar count"),
           ("zero_locus_polar", "polar branches on the zero locus"),
           ("tree", "decorated contact tree")]


def compare_topo(f, g) -> Verdict:
    """``Distinct`` (with the first differing invariant) or ``Compatible``."""
    sf, sg = topo_signature(f), topo_signature(g)
    for attr, label in _FIELDS:
        a, b = getattr(sf, attr), getattr(sg, attr)
        if a != b:
            if isinstance(a, tuple):
                a = "{" + ",".join(fmt_q(x) for x in a) + "}"
                b = "{" + ",".join(fmt_q(x) for x in b) + "}"
            return Verdict(False, f"{label}: {a} vs {b}")
    return Verdict(True, "all topological invariants agree")
