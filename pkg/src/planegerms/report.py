"""Structured and text reports of an analysed germ.

All rationals are written as ``"p/q"`` strings.  Algebraic numbers carry their
expression in the generators, the defining polynomials of those generators and
a decimal approximation that is informational only.
"""
from __future__ import annotations

import json

from .algebra import approx, format_scalar, format_upoly
from .analysis import GermAnalysis
from .canyons import canyon_clusters, group_canyons, hp_invariants, lipschitz_signature
from .clusters import (bar_decorations, cluster_partition, clusters_by_delta, clusters_by_h,
                       nontangential_count, topo_signature)
from .parser import format_poly
from .polar import (EmptyCluster, EmptyPolar, NonIsolated, loj_grad, milnor_number,
                    oracle_milnor, partial_rho_table, quotient_set, rho0, tangential_milnor,
                    tangential_rho)
from .puiseux import INF, PuiseuxSeries, format_series
from .tree import Bar, fmt_q

SCHEMA_VERSION = "1"


def q(v) -> str:
    return fmt_q(v)


def scalar_json(c):
    if c is None:
        return None
    if c.level == 0:
        return format_scalar(c)
    defs = {}
    for lv in c.gen.chain():
        defs[lv.name] = format_upoly(lv.poly, "t")
    z = approx(c)
    return {"expr": format_scalar(c), "field": defs, "approx": f"{z.real:.12g}{z.imag:+.12g}i"}


def series_upto(s: PuiseuxSeries, cutoff, max_terms: int | None = None) -> str:
    """Terms with exponent at most ``cutoff``; the rest is elided as ``...``."""
    terms = [t for t in s.terms if t[0] <= cutoff]
    if max_terms is not None:
        terms = terms[:max_terms]
    body = format_series(PuiseuxSeries._raw(tuple(terms), INF))
    return f"{body} + ..."


def _line_name(k) -> str:
    return "-" if k is None else f"L{k + 1}"


def _line_equation(slope) -> str:
    if slope.level == 0 and slope.is_zero():
        return "x = 0"
    cs = format_scalar(slope)
    return "x = y" if cs == "1" else f"x = {cs}*y"


def _bar_name(b: Bar | None):
    return None if b is None else b.name


def _tree_json(g: GermAnalysis, node, decorations: dict):
    if isinstance(node, Bar):
        out = {"bar": node.name, "height": q(node.height)}
        if node in decorations:
            out["polar"] = decorations[node]
        out["children"] = [_tree_json(g, c, decorations) for c in node.children]
        return out
    return {"leaf": node.label, "ramification": node.ramification, "multiplicity": node.multiplicity}


def _polar_cutoff(pr) -> object:
    if pr.on_zero_locus:
        return None
    d = pr.d_gr if pr.d_gr not in (None, INF) else pr.delta
    return max(pr.delta, d)


def build_report(g: GermAnalysis, max_terms: int | None = None, oracle: bool = True) -> dict:
    rep: dict = {"schema": SCHEMA_VERSION}
    rep["input"] = format_poly(g.source)
    rep["shear"] = g.shear
    rep["working_polynomial"] = format_poly(g.f)
    rep["multiplicity"] = g.m
    rep["tangent_cone"] = [{"line": _line_name(ln.index), "slope": scalar_json(ln.slope),
                            "equation": _line_equation(ln.slope),
                            "multiplicity": ln.multiplicity} for ln in g.lines]
    leaves = []
    for leaf in g.leaves:
        cut = g.leaf_needed[leaf.index]
        leaves.append({"label": leaf.label, "series": series_upto(leaf.root.series(), cut, max_terms),
                       "ramification": leaf.root.ramification, "multiplicity": leaf.multiplicity,
                       "branch": leaf.klass + 1, "line": _line_name(leaf.line)})
    rep["roots"] = leaves
    contacts = []
    n = len(g.leaves)
    for i in range(n):
        contacts.append([q(g.leaf_contact(i, j)) if i != j else None for j in range(n)])
    rep["contacts"] = contacts
    dec = bar_decorations(g)
    rep["tree"] = None if g.tree.root is None else _tree_json(g, g.tree.root, dec)

    arcs = []
    for a in g.polar_arcs:
        lead = g.polar_roots[a.members[0]]
        row = {"arc": f"gamma{a.index + 1}", "on_zero_locus": a.on_zero_locus,
               "ramification": a.branch_multiplicity, "root_multiplicity": a.root_multiplicity,
               "m_j": a.weight}
        if a.on_zero_locus:
            row.update({"series": None, "delta": "inf", "h": "inf", "line": None, "bar": None,
                        "q_j": "inf", "d_gr": "inf", "a_h": None})
        else:
            row.update({"series": series_upto(lead.root.series(), _polar_cutoff(lead), max_terms),
                        "delta": q(a.delta), "h": q(a.h), "line": _line_name(a.tangent_line),
                        "bar": _bar_name(a.bar), "q_j": q(a.h),
                        "d_gr": None if a.d_gr is None else q(a.d_gr), "a_h": scalar_json(a.a_h)})
        arcs.append(row)
    rep["polar_arcs"] = arcs

    inv: dict = {}
    isolated = g.isolated()
    inv["isolated"] = isolated
    try:
        inv["Q"] = [q(x) for x in quotient_set(g)]
        inv["l0"] = q(loj_grad(g))
        inv["rho0"] = q(rho0(g))
    except EmptyPolar:
        inv["Q"], inv["l0"], inv["rho0"] = [], None, None
    try:
        inv["mu"] = str(milnor_number(g))
    except NonIsolated:
        inv["mu"] = "inf"
    except EmptyPolar:
        inv["mu"] = None
    per_line = []
    for ln in g.lines:
        row = {"line": _line_name(ln.index), "Q_k": [q(x) for x in quotient_set(g, ln.index)]}
        try:
            row["rho0k"] = q(tangential_rho(g, ln.index))
        except EmptyCluster:
            row["rho0k"] = None
        try:
            row["mu_k"] = str(tangential_milnor(g, ln.index))
        except NonIsolated:
            row["mu_k"] = "inf"
        per_line.append(row)
    inv["per_line"] = per_line
    inv["partial_rho"] = [{"line": _line_name(k), "delta": q(d), "rho": q(v)}
                          for (k, d), v in partial_rho_table(g).items()]
    rep["invariants"] = inv

    rep["polar_clusters"] = [{"line": _line_name(c.line), "delta": q(c.delta), "h": q(c.h),
                              "bar": _bar_name(c.bar),
                              "members": [f"gamma{i + 1}" for i in c.members]}
                             for c in cluster_partition(g)]
    rep["clusters_by_delta"] = [{"line": _line_name(k), "delta": q(d),
                                 "members": [f"gamma{i + 1}" for i in v]}
                                for (k, d), v in clusters_by_delta(g).items()]
    rep["clusters_by_h"] = [{"line": _line_name(k), "h": q(h),
                             "members": [f"gamma{i + 1}" for i in v]}
                            for (k, h), v in clusters_by_h(g).items()]

    canyons = group_canyons(g)
    rep["canyons"] = [{"canyon": f"C{c.index + 1}",
                       "representative": series_upto(c.representative, c.degree, max_terms)
                       if c.degree != INF else None,
                       "degree": q(c.degree), "h": q(c.h), "a_h": scalar_json(c.a_h),
                       "line": _line_name(c.line), "bar": _bar_name(c.bar),
                       "polar_arcs": [f"gamma{i + 1}" for i in c.polar_arcs],
                       "polar_roots": len(c.members)} for c in canyons]
    rep["canyon_clusters"] = [{"line": _line_name(cl.key[0]), "d": q(cl.key[1]),
                               "bar": next(c.bar.name for c in canyons if c.index == cl.canyons[0]),
                               "canyons": [f"C{i + 1}" for i in cl.canyons],
                               "omega": {f"C{i + 1}": [q(x) for x in cl.omega[i]] for i in cl.canyons},
                               "omega_classes": [[f"C{i + 1}" for i in cls] for cls in cl.classes]}
                              for cl in canyon_clusters(g)]
    rep["hp"] = [[q(d), scalar_json(a)] for d, a in hp_invariants(g)]

    checks: dict = {}
    # both identities are enforced during analysis, which raises InvariantViolation otherwise
    checks["h_equals_contact_sum"] = True
    checks["top_coslope_equals_delta"] = True
    checks["d_gr_at_least_delta"] = all(pr.d_gr is None or pr.d_gr == INF or pr.d_gr >= pr.delta
                                        for pr in g.polar_roots)
    try:
        nontangential_count(g)
        checks["nontangential_count_r_minus_1"] = True
    except Exception:
        checks["nontangential_count_r_minus_1"] = False
    if oracle and g.source.is_gaussian():
        try:
            om = oracle_milnor(g.source)
            checks["milnor_oracle"] = str(om)
            checks["milnor_agrees"] = inv["mu"] == str(om)
        except NonIsolated:
            checks["milnor_oracle"] = "inf"
            checks["milnor_agrees"] = inv["mu"] == "inf"
    rep["checks"] = checks
    rep["signatures"] = {"topological": topo_signature(g).serialize(),
                         "lipschitz": lipschitz_signature(g)}
    return rep


def to_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, ensure_ascii=False)


def _s(v) -> str:
    if isinstance(v, dict):
        return f"{v['expr']} ~ {v['approx']}"
    return "-" if v is None else str(v)


def to_text(rep: dict) -> str:
    out = []
    w = out.append
    w(f"germ      f = {rep['input']}")
    if rep["shear"]:
        w(f"shear     y -> y + {rep['shear']}*x")
    w(f"order     m = {rep['multiplicity']}")
    w("tangent cone:")
    for ln in rep["tangent_cone"]:
        w(f"  {ln['line']}: {ln['equation']}  (multiplicity {ln['multiplicity']})")
    w("Puiseux roots:")
    for r in rep["roots"]:
        mult = f" x{r['multiplicity']}" if r["multiplicity"] > 1 else ""
        w(f"  {r['label']}{mult} = {r['series']}   [N={r['ramification']}, {r['line']}]")
    w("Kuo-Lu tree:")
    w(_text_tree(rep["tree"], 1))
    w("polar arcs:")
    w("  arc      delta  h      line  bar   m_j  d_gr  a_h        series")
    for a in rep["polar_arcs"]:
        if a["on_zero_locus"]:
            w(f"  {a['arc']:<8} on the zero locus (m_j = {a['m_j']})")
            continue
        w(f"  {a['arc']:<8} {a['delta']:<6} {a['h']:<6} {a['line']:<5} {a['bar']:<5} "
          f"{a['m_j']:<4} {a['d_gr']:<5} {_s(a['a_h']):<10} {a['series']}")
    inv = rep["invariants"]
    w(f"Q(f)      {{{', '.join(inv['Q'])}}}")
    w(f"mu        {inv['mu']}")
    w(f"l0        {inv['l0']}")
    w(f"rho0      {inv['rho0']}")
    for row in inv["per_line"]:
        w(f"  {row['line']}: Q_k = {{{', '.join(row['Q_k'])}}}, rho0k = {row['rho0k']}, mu_k = {row['mu_k']}")
    if inv["partial_rho"]:
        w("partial exponents:")
        for row in inv["partial_rho"]:
            w(f"  rho[{row['line']}, delta={row['delta']}] = {row['rho']}")
    w("polar clusters:")
    for c in rep["polar_clusters"]:
        w(f"  ({c['line']}, delta={c['delta']}, h={c['h']}, {c['bar']}): {', '.join(c['members'])}")
    w("canyons:")
    for c in rep["canyons"]:
        if c["degree"] == "inf":
            w(f"  {c['canyon']}: degree inf ({', '.join(c['polar_arcs'])} on the zero locus)")
            continue
        w(f"  {c['canyon']}: d = {c['degree']}, h = {c['h']}, a_h = {_s(c['a_h'])}, {c['line']}, "
          f"{c['bar']}, around {c['representative']}")
    for cl in rep["canyon_clusters"]:
        om = "; ".join(f"{k}: {{{', '.join(v)}}}" for k, v in cl["omega"].items())
        w(f"  cluster ({cl['line']}, d={cl['d']}, {cl['bar']}): {', '.join(cl['canyons'])}  omega {om}")
    w("checks:")
    for k, v in rep["checks"].items():
        w(f"  {k}: {v}")
    return "\n".join(out)


def _text_tree(node, indent: int) -> str:
    if node is None:
        return "  (no roots)"
    pad = "  " * indent
    if "leaf" in node:
        mult = f" x{node['multiplicity']}" if node["multiplicity"] > 1 else ""
        return f"{pad}- {node['leaf']}{mult}"
    extra = f"  polar (delta,h): {node['polar']}" if "polar" in node else ""
    lines = [f"{pad}{node['bar']} h={node['height']}{extra}"]
    lines += [_text_tree(c, indent + 1) for c in node["children"]]
    return "\n".join(lines)


def polar_decorations(g: GermAnalysis) -> dict:
    """Bar -> names of polar arcs growing on it, for tree pictures."""
    out: dict = {}
    for a in g.polar_arcs:
        if a.bar is not None:
            out.setdefault(a.bar, []).append(f"gamma{a.index + 1}")
    return {b: ", ".join(v) for b, v in out.items()}


def tree_text(g: GermAnalysis, fmt: str = "ascii") -> str:
    dec = polar_decorations(g)
    if fmt == "dot":
        return g.tree.to_dot(dec)
    return g.tree.to_ascii(dec)
