import random

import pytest

from germs import DEFORMED, PAIRS, CUSPS, SMALL, germ, poly, random_map
from planegerms.analysis import analyze
from planegerms.clusters import (cluster_partition, clusters_by_delta, clusters_by_h, compare_topo,
                                 nontangential_count, topo_signature)

ISOLATED = [CUSPS, DEFORMED, PAIRS] + list(SMALL)


@pytest.mark.parametrize("text", ISOLATED)
def test_partition_refines_coarser_groupings(text):
    g = germ(text)
    finite = sorted(a.index for a in g.polar_arcs if not a.on_zero_locus)
    parts = cluster_partition(g)
    assert sorted(i for c in parts for i in c.members) == finite
    by_delta, by_h = clusters_by_delta(g), clusters_by_h(g)
    for c in parts:
        assert set(c.members) <= set(by_delta[c.line, c.delta])
        assert set(c.members) <= set(by_h[c.line, c.h])
        for i in c.members:
            a = g.polar_arcs[i]
            assert (a.tangent_line, a.delta, a.h, a.bar) == (c.line, c.delta, c.h, c.bar)
    assert sorted(i for v in by_delta.values() for i in v) == finite
    assert sorted(i for v in by_h.values() for i in v) == finite


@pytest.mark.parametrize("text", ISOLATED)
def test_transverse_polar_count(text):
    g = germ(text)
    assert nontangential_count(g) == g.r - 1


def test_tangent_arcs_land_on_bars():
    g = germ(CUSPS)
    for a in g.polar_arcs:
        if a.tangent_line is not None and not a.on_zero_locus:
            assert a.bar is not None and a.delta == a.bar.height


def _linear_image(text: str, seed: int):
    X, Y, _ = random_map(random.Random(seed), polynomial=seed % 2 == 1)
    return poly(text).compose(X, Y)


@pytest.mark.parametrize("text", [CUSPS, "x^3-3*x*y^4+y^7", "x*(x-y)*(x-2*y)*(x^2-y^5)"])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_signature_is_invariant(text, seed):
    image = analyze(_linear_image(text, seed))
    assert topo_signature(image) == topo_signature(germ(text))
    assert compare_topo(image, germ(text)).compatible


def test_distinct_germs_report_witness():
    v = compare_topo(germ(CUSPS), germ(DEFORMED))
    assert not v.compatible and str(v).startswith("Distinct: ")
    v = compare_topo(germ("x^2-y^3"), germ("x^2-y^5"))
    assert v.witness == "polar quotient set: {3} vs {5}"
    # equal multiplicity, so the first difference is further down the list
    v = compare_topo(germ("x^3-y^4"), germ("x*y*(x+y)"))
    assert v.witness == "polar quotient set: {4} vs {3}"
    v = compare_topo(germ("x^2-y^4"), germ("x^2-y^3*x-y^4"))
    assert v.compatible


def test_serialization_is_stable():
    s = topo_signature(germ(PAIRS)).serialize()
    assert s == topo_signature(analyze(poly(PAIRS))).serialize()
    assert s.startswith("m=8|Q={")
