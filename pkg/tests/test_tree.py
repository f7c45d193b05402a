from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from germs import DEFORMED, PAIRS, CUSPS, germ
from planegerms.puiseux import INF
from planegerms.tree import KuoLuTree, NoSuchBar

F = Fraction

# leaves as exact polynomial arcs {exponent: coeff}; contact = order of the difference
arc = st.dictionaries(st.integers(1, 6), st.integers(-2, 2).filter(bool), max_size=4)


def order(a: dict, b: dict):
    d = [e for e in set(a) | set(b) if a.get(e, 0) != b.get(e, 0)]
    return min(d) if d else INF


def tree_of(arcs):
    return KuoLuTree.build(len(arcs), lambda i, j: order(arcs[i], arcs[j]))


distinct_arcs = st.lists(arc, min_size=2, max_size=7, unique_by=lambda d: tuple(sorted(d.items())))


@given(distinct_arcs)
def test_lca_height_is_contact(arcs):
    t = tree_of(arcs)
    for i, j in combinations(range(len(arcs)), 2):
        assert t.lca([i, j]).height == order(arcs[i], arcs[j])


@given(distinct_arcs)
def test_children_separate_strictly(arcs):
    t = tree_of(arcs)
    for bar in t.bars:
        groups = [c.leaves() for c in bar.children]
        assert len(groups) >= 2
        for g1, g2 in combinations(groups, 2):
            assert all(order(arcs[a], arcs[b]) == bar.height for a in g1 for b in g2)
        for child in bar.children:
            if hasattr(child, "height"):
                assert child.height > bar.height


@given(distinct_arcs, st.randoms())
def test_encoding_is_permutation_invariant(arcs, rnd):
    perm = list(range(len(arcs)))
    rnd.shuffle(perm)
    shuffled = [arcs[p] for p in perm]
    a, b = tree_of(arcs), tree_of(shuffled)
    assert a.canonical_encoding() == b.canonical_encoding()
    assert [x.height for x in a.bars] == [x.height for x in b.bars]
    # bar names follow the canonical order, so leaves keep their bar names
    for k, p in enumerate(perm):
        assert a.leaf_nodes[p].parent.name == b.leaf_nodes[k].parent.name or \
            a.leaf_nodes[p].parent.height == b.leaf_nodes[k].parent.height


def test_double_cusp_tree():
    g = germ(CUSPS)
    t = g.tree
    assert t.root.height == 2
    assert sorted(c.height for c in t.root.children) == [3, 3]
    assert [b.name for b in t.bars] == ["B1", "B2", "B3"]
    assert t.canonical_encoding() == \
        "B[2](B[3](L(N=1,m=1),L(N=1,m=1)),B[3](L(N=1,m=1),L(N=1,m=1)))"


def test_equal_height_bars_stay_distinct():
    t = germ(CUSPS).tree
    b2, b3 = t.bars[1], t.bars[2]
    assert b2.height == b3.height and b2 is not b3 and b2 != b3
    assert len({b2, b3}) == 2


def test_different_trees_differ():
    assert germ(CUSPS).tree.canonical_encoding() != germ(DEFORMED).tree.canonical_encoding()
    assert germ(DEFORMED).tree.canonical_encoding() != germ(PAIRS).tree.canonical_encoding()


def test_pairs_bars():
    t = germ(PAIRS).tree
    assert t.heights() == [2, 3, 4, 5, 5, 5, 5]
    paths = [t.bar_path(b) for b in t.bars]
    # only the two isomorphic sibling bars below height 4 share a position code
    clash = [b for b in t.bars if paths.count(t.bar_path(b)) > 1]
    assert len(set(paths)) == 6 and len(clash) == 2
    assert clash[0].parent is clash[1].parent and clash[0].parent.height == 4


def test_bar_of():
    arcs = [{2: 1}, {2: 1, 3: 1}, {3: 1}]
    t = tree_of(arcs)
    top = t.lca([0, 1])
    assert t.bar_of([3, 3, 2]) is top
    assert t.bar_of([2, 2, 2]) is t.root
    with pytest.raises(NoSuchBar):
        t.bar_of([F(5, 2), F(5, 2), 2])


def test_decorations_change_encoding():
    t = germ(CUSPS).tree
    plain = t.canonical_encoding()
    dec = t.canonical_encoding({t.bars[0]: "x"})
    assert plain != dec and "{x}" in dec


def test_renderers():
    t = germ(CUSPS).tree
    dot = t.to_dot()
    assert dot.startswith("digraph") and "B1 -> B2" in dot
    text = t.to_ascii()
    assert text.splitlines()[0] == "B1 h=2"
    assert KuoLuTree.build(0, lambda i, j: 0).canonical_encoding() == "empty"
