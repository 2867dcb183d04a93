import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymtree.generate import all_rooted_trees, all_unrooted_trees, catalan, unrank_plane_tree
from asymtree.oracle import _group_on_utree
from asymtree.trees import (
    DuplicateLabelError,
    TreeSyntaxError,
    ahu_canonical,
    build_rooted,
    center,
    parse_rooted,
    parse_unrooted,
    root_at,
    rooted_to_unrooted,
    serialize_rooted,
    similarity,
    subtree_size,
)


def test_parse_star():
    t = parse_rooted("w(a,b)")
    assert t.n == 3
    assert t.labels[0] == "w"
    assert sorted(t.labels[1:]) == ["a", "b"]


def test_parse_path():
    t = parse_rooted("w(a(b))")
    assert t.n == 3
    assert t.children[0] == (1,)
    assert t.children[1] == (2,)


def test_parse_duplicate_label():
    with pytest.raises(DuplicateLabelError):
        parse_rooted("w(a,a)")


def test_parse_errors_carry_position():
    with pytest.raises(TreeSyntaxError) as err:
        parse_rooted("w(a,)")
    assert err.value.position == 4
    with pytest.raises(TreeSyntaxError):
        parse_rooted("w(a")
    with pytest.raises(TreeSyntaxError):
        parse_rooted("w)a(")
    with pytest.raises(TreeSyntaxError):
        parse_rooted("")


def test_parse_unlabelled():
    t = parse_rooted("(*,*,a)")
    assert t.n == 4
    assert "a" in t.labels
    auto = [l for l in t.labels if l.startswith("v")]
    assert len(auto) == 3  # root plus two starred leaves


def test_roundtrip_isomorphic():
    for text in ["w", "w(a,b)", "w(a(b),c(d,e))", "(x(y),*)"]:
        t = parse_rooted(text)
        again = parse_rooted(serialize_rooted(t))
        assert again.codes[0] == t.codes[0]


def test_codes_relabelling_invariant():
    assert ahu_canonical(parse_rooted("w(a,b)")) == ahu_canonical(parse_rooted("r(x,y)"))
    assert ahu_canonical(parse_rooted("w(a(b))")) != ahu_canonical(parse_rooted("w(a,b)"))


def test_colored_codes_swap():
    t = parse_rooted("w(a,b)")
    assert ahu_canonical(t, ["a"]) == ahu_canonical(t, ["b"])
    assert ahu_canonical(t, ["a"]) != ahu_canonical(t, ["a", "b"])


def test_similarity_star():
    t = parse_rooted("w(a,b,c)")
    classes = similarity(t).classes[0]
    assert len(classes) == 1 and classes[0].tau == 3


def test_similarity_two_classes():
    t = parse_rooted("w(a(b),c)")
    classes = similarity(t).classes[0]
    assert len(classes) == 2 and all(c.tau == 1 for c in classes)


def _brute_rooted_isomorphic(t1, t2):
    # independent check: try all vertex bijections preserving root and edges
    if t1.n != t2.n:
        return False
    n = t1.n
    e1 = {(t1.parent[v], v) for v in range(1, n)}
    e2 = {(t2.parent[v], v) for v in range(1, n)}
    for perm in itertools.permutations(range(n)):
        if perm[0] != 0:
            continue
        if all((perm[a], perm[b]) in e2 for a, b in e1):
            return True
    return False


def test_similarity_nested_twins():
    t = parse_rooted("w(a(x,y),b(u,v))")
    top = similarity(t).classes[0]
    assert len(top) == 1 and top[0].tau == 2
    a_idx, b_idx = t.children[0]
    for v in (a_idx, b_idx):
        cl = similarity(t).classes[v]
        assert len(cl) == 1 and cl[0].tau == 2
    # the twin claim cross-checked by brute-force isomorphism of the halves
    from asymtree.trees import split_at_edge
    u = rooted_to_unrooted(t)
    ha, hb = split_at_edge(u, u.index_of("a"), u.index_of("b"))
    # both halves contain w on one side; compare the sibling subtrees instead
    sa = parse_rooted("a(x,y)")
    sb = parse_rooted("b(u,v)")
    assert _brute_rooted_isomorphic(sa, sb)


def test_subtree_sizes():
    t = parse_rooted("w(a(b,c),d)")
    assert subtree_size(t, 0) == 5
    a = t.index_of("a")
    assert subtree_size(t, a) == 3
    leaf = t.index_of("d")
    assert subtree_size(t, leaf) == 1


def test_center_path3():
    u = parse_unrooted("tree unrooted\na b\nb c")
    c = center(u)
    assert c.kind == "vertex" and u.labels[c.vertices[0]] == "b"


def test_center_path4():
    u = parse_unrooted("tree unrooted\na b\nb c\nc d")
    c = center(u)
    assert c.kind == "edge"
    assert sorted(u.labels[v] for v in c.vertices) == ["b", "c"]
    assert c.halves_isomorphic is True


def test_center_spider():
    # peeling removes a, d, e and leaves the edge bc; the halves are a
    # path of two and a star of three, so not isomorphic
    u = parse_unrooted("tree unrooted\na b\nb c\nc d\nc e")
    c = center(u)
    assert c.kind == "edge"
    assert sorted(u.labels[v] for v in c.vertices) == ["b", "c"]
    assert c.halves_isomorphic is False


def test_center_fixed_by_all_automorphisms():
    for n in range(2, 9):
        for u in all_unrooted_trees(n):
            c = center(u)
            target = set(c.vertices)
            group = _group_on_utree(u)
            for p in group.perms:
                assert {p[v] for v in target} == target


def test_codes_match_brute_isomorphism_small():
    for n in range(1, 8):
        trees = all_rooted_trees(n)
        # generator output is pairwise non-isomorphic: all codes distinct
        codes = [t.codes[0] for t in trees]
        assert len(set(codes)) == len(codes)
        for t1, t2 in itertools.combinations(trees, 2):
            assert not _brute_rooted_isomorphic(t1, t2)


@given(st.integers(2, 9), st.integers(0, 10**9), st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_relabelling_preserves_code_and_classes(n, rank_seed, shuffle_seed):
    rank = rank_seed % catalan(n - 1)
    t = unrank_plane_tree(n, rank)
    rng = random.Random(shuffle_seed)
    fresh = [f"x{i}" for i in range(n)]
    rng.shuffle(fresh)
    relabelled = build_rooted(fresh, list(t.parent))
    assert relabelled.codes[0] == t.codes[0]
    # twin class shapes per vertex agree up to the relabelling
    sim1 = similarity(t)
    sim2 = similarity(relabelled)
    for v in range(n):
        shape1 = sorted((t.codes[c.rep], c.tau) for c in sim1.classes[v])
        shape2 = sorted((relabelled.codes[c.rep], c.tau) for c in sim2.classes[v])
        assert shape1 == shape2


def test_root_at_roundtrip():
    u = parse_unrooted("tree unrooted\na b\nb c\nc d\nc e")
    for v in range(u.n):
        r = root_at(u, v)
        assert r.n == u.n
        assert r.labels[0] == u.labels[v]
        assert rooted_to_unrooted(r).n == u.n
