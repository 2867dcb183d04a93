import random

import pytest

from asymtree.cardinal import ALEPH0, FIN0, Cardinal, two_pow
from asymtree.engine import count_rooted, motion_rooted
from asymtree.presented import (
    PresentationError,
    Slot,
    TreePresentation,
    asym_certificate,
    classify,
    count_presented,
    minimize,
    motion_presented,
    parse_presentation,
    rank_presented,
    render_presentation,
    truncated_unfold,
    unfold,
)

from _families import (
    double_ray_replay_family,
    random_asymmetric_finite_presentation,
    random_finite_presentation,
    random_rayless_infinite_presentation,
)

F = Cardinal.finite
B = Cardinal.beth

T3 = "class r: d*3 / class d: d*2"
RAY = "class r: r*1"
ALEPH_LEAVES = "class r: l*w / class l:"
BETH1_RAYS = "class r: q*beth_1 / class q: q*1"


def test_parse_examples():
    p = parse_presentation(T3)
    assert p.root == "r" and len(p.names) == 2
    p = parse_presentation(ALEPH_LEAVES)
    assert p.slots["r"][0].mult == ALEPH0
    with pytest.raises(PresentationError):
        parse_presentation("class r: x*1")
    with pytest.raises(PresentationError):
        parse_presentation("class r: l*0 / class l:")
    with pytest.raises(PresentationError):
        parse_presentation("klass r:")
    with pytest.raises(PresentationError):
        parse_presentation("")
    with pytest.raises(PresentationError):
        parse_presentation("class r: / class r:")


def test_parse_multiline():
    p = parse_presentation("class r: d*3\nclass d: d*2")
    assert p.slots == parse_presentation(T3).slots


def test_minimize_aggregates_leaf_twins():
    m = minimize(parse_presentation("class r: a*1, b*1 / class a: / class b:"))
    assert len(m.names) == 2
    assert m.slots[m.root][0].mult == F(2)


def test_minimize_keeps_minimal():
    m = minimize(parse_presentation(T3))
    assert len(m.names) == 2


def test_minimize_merges_structurally_equal():
    text = "class r: a*1, b*1 / class a: l*2 / class b: k*2 / class l: / class k:"
    m = minimize(parse_presentation(text))
    # a and b unfold identically, as do l and k
    assert len(m.names) == 3
    assert m.slots[m.root][0].mult == F(2)


def test_minimize_idempotent_and_unfolding_preserved():
    rng = random.Random(5)
    for _ in range(60):
        p = random_finite_presentation(rng)
        m = minimize(p)
        assert minimize(m) == m
        if classify(p).size <= F(400):
            assert unfold(p).codes[0] == unfold(m).codes[0]


def test_classify_examples():
    assert classify(parse_presentation(T3)).kind == "double-ray"
    assert classify(parse_presentation(T3)).size == B(0)
    c = classify(parse_presentation(RAY))
    assert c.kind == "one-ended" and c.size == B(0)
    c = classify(parse_presentation(ALEPH_LEAVES))
    assert c.kind == "rayless" and c.size == B(0)
    c = classify(parse_presentation("class r: a*2 / class a:"))
    assert c.kind == "finite" and c.size == F(3)
    c = classify(parse_presentation(BETH1_RAYS))
    assert c.kind == "double-ray" and c.size == B(1)


def test_classify_flags():
    c = classify(parse_presentation(T3))
    assert all(c.reaches_cycle.values())
    assert all(c.on_double_ray.values())
    c = classify(parse_presentation(RAY))
    assert not any(c.on_double_ray.values())


def test_rank_examples():
    assert rank_presented(parse_presentation("class l:")) == 0
    assert rank_presented(parse_presentation("class r: a*3 / class a:")) == 0
    assert rank_presented(parse_presentation(ALEPH_LEAVES)) == 1
    nested = "class r: m*w / class m: l*w / class l:"
    assert rank_presented(parse_presentation(nested)) == 2
    deeper = "class r: m*2 / class m: l*w / class l:"
    assert rank_presented(parse_presentation(deeper)) == 1
    with pytest.raises(PresentationError):
        rank_presented(parse_presentation(RAY))


def test_motion_examples():
    assert motion_presented(parse_presentation(RAY)) is None
    assert motion_presented(parse_presentation(ALEPH_LEAVES)) == F(2)
    assert motion_presented(parse_presentation(T3)) == B(0)


def test_count_examples():
    rep = count_presented(parse_presentation(ALEPH_LEAVES))
    assert rep.count == FIN0 and rep.theorem == "rayless"
    rep = count_presented(parse_presentation(T3))
    assert rep.count == B(1) and rep.theorem == "double-ray"
    assert rep.count == two_pow(rep.size)
    rep = count_presented(parse_presentation(RAY))
    assert rep.count == B(1) and rep.theorem == "one-ended"
    rep = count_presented(parse_presentation(BETH1_RAYS))
    assert rep.count == B(2) and rep.count == two_pow(rep.size)


def test_finite_presented_matches_engine():
    rng = random.Random(11)
    done = 0
    while done < 120:
        p = random_finite_presentation(rng)
        size = classify(p).size
        if size > F(400):
            continue
        tree = unfold(p)
        rep = count_presented(p)
        assert rep.count == F(count_rooted(tree))
        m_engine = motion_rooted(tree)
        m_pres = motion_presented(p)
        if m_engine is None:
            assert m_pres is None
        else:
            assert m_pres == F(m_engine)
        done += 1


def test_rayless_infinite_presentations_are_never_asymmetrizable():
    # any finite presentation of a rayless infinite tree repeats some
    # finite branch infinitely often: motion is finite and the count is 0
    rng = random.Random(23)
    for _ in range(120):
        p = random_rayless_infinite_presentation(rng)
        c = classify(p)
        assert c.kind == "rayless"
        rep = count_presented(p)
        assert rep.count == FIN0
        m = motion_presented(p)
        assert m is not None and m.is_finite


def test_rank_zero_replay_asymmetric_finite():
    # Theorem base case: rigid compact trees have a full deck of
    # asymmetrizing sets, exactly two to the size
    rng = random.Random(3)
    for _ in range(120):
        p = random_asymmetric_finite_presentation(rng)
        rep = count_presented(p)
        assert rep.classification == "finite"
        assert rep.motion is None
        assert rep.count == two_pow(rep.size)
        assert rank_presented(p) == 0


def test_double_ray_replay_family():
    for p in double_ray_replay_family(60, seed=17):
        rep = count_presented(p)
        assert rep.classification == "double-ray"
        assert rep.count == two_pow(rep.size), render_presentation(p)


def test_one_ended_rigid_decorations():
    # a ray whose vertices carry pairwise distinct rigid side trees
    text = ("class r: r2*1, a*1 / class r2: r*1, b*1 /"
            " class a: c*1 / class b: / class c: e*1 / class e:")
    p = parse_presentation(text)
    rep = count_presented(p)
    assert rep.classification == "one-ended"
    assert rep.count == two_pow(rep.size) == B(1)


def test_lemma_replay_class_level():
    # parents of infinitely sized children with full decks keep full decks
    deck = parse_presentation(
        "class r: s*2, t*1 / class s: s*1 / class t: t*1, u*1 / class u:")
    rep = count_presented(deck)
    assert rep.count == two_pow(rep.size)


def test_certificate_examples():
    cert = asym_certificate(parse_presentation("class r: l*2 / class l:"), 1)
    assert cert is not None and len(cert.selected) == 1
    cert = asym_certificate(parse_presentation(T3), 3)
    assert cert is not None
    assert cert.truncation.n == 22
    five = parse_presentation("class r: q*5 / class q: q*1")
    assert asym_certificate(five, 1) is None
    assert asym_certificate(five, 3) is not None
    with pytest.raises(ValueError):
        asym_certificate(parse_presentation(ALEPH_LEAVES), 2)


def test_certificate_relative_verification():
    from asymtree.presented import _relative_verify
    p = parse_presentation(T3)
    cert = asym_certificate(p, 3)
    sel = frozenset(i for i, l in enumerate(cert.truncation.labels)
                    if l in cert.selected)
    cut = frozenset(i for i, l in enumerate(cert.truncation.labels)
                    if l in cert.cut)
    assert _relative_verify(cert.truncation, sel, cut)


def test_truncated_unfold_width_cap():
    tree, cut = truncated_unfold(parse_presentation(BETH1_RAYS), 2, 2)
    assert tree.n == 1 + 2 + 2
    assert cut
