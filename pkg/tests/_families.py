"""Seeded generators of random presentations for the replay suites."""

import random

from asymtree.cardinal import ALEPH0, Cardinal, two_pow
from asymtree.presented import Slot, TreePresentation, classify, motion_presented

FIN = Cardinal.finite
INFINITES = (ALEPH0, Cardinal.beth(1), Cardinal.beth(2))


def random_finite_presentation(rng: random.Random, max_classes=6, max_mult=3,
                               edge_prob=0.55) -> TreePresentation:
    k = rng.randint(1, max_classes)
    names = [f"c{i}" for i in range(k)]
    slots = {}
    for i, name in enumerate(names):
        entry = []
        for j in range(i + 1, k):
            if rng.random() < edge_prob:
                entry.append(Slot(names[j], FIN(rng.randint(1, max_mult))))
        slots[name] = tuple(entry)
    return TreePresentation(tuple(names), slots)


def random_rayless_infinite_presentation(rng: random.Random,
                                         max_classes=5) -> TreePresentation:
    p = random_finite_presentation(rng, max_classes, max_mult=2)
    names = list(p.names)
    slots = {c: list(p.slots[c]) for c in names}
    # plant an infinite multiplicity on a slot reachable from the root
    reach = [names[0]]
    for c in reach:
        for s in slots[c]:
            if s.child not in reach:
                reach.append(s.child)
    spots = [(c, i) for c in reach for i in range(len(slots[c]))]
    if not spots:
        leaf = "leafx"
        names.append(leaf)
        slots[leaf] = []
        slots[names[0]].append(Slot(leaf, rng.choice(INFINITES)))
    else:
        c, i = rng.choice(spots)
        slots[c][i] = Slot(slots[c][i].child, rng.choice(INFINITES))
    return TreePresentation(tuple(names), {c: tuple(s) for c, s in slots.items()})


def random_asymmetric_finite_presentation(rng: random.Random,
                                          max_tries=200) -> TreePresentation:
    """A finite presentation denoting a rigid tree (motion beyond every
    cardinal by the asymmetry convention)."""
    for _ in range(max_tries):
        p = random_finite_presentation(rng, max_classes=6, max_mult=2,
                                       edge_prob=0.5)
        if motion_presented(p) is None:
            return p
    raise AssertionError("could not generate an asymmetric presentation")


def random_double_ray_presentation(rng: random.Random) -> TreePresentation:
    """Cyclic presentation with rigid decorations; candidates for the
    double-ray replay (filtering still required)."""
    k = rng.randint(1, 3)
    cyc = [f"r{i}" for i in range(k)]
    names = list(cyc)
    slots = {c: [] for c in cyc}
    for i, c in enumerate(cyc):
        mult = rng.choice([FIN(1), FIN(2), FIN(3), ALEPH0,
                           Cardinal.beth(1), Cardinal.beth(2)])
        slots[c].append(Slot(cyc[(i + 1) % k], mult))
        if rng.random() < 0.4:
            # a second ray direction
            slots[c].append(Slot(cyc[rng.randrange(k)], FIN(1)))
    # rigid finite decorations: chains of fresh classes with mult 1
    deco = 0
    for c in list(cyc):
        if rng.random() < 0.6:
            depth = rng.randint(1, 3)
            prev = None
            for d in range(depth):
                name = f"d{deco}"
                deco += 1
                names.append(name)
                slots[name] = [] if prev is None else [Slot(prev, FIN(1))]
                prev = name
            slots[c].append(Slot(prev, FIN(1)))
    return TreePresentation(tuple(names),
                            {c: tuple(s) for c, s in slots.items()})


def double_ray_replay_family(count: int, seed: int = 0):
    """Double-ray presentations with infinite motion and degrees at most
    two to the motion; Theorem replay cases."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = random_double_ray_presentation(rng)
        c = classify(p)
        if c.kind != "double-ray":
            continue
        m = motion_presented(p)
        if m is None or m.is_finite:
            continue
        mults = [s.mult for name in p.names for s in p.slots[name]]
        if any(mult > two_pow(m) for mult in mults):
            continue
        out.append(p)
    return out
