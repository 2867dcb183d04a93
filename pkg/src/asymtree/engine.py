"""Exact asymmetrizing-set counting, motion, construction, verification.

Counting follows the twin-class product recursion: a vertex contributes a
factor 2 for its own membership and each twin class of children contributes
binom(a(child), tau).  Construction and enumeration produce one canonical
representative per equivalence class, ordered by (set size, sorted
depth-first index sequence), via lazy heap-merged streams per subtree shape.
"""

from __future__ import annotations

import functools
import heapq
import math
import sys
from dataclasses import dataclass

from .trees import (
    RootedTree,
    UnrootedTree,
    center,
    colored_codes,
    root_at,
    similarity,
    split_at_edge,
)


@dataclass(frozen=True)
class AsymSet:
    labels: frozenset
    rooted: bool
    verified: bool

    def render(self) -> str:
        return "{" + ",".join(sorted(self.labels)) + "}"


# ---------------------------------------------------------------------------
# counting


def count_rooted(tree: RootedTree) -> int:
    """Number of inequivalent asymmetrizing sets of the rooted tree."""
    memo: dict = {}
    sim = similarity(tree)
    for v in sorted(range(tree.n), key=lambda x: tree.sizes[x]):
        code = tree.codes[v]
        if code in memo:
            continue
        acc = 2
        for cl in sim.classes[v]:
            acc *= math.comb(memo[tree.codes[cl.rep]], cl.tau)
            if acc == 0:
                break
        memo[code] = acc
    return memo[tree.codes[0]]


def count_unrooted(utree: UnrootedTree) -> int:
    """Number of inequivalent asymmetrizing sets of the unrooted tree."""
    c = center(utree)
    if c.kind == "vertex":
        return count_rooted(root_at(utree, c.vertices[0]))
    u, v = c.vertices
    hu, hv = split_at_edge(utree, u, v)
    if hu.codes[0] != hv.codes[0]:
        return count_rooted(hu) * count_rooted(hv)
    h = count_rooted(hu)
    return math.comb(h, 2)


# ---------------------------------------------------------------------------
# motion


def motion_rooted(tree: RootedTree):
    """Minimum support of a non-identity root-fixing automorphism, or None."""
    sim = similarity(tree)
    best = None
    for v in range(tree.n):
        for cl in sim.classes[v]:
            if cl.tau >= 2:
                m = 2 * tree.sizes[cl.rep]
                if best is None or m < best:
                    best = m
    return best


def motion(utree: UnrootedTree):
    """Minimum support of a non-identity automorphism, or None if rigid."""
    c = center(utree)
    if c.kind == "vertex":
        return motion_rooted(root_at(utree, c.vertices[0]))
    u, v = c.vertices
    hu, hv = split_at_edge(utree, u, v)
    cands = [m for m in (motion_rooted(hu), motion_rooted(hv)) if m is not None]
    if hu.codes[0] == hv.codes[0]:
        cands.append(utree.n)
    return min(cands) if cands else None


# ---------------------------------------------------------------------------
# verification via colored canonical codes


def verify_rooted(tree: RootedTree, selected: frozenset) -> bool:
    """True iff the colored tree has no non-identity root-fixing automorphism."""
    codes = colored_codes(tree, selected)
    for v in range(tree.n):
        kids = tree.children[v]
        if len(kids) >= 2:
            seen = set()
            for ch in kids:
                if codes[ch] in seen:
                    return False
                seen.add(codes[ch])
    return True


def verify_unrooted(utree: UnrootedTree, selected: frozenset) -> bool:
    sel_labels = {utree.labels[i] for i in selected}
    c = center(utree)
    if c.kind == "vertex":
        rooted = root_at(utree, c.vertices[0])
        sel = frozenset(i for i, l in enumerate(rooted.labels) if l in sel_labels)
        return verify_rooted(rooted, sel)
    u, v = c.vertices
    hu, hv = split_at_edge(utree, u, v)
    su = frozenset(i for i, l in enumerate(hu.labels) if l in sel_labels)
    sv = frozenset(i for i, l in enumerate(hv.labels) if l in sel_labels)
    if not (verify_rooted(hu, su) and verify_rooted(hv, sv)):
        return False
    if hu.codes[0] == hv.codes[0]:
        if colored_codes(hu, su)[0] == colored_codes(hv, sv)[0]:
            return False
    return True


def verify_asym_set(t, labels) -> bool:
    """Label-level convenience wrapper for either tree kind."""
    sel = frozenset(t.index_of(l) for l in labels)
    if isinstance(t, RootedTree):
        return verify_rooted(t, sel)
    return verify_unrooted(t, sel)


# ---------------------------------------------------------------------------
# canonical enumeration streams
#
# A stream per subtree shape yields (size, seq) pairs, seq being the sorted
# tuple of selected local indices, one representative per equivalence class,
# ascending in (size, seq).  Streams compose: the root-membership bit and one
# selection component per twin class, merged through a heap over index
# vectors whose keys never decrease along bump successors.


def _padded_cmp(a, b):
    # lexicographic with an exhausted side sorting after (prefix rule): this
    # order of per-twin colorings minimizes the merged index sequence
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    if len(a) == len(b):
        return 0
    return 1 if len(a) < len(b) else -1


_PADDED_KEY = functools.cmp_to_key(_padded_cmp)


class _BitComponent:
    _ELEMS = ((0, ()), (1, (0,)))

    def get(self, i):
        return self._ELEMS[i] if i < 2 else None


class _LazyOrderedStream:
    """Heap-merged stream; successor keys are computed only when a further
    element is demanded, so a single get(0) never cascades."""

    def __init__(self):
        self.elems = []
        self.heap = []
        self.visited = set()
        self.pending = None

    def _seed(self, vec):
        key = self._key(vec)
        if key is not None:
            self.visited.add(vec)
            heapq.heappush(self.heap, (key, vec))

    def get(self, i):
        while len(self.elems) <= i:
            if self.pending is not None:
                vec, self.pending = self.pending, None
                for succ in self._successors(vec):
                    if succ in self.visited:
                        continue
                    k = self._key(succ)
                    if k is None:
                        continue
                    self.visited.add(succ)
                    heapq.heappush(self.heap, (k, succ))
            if not self.heap:
                break
            key, vec = heapq.heappop(self.heap)
            self.elems.append(key)
            self.pending = vec
        return self.elems[i] if i < len(self.elems) else None


class _ClassComponent(_LazyOrderedStream):
    """Selections of tau distinct child colorings placed into twin ranges."""

    def __init__(self, child_stream, offsets):
        super().__init__()
        self.child = child_stream
        self.offsets = offsets
        self.tau = len(offsets)
        self._seed(tuple(range(self.tau)))

    def _key(self, combo):
        picks = []
        for i in combo:
            e = self.child.get(i)
            if e is None:
                return None
            picks.append(e)
        total = sum(sz for sz, _ in picks)
        ordered = sorted((seq for _, seq in picks), key=_PADDED_KEY)
        merged = []
        for off, seq in zip(self.offsets, ordered):
            merged.extend(x + off for x in seq)
        return (total, tuple(merged))

    def _successors(self, combo):
        for p in range(self.tau):
            nxt = combo[p] + 1
            if p + 1 < self.tau and nxt >= combo[p + 1]:
                continue
            yield combo[:p] + (nxt,) + combo[p + 1:]


class _Stream(_LazyOrderedStream):
    def __init__(self, components):
        super().__init__()
        self.comps = components
        self._seed((0,) * len(components))

    def _key(self, vec):
        total = 0
        merged = []
        for comp, i in zip(self.comps, vec):
            e = comp.get(i)
            if e is None:
                return None
            total += e[0]
            merged.extend(e[1])
        return (total, tuple(merged))

    def _successors(self, vec):
        for p in range(len(vec)):
            yield vec[:p] + (vec[p] + 1,) + vec[p + 1:]


class _Universe:
    """Streams for every distinct subtree shape, built bottom-up."""

    def __init__(self, tree: RootedTree):
        self.tree = tree
        self.streams: dict = {}
        sim = similarity(tree)
        for v in sorted(range(tree.n), key=lambda x: tree.sizes[x]):
            code = tree.codes[v]
            if code in self.streams:
                continue
            comps = [_BitComponent()]
            for cl in sim.classes[v]:
                child = self.streams[tree.codes[cl.rep]]
                offsets = tuple(m - v for m in cl.members)
                comps.append(_ClassComponent(child, offsets))
            stream = _Stream(comps)
            stream.get(0)  # pre-pull keeps later first-element demands shallow
            self.streams[code] = stream

    def root(self) -> _Stream:
        return self.streams[self.tree.codes[0]]


def enumerate_asym_sets(tree: RootedTree, limit=None):
    """Yield canonical representatives of the asymmetrizing-set classes.

    Pairwise inequivalent, ascending in (size, sorted index sequence); the
    total number over an unbounded limit equals count_rooted.
    """
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * tree.n + 2000))
    uni = _Universe(tree)
    stream = uni.root()
    i = 0
    while limit is None or i < limit:
        e = stream.get(i)
        if e is None:
            return
        sel = frozenset(e[1])
        ok = verify_rooted(tree, sel)
        yield AsymSet(frozenset(tree.labels[x] for x in sel), True, ok)
        i += 1


def find_asym_set(t):
    """Canonically least asymmetrizing set, or None if there is none."""
    if isinstance(t, RootedTree):
        for s in enumerate_asym_sets(t, 1):
            return s
        return None
    return _find_unrooted(t)


def _find_unrooted(utree: UnrootedTree):
    c = center(utree)
    if c.kind == "vertex":
        rooted = root_at(utree, c.vertices[0])
        found = find_asym_set(rooted)
        if found is None:
            return None
        ok = verify_unrooted(utree, frozenset(utree.index_of(l) for l in found.labels))
        return AsymSet(found.labels, False, ok)

    u, v = c.vertices
    hu, hv = split_at_edge(utree, u, v)
    # canonical half order: (code, root label)
    if (hv.codes[0], hv.labels[0]) < (hu.codes[0], hu.labels[0]):
        hu, hv = hv, hu
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * utree.n + 2000))
    s1 = _Universe(hu).root()
    s2 = _Universe(hv).root()
    if hu.codes[0] != hv.codes[0]:
        e1, e2 = s1.get(0), s2.get(0)
        if e1 is None or e2 is None:
            return None
        pick1, pick2 = e1[1], e2[1]
    else:
        e1, e2 = s1.get(0), s1.get(1)
        if e1 is None or e2 is None:
            return None
        pick1, pick2 = sorted((e1[1], e2[1]), key=_PADDED_KEY)
    labels = frozenset(
        [hu.labels[x] for x in pick1] + [hv.labels[x] for x in pick2]
    )
    ok = verify_unrooted(utree, frozenset(utree.index_of(l) for l in labels))
    return AsymSet(labels, False, ok)
