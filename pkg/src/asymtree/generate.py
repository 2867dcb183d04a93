"""Exhaustive and randomized generation of test trees.

Exhaustive: all isomorphism classes of rooted and of unrooted trees up to a
given order, built from canonical nested-multiset shapes.

Randomized: uniform plane trees obtained by unranking balanced parenthesis
sequences under the ballot counting; the rank is drawn from a seeded PRNG,
so corpora are reproducible from (n, seed) alone.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache

from .trees import RootedTree, UnrootedTree, build_rooted, free_canonical, rooted_to_unrooted


# ---------------------------------------------------------------------------
# exhaustive enumeration: shapes are nested sorted tuples


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    """All rooted tree shapes with n vertices, as canonical nested tuples."""
    if n == 1:
        return ((),)
    # items: all shapes of size < n, ordered; a shape of size n is a
    # nondecreasing multiset of items totalling n - 1
    items = []
    for k in range(1, n):
        for s in _shapes(k):
            items.append((k, s))
    out = []

    def extend(prefix, remaining, start):
        if remaining == 0:
            out.append(tuple(sorted(prefix)))
            return
        for idx in range(start, len(items)):
            k, s = items[idx]
            if k > remaining:
                continue
            prefix.append(s)
            extend(prefix, remaining - k, idx)
            prefix.pop()

    extend([], n - 1, 0)
    return tuple(dict.fromkeys(out))


def _shape_to_tree(shape) -> RootedTree:
    labels = []
    parents = []

    def walk(s, parent):
        idx = len(labels)
        labels.append(f"v{idx}")
        parents.append(parent)
        for child in s:
            walk(child, idx)

    walk(shape, -1)
    return build_rooted(labels, parents)


def all_rooted_trees(n: int) -> list:
    """One RootedTree per isomorphism class of rooted trees on n vertices."""
    return [_shape_to_tree(s) for s in _shapes(n)]


def all_unrooted_trees(n: int) -> list:
    """One UnrootedTree per isomorphism class of free trees on n vertices."""
    seen = {}
    for t in all_rooted_trees(n):
        if n == 1:
            u = UnrootedTree(t.labels, ((),))
        else:
            u = rooted_to_unrooted(t)
        key = free_canonical(u)
        if key not in seen:
            seen[key] = u
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# random plane trees by rank


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


def _unrank_parents(n: int, rank: int) -> list:
    """Parent array (plane order) of the rank-th plane tree on n vertices.

    A plane tree corresponds to a balanced sequence of 2(n-1) parentheses
    (edge walk).  The sequence is built left to right: at each step the
    number of completions that start with '(' is computed by the ballot
    formula, and the rank selects the branch.
    """
    m = n - 1
    if not 0 <= rank < catalan(m):
        raise ValueError("rank out of range")

    # count(o, d) = number of suffixes with o '(' left and d unmatched '(':
    # C(2o + d, o) * (d + 1) / (o + d + 1).  Maintained incrementally; the
    # ratio count(o-1, d+1) / count(o, d) is o*(d+2) / ((2o+d)*(d+1)).
    parents = [-1]
    current = 0
    o, d = m, 0
    r = rank
    total = catalan(m)
    for _ in range(2 * m):
        if o > 0:
            with_open = total * o * (d + 2) // ((2 * o + d) * (d + 1))
        else:
            with_open = 0
        if r < with_open:
            total = with_open
            o -= 1
            d += 1
            parents.append(current)
            current = len(parents) - 1
        else:
            r -= with_open
            total -= with_open
            d -= 1
            current = parents[current]
    return parents


def unrank_plane_tree(n: int, rank: int) -> RootedTree:
    """The rank-th plane tree with n vertices, 0 <= rank < catalan(n - 1)."""
    parents = _unrank_parents(n, rank)
    return build_rooted([f"v{i}" for i in range(n)], parents)


def random_rooted_tree(n: int, seed: int) -> RootedTree:
    """Reproducible random rooted tree: a seeded rank into the plane trees."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return build_rooted(["v0"], [-1])
    rank = random.Random(seed).randrange(catalan(n - 1))
    return unrank_plane_tree(n, rank)


def random_binary_tree(n: int, seed: int) -> RootedTree:
    """Reproducible random rooted tree with at most two children per vertex.

    Obtained from a random plane tree on n + 1 vertices through the
    left-child right-sibling correspondence.  Twin classes then have size at
    most 2 over subtrees admitting at least 2 colorings, so these trees are
    always asymmetrizable; they exercise the construction path at scale.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return build_rooted(["v0"], [-1])
    rank = random.Random(seed).randrange(catalan(n))
    plane = _unrank_parents(n + 1, rank)
    first_child = [-1] * (n + 1)
    next_sibling = [-1] * (n + 1)
    prev_child_of = [-1] * (n + 1)
    for v in range(1, n + 1):
        p = plane[v]
        if first_child[p] == -1:
            first_child[p] = v
        else:
            next_sibling[prev_child_of[p]] = v
        prev_child_of[p] = v
    # plane root 0 has no sibling; its first child becomes the binary root
    parents = [-2] * (n + 1)
    parents[first_child[0]] = -1
    order = [first_child[0]]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for c in (first_child[v], next_sibling[v]):
            if c != -1:
                parents[c] = v
                order.append(c)
    local = {v: i for i, v in enumerate(order)}
    labels = [f"v{i}" for i in range(n)]
    pa = [-1] * n
    for v in order:
        pa[local[v]] = -1 if parents[v] == -1 else local[parents[v]]
    return build_rooted(labels, pa)
