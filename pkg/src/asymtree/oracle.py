"""Brute-force ground truth: automorphism listings, orbit counts, motion.

Everything here is exhaustive and intended for small inputs only; the
counting and construction engines are differentially tested against it.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .trees import RootedGraph, RootedTree, UnrootedTree, center, root_at, split_at_edge


class SizeCapExceeded(ValueError):
    pass


DEFAULT_MAX_N = 12
DEFAULT_MAX_GROUP = 1_000_000


def _max_n(override=None):
    if override is not None:
        return override
    env = os.environ.get("ASYMTREE_MAX_N")
    return int(env) if env else DEFAULT_MAX_N


@dataclass(frozen=True)
class PermutationGroup:
    """Explicit list of vertex permutations (tuples mapping index to index)."""

    perms: tuple
    closed: bool = True

    @property
    def order(self) -> int:
        return len(self.perms)

    def non_identity(self):
        n = len(self.perms[0]) if self.perms else 0
        ident = tuple(range(n))
        return [p for p in self.perms if p != ident]


# ---------------------------------------------------------------------------
# rooted-tree automorphisms via the twin decomposition


def _shape_autos(tree: RootedTree, v: int, memo: dict, cap: int) -> list:
    """All automorphisms of the subtree at v, as local permutations.

    Local index i stands for vertex v + i; the normalized layout makes
    subtrees with equal codes structurally identical, so results memoize
    per canonical code.
    """
    code = tree.codes[v]
    if code in memo:
        return memo[code]
    size = tree.sizes[v]
    # group children into twin classes (contiguous equal-code runs)
    classes = []
    run = []
    for c in tree.children[v]:
        if run and tree.codes[c] != tree.codes[run[0]]:
            classes.append(run)
            run = []
        run.append(c)
    if run:
        classes.append(run)

    per_class_options = []
    total = 1
    for members in classes:
        child_autos = _shape_autos(tree, members[0], memo, cap)
        tau = len(members)
        count = len(child_autos) ** tau
        for k in range(2, tau + 1):
            count *= k
        total *= count
        if total > cap:
            raise SizeCapExceeded(f"automorphism group larger than {cap}")
        offsets = [m - v for m in members]
        csize = tree.sizes[members[0]]
        options = []
        for sigma in itertools.permutations(range(tau)):
            for picks in itertools.product(child_autos, repeat=tau):
                options.append((sigma, picks, offsets, csize))
        per_class_options.append(options)

    autos = []
    for combo in itertools.product(*per_class_options):
        perm = [0] * size
        for sigma, picks, offsets, csize in combo:
            for i, j in enumerate(sigma):
                src, dst, sub = offsets[i], offsets[j], picks[i]
                for k in range(csize):
                    perm[src + k] = dst + sub[k]
        autos.append(tuple(perm))
    memo[code] = autos
    return autos


def _rooted_group(tree: RootedTree, cap: int) -> PermutationGroup:
    return PermutationGroup(tuple(_shape_autos(tree, 0, {}, cap)))


def tree_automorphisms(utree: UnrootedTree, fixed_root=None, max_n=None,
                       max_group: int = DEFAULT_MAX_GROUP):
    """Full automorphism group of a finite tree.

    Returns (group, rooted_view, index_map) where ``rooted_view`` is the
    internally rooted tree whose indices the permutations use, and
    ``index_map[i]`` is the utree index of rooted-view vertex i.
    With ``fixed_root`` (an index of utree) only root-fixing maps are kept.
    """
    cap_n = _max_n(max_n)
    if utree.n > cap_n:
        raise SizeCapExceeded(f"n={utree.n} exceeds cap {cap_n}")

    if fixed_root is not None:
        rooted = root_at(utree, fixed_root)
        group = _rooted_group(rooted, max_group)
        imap = tuple(utree.index_of(l) for l in rooted.labels)
        return group, rooted, imap

    c = center(utree)
    if c.kind == "vertex":
        rooted = root_at(utree, c.vertices[0])
        group = _rooted_group(rooted, max_group)
        imap = tuple(utree.index_of(l) for l in rooted.labels)
        return group, rooted, imap

    u, v = c.vertices
    hu, hv = split_at_edge(utree, u, v)
    # assemble a rooted view: u-half indices first, then v-half
    h = hu.n
    labels = hu.labels + hv.labels
    memo_u: dict = {}
    au = _shape_autos(hu, 0, memo_u, max_group)
    av = _shape_autos(hv, 0, {}, max_group)
    perms = []
    for pu in au:
        for pv in av:
            if len(perms) + 1 > max_group:
                raise SizeCapExceeded(f"automorphism group larger than {max_group}")
            perms.append(tuple(pu) + tuple(h + x for x in pv))
    if hu.codes[0] == hv.codes[0]:
        # half-swapping maps: any isomorphism each way; the normalized halves
        # are structurally identical, so isomorphisms are just half autos
        for p1 in au:
            for p2 in av:
                if len(perms) + 1 > max_group:
                    raise SizeCapExceeded(f"automorphism group larger than {max_group}")
                perm = tuple(h + p1[i] for i in range(h)) + tuple(p2[j] for j in range(h))
                perms.append(perm)
    imap = tuple(utree.index_of(l) for l in labels)
    # rooted view for the edge case keeps both halves; callers only need imap
    return PermutationGroup(tuple(perms)), (hu, hv), imap


def _group_on_utree(utree: UnrootedTree, fixed_root=None, max_n=None,
                    max_group: int = DEFAULT_MAX_GROUP) -> PermutationGroup:
    """Automorphisms expressed directly on the utree's own indices."""
    group, _, imap = tree_automorphisms(utree, fixed_root, max_n, max_group)
    inv = [0] * len(imap)
    for i, g in enumerate(imap):
        inv[g] = i
    out = []
    for p in group.perms:
        out.append(tuple(imap[p[inv[x]]] for x in range(utree.n)))
    return PermutationGroup(tuple(out))


# ---------------------------------------------------------------------------
# subset orbit counting and motion


def oracle_count_asym(utree: UnrootedTree, fixed_root=None, max_n=None,
                      max_group: int = DEFAULT_MAX_GROUP) -> int:
    """Number of inequivalent subsets with trivial setwise stabilizer."""
    cap_n = max_n if max_n is not None else max(_max_n(), 16)
    if utree.n > 16 or utree.n > cap_n:
        raise SizeCapExceeded(f"n={utree.n} exceeds the subset-sweep cap")
    group = _group_on_utree(utree, fixed_root, max_n=cap_n, max_group=max_group)
    perms = sorted(group.non_identity(),
                   key=lambda p: sum(1 for i, x in enumerate(p) if x != i))
    n = utree.n
    raw = 0
    for mask in range(1 << n):
        bits = [i for i in range(n) if mask >> i & 1]
        trivial = True
        for p in perms:
            image = 0
            for i in bits:
                image |= 1 << p[i]
            if image == mask:
                trivial = False
                break
        if trivial:
            raw += 1
    assert raw % group.order == 0
    return raw // group.order


def oracle_motion(utree: UnrootedTree, max_n=None,
                  max_group: int = DEFAULT_MAX_GROUP):
    """Minimum support of a non-identity automorphism, or None if rigid."""
    group = _group_on_utree(utree, None, max_n, max_group)
    best = None
    for p in group.non_identity():
        moved = sum(1 for i, x in enumerate(p) if x != i)
        if best is None or moved < best:
            best = moved
    return best


def oracle_motion_rooted(utree: UnrootedTree, root: int, max_n=None,
                         max_group: int = DEFAULT_MAX_GROUP):
    group = _group_on_utree(utree, root, max_n, max_group)
    best = None
    for p in group.non_identity():
        moved = sum(1 for i, x in enumerate(p) if x != i)
        if best is None or moved < best:
            best = moved
    return best


def stabilizer_is_trivial(utree: UnrootedTree, selected, fixed_root=None,
                          max_n=None, max_group: int = DEFAULT_MAX_GROUP) -> bool:
    """Permutation-search check that ``selected`` has trivial stabilizer."""
    group = _group_on_utree(utree, fixed_root, max_n, max_group)
    sel = frozenset(selected)
    for p in group.non_identity():
        if frozenset(p[i] for i in sel) == sel:
            return False
    return True


# ---------------------------------------------------------------------------
# general graph automorphisms (backtracking)


def graph_automorphisms(graph: RootedGraph, fix_root: bool = False,
                        max_n=None) -> PermutationGroup:
    """Exhaustive automorphism search with degree and distance pruning."""
    cap_n = _max_n(max_n)
    n = graph.n
    if n > cap_n:
        raise SizeCapExceeded(f"n={n} exceeds cap {cap_n}")
    adj = [frozenset(a) for a in graph.adj]
    deg = [len(a) for a in adj]
    dist = _bfs_dist(graph.adj, graph.root)

    def invariant(v):
        return (deg[v], dist[v] if fix_root else -1,
                tuple(sorted(deg[u] for u in adj[v])))

    inv = [invariant(v) for v in range(n)]
    order = sorted(range(n), key=lambda v: (len([u for u in range(n) if inv[u] == inv[v]]), v))
    candidates = [[u for u in range(n) if inv[u] == inv[v]] for v in range(n)]

    result = []
    assign = [-1] * n
    used = [False] * n

    def backtrack(k):
        if k == n:
            result.append(tuple(assign))
            return
        v = order[k]
        for u in candidates[v]:
            if used[u]:
                continue
            ok = True
            for w in adj[v]:
                if assign[w] != -1 and assign[w] not in adj[u]:
                    ok = False
                    break
            if not ok:
                continue
            if fix_root and v == graph.root and u != graph.root:
                continue
            assign[v] = u
            used[u] = True
            backtrack(k + 1)
            assign[v] = -1
            used[u] = False

    backtrack(0)
    return PermutationGroup(tuple(sorted(result)))


def _bfs_dist(adj, start):
    n = len(adj)
    dist = [-1] * n
    dist[start] = 0
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for u in adj[v]:
                if dist[u] == -1:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return dist
