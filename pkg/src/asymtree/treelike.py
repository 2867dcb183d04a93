"""Even-level contraction with set lifts, and spanning-forest
asymmetrization of rooted graphs at desk scale.

The contraction merges every even-depth vertex with its children; a
contracted vertex is represented in the original tree by its even member,
so a lifted set consists of even-depth vertices and every selected vertex
keeps an unselected odd neighbour.  The forest extraction and component
asymmetrization follow the shortest-path parent structure; at finite scale
the procedure is an attempt with a certificate, not a guaranteed
construction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .engine import AsymSet, verify_rooted
from .oracle import SizeCapExceeded, _group_on_utree, graph_automorphisms
from .trees import (
    RootedGraph,
    RootedTree,
    UnrootedTree,
    build_rooted,
    free_canonical,
)


@dataclass(frozen=True)
class ContractionMap:
    tree: RootedTree
    tprime: RootedTree
    block_of: tuple            # T index -> T' index
    members: tuple             # T' index -> tuple of T indices, even member first


@dataclass(frozen=True)
class TreelikeCheck:
    records: tuple             # (label, depth, has_private_child)
    all_interior_pass: bool


@dataclass(frozen=True)
class ForestDecomposition:
    graph: RootedGraph
    edges: tuple               # forest edges (parent, child) by graph index
    components: tuple          # tuples of graph indices
    w_component: int           # position of the root's component


@dataclass(frozen=True)
class TreelikeFailure:
    reason: str                # component | inequivalence | verification


def _depths(tree: RootedTree) -> list:
    depth = [0] * tree.n
    for v in range(1, tree.n):
        depth[v] = depth[tree.parent[v]] + 1
    return depth


def contract_even_levels(tree: RootedTree) -> ContractionMap:
    """Contract every edge from an even-depth vertex to its children."""
    depth = _depths(tree)
    evens = [v for v in range(tree.n) if depth[v] % 2 == 0]
    members = {v: [v] + [c for c in tree.children[v]] for v in evens}
    block_head = {}
    for v in evens:
        for m in members[v]:
            block_head[m] = v

    labels = [tree.labels[v] for v in evens]
    head_pos = {v: i for i, v in enumerate(evens)}
    parents = []
    for v in evens:
        if v == 0:
            parents.append(-1)
        else:
            # the parent of an even vertex is odd and sits in its own
            # parent's block
            parents.append(head_pos[block_head[tree.parent[v]]])
    tprime = build_rooted(labels, parents)

    tp_index = {l: i for i, l in enumerate(tprime.labels)}
    block_of = tuple(tp_index[tree.labels[block_head[v]]] for v in range(tree.n))
    out_members = [()] * tprime.n
    for v in evens:
        out_members[tp_index[tree.labels[v]]] = tuple(members[v])
    return ContractionMap(tree, tprime, block_of, tuple(out_members))


def non_exposed(tree: RootedTree, selected: frozenset) -> frozenset:
    """Selected vertices all of whose tree neighbours are selected."""
    out = set()
    for v in selected:
        nbrs = list(tree.children[v])
        if v != 0:
            nbrs.append(tree.parent[v])
        if nbrs and all(u in selected for u in nbrs):
            out.add(v)
        if not nbrs:
            out.add(v)
    return frozenset(out)


def lift_asym_set(cmap: ContractionMap, s_prime_labels, mode: str = "plain") -> AsymSet:
    """Lift a verified contracted-tree set back to the original tree.

    plain: the selected blocks contribute their even representatives.
    augmented: additionally marks the root by selecting it together with
    its children, or only an exceptional child whose children are all
    selected; with a root of degree at most one the plain set is returned
    unchanged (it already has no unexposed vertex).
    """
    if mode not in ("plain", "augmented"):
        raise ValueError(f"unknown lift mode {mode!r}")
    tree, tprime = cmap.tree, cmap.tprime
    sel_prime = frozenset(tprime.index_of(l) for l in s_prime_labels)
    if not verify_rooted(tprime, sel_prime):
        raise ValueError("contracted set does not verify on the contraction")

    plain = {cmap.members[b][0] for b in sel_prime}
    if mode == "plain":
        sel = frozenset(plain)
        return AsymSet(frozenset(tree.labels[v] for v in sel), True,
                       verify_rooted(tree, sel))

    kids = tree.children[0]
    if len(kids) <= 1:
        sel = frozenset(plain)
        return AsymSet(frozenset(tree.labels[v] for v in sel), True,
                       verify_rooted(tree, sel))
    exceptional = [u for u in kids
                   if all(c in plain for c in tree.children[u])]
    if exceptional:
        sel = frozenset(plain | {0, exceptional[0]})
    else:
        sel = frozenset(plain | {0} | set(kids))
    return AsymSet(frozenset(tree.labels[v] for v in sel), True,
                   verify_rooted(tree, sel))


# ---------------------------------------------------------------------------
# tree-like graphs


def _graph_depths(graph: RootedGraph) -> list:
    dist = [-1] * graph.n
    dist[graph.root] = 0
    frontier = [graph.root]
    while frontier:
        nxt = []
        for v in frontier:
            for u in graph.adj[v]:
                if dist[u] == -1:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return dist


def check_treelike(graph: RootedGraph, horizon: int) -> TreelikeCheck:
    """Does every vertex closer than the horizon have a child of which it
    is the only parent in the shortest-path order?"""
    dist = _graph_depths(graph)
    if min(dist) < 0:
        raise ValueError("graph is not connected")
    records = []
    ok_all = True
    for y in range(graph.n):
        if dist[y] >= horizon:
            continue
        good = False
        for x in graph.adj[y]:
            if dist[x] != dist[y] + 1:
                continue
            parents = [z for z in graph.adj[x] if dist[z] == dist[y]]
            if parents == [y]:
                good = True
                break
        records.append((graph.labels[y], dist[y], good))
        ok_all = ok_all and good
    return TreelikeCheck(tuple(records), ok_all)


def extract_forest(graph: RootedGraph) -> ForestDecomposition:
    """Edges to vertices with a unique shortest-path parent; components."""
    dist = _graph_depths(graph)
    if min(dist) < 0:
        raise ValueError("graph is not connected")
    f_edges = []
    nbr = [[] for _ in range(graph.n)]
    for x in range(graph.n):
        if x == graph.root:
            continue
        parents = [z for z in graph.adj[x] if dist[z] == dist[x] - 1]
        if len(parents) == 1:
            y = parents[0]
            f_edges.append((y, x))
            nbr[y].append(x)
            nbr[x].append(y)
    comp_of = [-1] * graph.n
    components = []
    for v in range(graph.n):
        if comp_of[v] != -1:
            continue
        comp = [v]
        comp_of[v] = len(components)
        frontier = [v]
        while frontier:
            a = frontier.pop()
            for b in nbr[a]:
                if comp_of[b] == -1:
                    comp_of[b] = len(components)
                    comp.append(b)
                    frontier.append(b)
        components.append(tuple(sorted(comp)))
    return ForestDecomposition(graph, tuple(f_edges), tuple(components),
                               comp_of[graph.root])


def _component_tree(decomp: ForestDecomposition, ci: int):
    verts = decomp.components[ci]
    local = {g: i for i, g in enumerate(verts)}
    labels = tuple(decomp.graph.labels[g] for g in verts)
    adj = [[] for _ in verts]
    for a, b in decomp.edges:
        if a in local and b in local:
            adj[local[a]].append(local[b])
            adj[local[b]].append(local[a])
    return UnrootedTree(labels, tuple(tuple(sorted(x)) for x in adj)), verts


def _admissible_sets(utree: UnrootedTree, is_root_comp: bool, root_local,
                     unrestricted_root: bool):
    """Subsets with trivial stabilizer meeting the exposure restriction,
    in canonical (size, index tuple) order."""
    from itertools import combinations

    group = _group_on_utree(utree, max_n=max(16, utree.n))
    perms = group.non_identity()
    out = []
    n = utree.n
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            sel = frozenset(combo)
            if any(frozenset(p[i] for i in sel) == sel for p in perms):
                continue
            inside = [v for v in sel
                      if utree.adj[v] and all(u in sel for u in utree.adj[v])
                      or not utree.adj[v]]
            if is_root_comp:
                if not unrestricted_root and len(inside) != 1:
                    continue
            else:
                if inside:
                    continue
            out.append(sel)
    return out


def asymmetrize_treelike(graph: RootedGraph, max_n=None):
    """Union of admissible, pairwise inequivalent component asymmetrizers.

    Success returns a set with trivial stabilizer in the full automorphism
    group (root not assumed fixed); at finite scale each step can fail,
    reported as a TreelikeFailure with the stage that ran out.
    """
    cap = max_n if max_n is not None else int(os.environ.get("ASYMTREE_MAX_N", "12"))
    if graph.n > cap:
        raise SizeCapExceeded(f"n={graph.n} exceeds cap {cap}")
    decomp = extract_forest(graph)
    root_deg = len(graph.adj[graph.root])

    comps = []
    for ci in range(len(decomp.components)):
        utree, verts = _component_tree(decomp, ci)
        is_root = ci == decomp.w_component
        sets = _admissible_sets(utree, is_root, None, root_deg <= 1)
        if not sets:
            return TreelikeFailure("component")
        comps.append((utree, verts, sets))

    group = graph_automorphisms(graph, fix_root=False, max_n=cap)
    perms = group.non_identity()
    iso_key = [free_canonical(utree) for utree, _, _ in comps]

    chosen = [None] * len(comps)
    reached_complete = [False]

    def colored_key(i, sel):
        utree = comps[i][0]
        return free_canonical(utree, (utree.labels[v] for v in sel))

    def backtrack(i):
        if i == len(comps):
            reached_complete[0] = True
            total = set()
            for (utree, verts, _), sel in zip(comps, chosen):
                total.update(verts[v] for v in sel)
            if all(frozenset(p[x] for x in total) != total for p in perms):
                return frozenset(total)
            return None
        for sel in comps[i][2]:
            key = colored_key(i, sel)
            clash = False
            for j in range(i):
                if iso_key[j] == iso_key[i] and colored_key(j, chosen[j]) == key:
                    clash = True
                    break
            if clash:
                continue
            chosen[i] = sel
            result = backtrack(i + 1)
            if result is not None:
                return result
            chosen[i] = None
        return None

    result = backtrack(0)
    if result is None:
        return TreelikeFailure("verification" if reached_complete[0] else "inequivalence")
    return AsymSet(frozenset(graph.labels[v] for v in result), False, True)
