"""Finite-tree data model: parsing, canonical codes, twins, centers.

Rooted trees are normalized at construction: children of every vertex are
ordered by (subtree canonical code, label) and vertices are renumbered in
depth-first order of that arrangement, so every subtree occupies a
contiguous index range and twin classes are contiguous runs of siblings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class TreeSyntaxError(ValueError):
    """Malformed tree text; carries the offending character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DuplicateLabelError(ValueError):
    pass


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree with canonical internal ordering.

    Vertex 0 is the root; the subtree of vertex v is exactly the index
    range [v, v + sizes[v]).
    """

    labels: tuple
    parent: tuple          # parent[v], -1 for the root
    children: tuple        # tuple of tuples, canonical order
    codes: tuple           # uncolored canonical code per subtree
    sizes: tuple           # subtree vertex counts

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def root(self) -> int:
        return 0

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no vertex labelled {label!r}") from None


@dataclass(frozen=True)
class UnrootedTree:
    labels: tuple
    adj: tuple             # tuple of sorted tuples of neighbour indices

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def edges(self) -> tuple:
        out = []
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    out.append((u, v))
        return tuple(out)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no vertex labelled {label!r}") from None


@dataclass(frozen=True)
class RootedGraph:
    """Finite connected graph with a designated root (for the treelike ops)."""

    labels: tuple
    adj: tuple
    root: int

    @property
    def n(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no vertex labelled {label!r}") from None


@dataclass(frozen=True)
class SimilarityClass:
    rep: int               # representative child (least code, then label)
    tau: int
    members: tuple


@dataclass(frozen=True)
class SimilarityTable:
    """Per-vertex partition of children into twin classes."""

    classes: tuple         # classes[v] is a tuple of SimilarityClass


@dataclass(frozen=True)
class CenterResult:
    kind: str              # "vertex" or "edge"
    vertices: tuple        # one or two vertex indices
    halves_isomorphic: bool | None = None


# ---------------------------------------------------------------------------
# construction


def build_rooted(labels: Sequence[str], parents: Sequence[int]) -> RootedTree:
    """Normalize a parent-array tree (root marked with parent -1)."""
    n = len(labels)
    if n == 0:
        raise ValueError("tree must have at least one vertex")
    roots = [v for v in range(n) if parents[v] == -1]
    if len(roots) != 1:
        raise ValueError("exactly one root required")
    root = roots[0]
    kids = [[] for _ in range(n)]
    for v in range(n):
        if v != root:
            kids[parents[v]].append(v)

    order = _postorder(root, kids)
    code = [""] * n
    size = [1] * n
    for v in order:
        if kids[v]:
            size[v] = 1 + sum(size[c] for c in kids[v])
            code[v] = "(" + "".join(sorted(code[c] for c in kids[v])) + ")"
        else:
            code[v] = "()"
    for v in range(n):
        kids[v].sort(key=lambda c: (code[c], labels[c]))

    # renumber depth-first following the canonical child order
    new_index = [0] * n
    dfs = []
    stack = [root]
    while stack:
        v = stack.pop()
        new_index[v] = len(dfs)
        dfs.append(v)
        for c in reversed(kids[v]):
            stack.append(c)

    new_labels = tuple(labels[v] for v in dfs)
    new_parent = tuple(-1 if parents[v] == -1 else new_index[parents[v]] for v in dfs)
    new_children = tuple(tuple(new_index[c] for c in kids[v]) for v in dfs)
    new_codes = tuple(code[v] for v in dfs)
    new_sizes = tuple(size[v] for v in dfs)
    return RootedTree(new_labels, new_parent, new_children, new_codes, new_sizes)


def _postorder(root: int, kids: Sequence[Sequence[int]]) -> list:
    order = []
    stack = [(root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            order.append(v)
            continue
        stack.append((v, True))
        for c in kids[v]:
            stack.append((c, False))
    return order


# ---------------------------------------------------------------------------
# rooted-tree text format

_LABEL_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_")


def parse_rooted(text: str) -> RootedTree:
    """Parse the rooted-tree grammar.

    node := '*' | LABEL group? | group ; group := '(' node (',' node)* ')'.
    A bare ``*`` is an unlabelled leaf; missing labels are auto-assigned
    v0, v1, ... in depth-first input order.
    """
    labels: list = []          # raw label or None
    parents: list = []
    i, n = 0, len(text)

    def skip_ws(j):
        while j < n and text[j].isspace():
            j += 1
        return j

    stack: list = []           # open nodes awaiting ')'
    expecting_node = True
    i = skip_ws(i)
    while True:
        if expecting_node:
            if i >= n:
                raise TreeSyntaxError("expected a node", i)
            idx = len(labels)
            labels.append(None)
            parents.append(stack[-1] if stack else -1)
            if text[i] == "*":
                i += 1
            else:
                start = i
                while i < n and text[i] in _LABEL_CHARS:
                    i += 1
                if i > start:
                    labels[idx] = text[start:i]
                i = skip_ws(i)
                if i < n and text[i] == "(":
                    stack.append(idx)
                    i = skip_ws(i + 1)
                    continue
                if labels[idx] is None:
                    raise TreeSyntaxError("expected a label, '*' or '('", i)
            expecting_node = False
            i = skip_ws(i)
            continue
        # a node just finished
        if i >= n:
            if stack:
                raise TreeSyntaxError("unterminated group", i)
            break
        ch = text[i]
        if ch == ",":
            if not stack:
                raise TreeSyntaxError("',' outside a group", i)
            i = skip_ws(i + 1)
            expecting_node = True
            continue
        if ch == ")":
            if not stack:
                raise TreeSyntaxError("unmatched ')'", i)
            stack.pop()
            i = skip_ws(i + 1)
            continue
        raise TreeSyntaxError("trailing input after the root node", i)

    used = set()
    for lbl in labels:
        if lbl is None:
            continue
        if lbl in used:
            raise DuplicateLabelError(f"duplicate label {lbl!r}")
        used.add(lbl)
    counter = 0
    for idx, lbl in enumerate(labels):
        if lbl is None:
            while f"v{counter}" in used:
                counter += 1
            labels[idx] = f"v{counter}"
            used.add(labels[idx])
    return build_rooted(labels, parents)


def serialize_rooted(tree: RootedTree) -> str:
    return _serialize(tree, 0)


def _serialize(tree: RootedTree, root: int) -> str:
    out = []
    # iterative with explicit frames: (vertex, child cursor)
    stack = [(root, -1)]
    while stack:
        v, cursor = stack.pop()
        if cursor == -1:
            out.append(tree.labels[v])
            if tree.children[v]:
                out.append("(")
                stack.append((v, 0))
                stack.append((tree.children[v][0], -1))
            continue
        nxt = cursor + 1
        if nxt < len(tree.children[v]):
            out.append(",")
            stack.append((v, nxt))
            stack.append((tree.children[v][nxt], -1))
        else:
            out.append(")")
    return "".join(out)


# ---------------------------------------------------------------------------
# unrooted / graph text formats


def parse_unrooted(text: str) -> UnrootedTree:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != "tree unrooted":
        raise TreeSyntaxError("expected 'tree unrooted' header", 0)
    labels: list = []
    index: dict = {}
    pairs = []

    def vid(lbl):
        if lbl not in index:
            index[lbl] = len(labels)
            labels.append(lbl)
        return index[lbl]

    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise TreeSyntaxError(f"bad edge line {ln!r}", 0)
        u, v = vid(parts[0]), vid(parts[1])
        if u == v:
            raise TreeSyntaxError(f"self-loop {ln!r}", 0)
        pairs.append((u, v))
    if not pairs:
        # a single isolated vertex cannot be written in edge form; treat the
        # bare header plus one label line as unsupported
        raise TreeSyntaxError("unrooted tree needs at least one edge", 0)
    return unrooted_from_edges(labels, pairs)


def unrooted_from_edges(labels: Sequence[str], pairs: Iterable[tuple]) -> UnrootedTree:
    n = len(labels)
    adj = [[] for _ in range(n)]
    seen = set()
    for u, v in pairs:
        e = (min(u, v), max(u, v))
        if e in seen:
            raise ValueError(f"duplicate edge {e}")
        seen.add(e)
        adj[u].append(v)
        adj[v].append(u)
    if len(seen) != n - 1:
        raise ValueError("not a tree: edge count must be n - 1")
    _check_connected(adj)
    return UnrootedTree(tuple(labels), tuple(tuple(sorted(a)) for a in adj))


def parse_rooted_graph(text: str) -> RootedGraph:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("graph root "):
        raise TreeSyntaxError("expected 'graph root <LABEL>' header", 0)
    root_label = lines[0][len("graph root "):].strip()
    labels: list = [root_label]
    index = {root_label: 0}
    adj: list = [[]]

    def vid(lbl):
        if lbl not in index:
            index[lbl] = len(labels)
            labels.append(lbl)
            adj.append([])
        return index[lbl]

    seen = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise TreeSyntaxError(f"bad edge line {ln!r}", 0)
        u, v = vid(parts[0]), vid(parts[1])
        if u == v:
            raise TreeSyntaxError(f"self-loop {ln!r}", 0)
        e = (min(u, v), max(u, v))
        if e in seen:
            continue
        seen.add(e)
        adj[u].append(v)
        adj[v].append(u)
    _check_connected(adj)
    return RootedGraph(tuple(labels), tuple(tuple(sorted(a)) for a in adj), 0)


def _check_connected(adj):
    n = len(adj)
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    if len(seen) != n:
        raise ValueError("graph is not connected")


def rooted_to_unrooted(tree: RootedTree) -> UnrootedTree:
    pairs = [(tree.parent[v], v) for v in range(1, tree.n)]
    return unrooted_from_edges(tree.labels, pairs)


def root_at(utree: UnrootedTree, root: int) -> RootedTree:
    """Root an unrooted tree at the given vertex index."""
    n = utree.n
    parent = [-1] * n
    seen = {root}
    frontier = [root]
    while frontier:
        v = frontier.pop()
        for u in utree.adj[v]:
            if u not in seen:
                seen.add(u)
                parent[u] = v
                frontier.append(u)
    # build_rooted renumbers; map via labels afterwards when needed
    return build_rooted(list(utree.labels), parent)


def split_at_edge(utree: UnrootedTree, u: int, v: int) -> tuple:
    """Rooted halves of the tree after deleting edge uv (u-half, v-half)."""
    n = utree.n

    def half(start, banned):
        comp = [start]
        seen = {start, banned}
        parent = {start: -1}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in utree.adj[x]:
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    comp.append(y)
                    frontier.append(y)
        labels = [utree.labels[x] for x in comp]
        local = {x: i for i, x in enumerate(comp)}
        pa = [(-1 if parent[x] == -1 else local[parent[x]]) for x in comp]
        return build_rooted(labels, pa)

    return half(u, v), half(v, u)


# ---------------------------------------------------------------------------
# canonical codes


def ahu_canonical(tree: RootedTree, coloring: Iterable[str] | None = None) -> str:
    """Canonical code of the whole rooted tree.

    With ``coloring`` (labels of the selected vertices) the code additionally
    separates color classes: equal codes iff color-isomorphic.
    """
    if coloring is None:
        return tree.codes[0]
    selected = frozenset(tree.index_of(l) for l in coloring)
    return colored_codes(tree, selected)[0]


def colored_codes(tree: RootedTree, selected: frozenset) -> tuple:
    """Canonical code of every subtree under a 0/1 vertex coloring."""
    n = tree.n
    code = [""] * n
    for v in sorted(range(n), key=lambda x: tree.sizes[x]):
        bit = "1" if v in selected else "0"
        if tree.children[v]:
            inner = "".join(sorted(code[c] for c in tree.children[v]))
            code[v] = "(" + bit + inner + ")"
        else:
            code[v] = "(" + bit + ")"
    return tuple(code)


def subtree_size(tree: RootedTree, v: int) -> int:
    return tree.sizes[v]


def similarity(tree: RootedTree) -> SimilarityTable:
    """Twin classes of the children of every vertex.

    Children are already sorted by (code, label), so classes are contiguous
    runs of equal codes and the first member is the representative.
    """
    per_vertex = []
    for v in range(tree.n):
        classes = []
        run: list = []
        for c in tree.children[v]:
            if run and tree.codes[c] != tree.codes[run[0]]:
                classes.append(SimilarityClass(run[0], len(run), tuple(run)))
                run = []
            run.append(c)
        if run:
            classes.append(SimilarityClass(run[0], len(run), tuple(run)))
        per_vertex.append(tuple(classes))
    return SimilarityTable(tuple(per_vertex))


# ---------------------------------------------------------------------------
# center


def center(utree: UnrootedTree) -> CenterResult:
    """Classic leaf-peeling center; reports half isomorphism for an edge."""
    n = utree.n
    if n == 1:
        return CenterResult("vertex", (0,))
    deg = [len(utree.adj[v]) for v in range(n)]
    layer = [v for v in range(n) if deg[v] <= 1]
    remaining = n
    while remaining > 2:
        nxt = []
        for v in layer:
            deg[v] = 0
            for u in utree.adj[v]:
                if deg[u] > 0:
                    deg[u] -= 1
                    if deg[u] == 1:
                        nxt.append(u)
        remaining -= len(layer)
        layer = nxt
    rest = sorted(layer)
    if len(rest) == 1:
        return CenterResult("vertex", (rest[0],))
    u, v = rest
    hu, hv = split_at_edge(utree, u, v)
    return CenterResult("edge", (u, v), hu.codes[0] == hv.codes[0])


def free_canonical(utree: UnrootedTree, selected_labels: Iterable[str] = ()) -> str:
    """Canonical code of an unrooted tree, optionally colored.

    Two unrooted trees get equal codes iff (color-)isomorphic.
    """
    sel = frozenset(selected_labels)
    c = center(utree)
    if c.kind == "vertex":
        rooted = root_at(utree, c.vertices[0])
        idx = frozenset(i for i, l in enumerate(rooted.labels) if l in sel)
        return "V" + colored_codes(rooted, idx)[0]
    u, v = c.vertices
    hu, hv = split_at_edge(utree, u, v)
    cu = colored_codes(hu, frozenset(i for i, l in enumerate(hu.labels) if l in sel))[0]
    cv = colored_codes(hv, frozenset(i for i, l in enumerate(hv.labels) if l in sel))[0]
    a, b = sorted((cu, cv))
    return "E" + a + "|" + b
