"""Finitely presented rooted trees with cardinal child multiplicities.

A presentation is a finite system of classes; a vertex of class c has, for
each slot (d, mu), exactly mu children of class d.  Cycles in the class
graph produce rays.  The module classifies the denoted tree (finite,
rayless infinite, one-ended, or containing a double ray), computes its
size, motion and Schmidt-style rank, and evaluates the asymmetrizing-set
count symbolically through the matching theorem for each case.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cardinal import (
    ALEPH0,
    FIN0,
    FIN1,
    FIN2,
    Cardinal,
    binom,
    parse_cardinal,
    product_family,
    sum_family,
    two_pow,
)
from .engine import find_asym_set
from .trees import RootedTree, build_rooted


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Slot:
    child: str
    mult: Cardinal


@dataclass(frozen=True)
class TreePresentation:
    names: tuple                # class names, root first
    slots: dict                 # name -> tuple of Slot

    @property
    def root(self) -> str:
        return self.names[0]


@dataclass(frozen=True)
class Classification:
    kind: str                   # finite | rayless | one-ended | double-ray
    size: Cardinal
    reaches_cycle: dict         # class -> bool
    on_double_ray: dict         # class -> bool


@dataclass(frozen=True)
class PresentedReport:
    classification: str
    size: Cardinal
    motion: Cardinal | None     # None means asymmetric
    count: Cardinal
    theorem: str
    rank: int | None = None


@dataclass(frozen=True)
class Certificate:
    truncation: RootedTree
    selected: frozenset          # labels of the colored vertices
    cut: frozenset               # labels whose true subtrees extend beyond
    depth: int


# ---------------------------------------------------------------------------
# parsing

_NAME_CHARS = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_")


def parse_presentation(text: str) -> TreePresentation:
    """Parse the class-definition grammar; '/' separates inline lines."""
    chunks = []
    for raw_line in text.splitlines():
        chunks.extend(part.strip() for part in raw_line.split("/"))
    names = []
    slots = {}
    for chunk in chunks:
        if not chunk:
            continue
        if not chunk.startswith("class"):
            raise PresentationError(f"expected 'class', got {chunk!r}")
        body = chunk[len("class"):].strip()
        if ":" not in body:
            raise PresentationError(f"missing ':' in {chunk!r}")
        name, _, rest = body.partition(":")
        name = name.strip()
        if not name or not set(name) <= _NAME_CHARS:
            raise PresentationError(f"bad class name {name!r}")
        if name in slots:
            raise PresentationError(f"duplicate class {name!r}")
        entry = []
        rest = rest.strip()
        if rest:
            for part in rest.split(","):
                if "*" not in part:
                    raise PresentationError(f"bad slot {part.strip()!r}, expected NAME*MULT")
                child, _, mult_text = part.partition("*")
                child = child.strip()
                if not child or not set(child) <= _NAME_CHARS:
                    raise PresentationError(f"bad slot child name {child!r}")
                try:
                    mult = parse_cardinal(mult_text)
                except ValueError as exc:
                    raise PresentationError(str(exc)) from exc
                if mult == FIN0:
                    raise PresentationError(f"zero multiplicity in slot {part.strip()!r}")
                entry.append(Slot(child, mult))
        names.append(name)
        slots[name] = tuple(entry)
    if not names:
        raise PresentationError("empty presentation")
    for name in names:
        for slot in slots[name]:
            if slot.child not in slots:
                raise PresentationError(f"undefined class {slot.child!r}")
    return TreePresentation(tuple(names), slots)


def render_presentation(p: TreePresentation) -> str:
    lines = []
    for name in p.names:
        body = ", ".join(f"{s.child}*{s.mult}" for s in p.slots[name])
        lines.append(f"class {name}:" + (f" {body}" if body else ""))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# minimization (bisimulation quotient)


def _reachable(p: TreePresentation) -> list:
    seen = [p.root]
    seen_set = {p.root}
    i = 0
    while i < len(seen):
        for slot in p.slots[seen[i]]:
            if slot.child not in seen_set:
                seen_set.add(slot.child)
                seen.append(slot.child)
        i += 1
    return seen


def minimize(p: TreePresentation) -> TreePresentation:
    """Merge classes with isomorphic unfoldings; aggregate equal-child slots.

    Partition refinement: classes are split by their aggregated signature
    (child block, total multiplicity) until stable, which identifies classes
    exactly when the unfolded rooted trees are isomorphic.
    """
    reach = _reachable(p)
    block = {c: 0 for c in reach}
    while True:
        sigs = {}
        for c in reach:
            agg = {}
            for slot in p.slots[c]:
                b = block[slot.child]
                agg.setdefault(b, []).append((slot.mult, FIN1))
            sig = tuple(sorted((b, sum_family(terms)._key()) for b, terms in agg.items()))
            sigs[c] = (block[c], sig)
        relabel = {}
        for c in reach:
            relabel.setdefault(sigs[c], len(relabel))
        new_block = {c: relabel[sigs[c]] for c in reach}
        if len(set(new_block.values())) == len(set(block.values())):
            block = new_block
            break
        block = new_block

    rep = {}
    for c in reach:
        b = block[c]
        if b not in rep or c < rep[b]:
            rep[b] = c
    new_slots = {}
    for b, name in rep.items():
        member = name
        agg = {}
        for slot in p.slots[member]:
            child_name = rep[block[slot.child]]
            agg.setdefault(child_name, []).append((slot.mult, FIN1))
        entry = tuple(
            Slot(child, sum_family(terms)) for child, terms in sorted(agg.items())
        )
        new_slots[name] = entry
    root_name = rep[block[p.root]]
    order = [root_name] + sorted(n for n in new_slots if n != root_name)
    return TreePresentation(tuple(order), new_slots)


# ---------------------------------------------------------------------------
# structural analysis


class _Analysis:
    """Derived facts about a minimized presentation."""

    def __init__(self, p: TreePresentation):
        self.p = minimize(p)
        mp = self.p
        names = list(mp.names)
        self.names = names

        # full reachability closure; class counts are small
        direct = {c: {s.child for s in mp.slots[c]} for c in names}
        reach = {c: set(direct[c]) for c in names}
        changed = True
        while changed:
            changed = False
            for c in names:
                extra = set()
                for d in reach[c]:
                    extra |= direct[d]
                if not extra <= reach[c]:
                    reach[c] |= extra
                    changed = True
        on_cycle = {c: c in reach[c] for c in names}
        self.reaches_cycle = {
            c: on_cycle[c] or any(on_cycle[d] for d in reach[c]) for c in names
        }

        self.acyclic = not any(self.reaches_cycle.values())
        self.sizes = self._compute_sizes()

        # ray slots: slots whose child subtree contains a ray
        self.ray_slots = {
            c: tuple(s for s in mp.slots[c] if self.reaches_cycle[s.child])
            for c in names
        }

        self.kind = self._classify()
        self.on_double_ray = {c: False for c in names}
        if self.kind == "double-ray":
            for c in self._tstar_classes():
                self.on_double_ray[c] = True

    # -- sizes

    def _topo_acyclic(self, names):
        # children before parents; only valid on acyclic class sets
        order = []
        done = set()
        for start in names:
            stack = [(start, False)]
            while stack:
                c, processed = stack.pop()
                if processed:
                    if c not in done:
                        done.add(c)
                        order.append(c)
                    continue
                if c in done:
                    continue
                stack.append((c, True))
                for slot in self.p.slots[c]:
                    if slot.child not in done:
                        stack.append((slot.child, False))
        return order

    def _compute_sizes(self):
        sizes = {}
        acyclic_names = [c for c in self.names if not self.reaches_cycle[c]]
        for c in self._topo_acyclic(acyclic_names):
            terms = [(FIN1, FIN1)]
            for slot in self.p.slots[c]:
                terms.append((sizes[slot.child], slot.mult))
            sizes[c] = sum_family(terms)
        for c in self.names:
            if self.reaches_cycle[c]:
                # countably many levels; width bounded by the largest
                # multiplicity reachable from c
                best = ALEPH0
                stack = [c]
                seen = {c}
                while stack:
                    e = stack.pop()
                    for slot in self.p.slots[e]:
                        if slot.mult.is_infinite and slot.mult > best:
                            best = slot.mult
                        if slot.child not in seen:
                            seen.add(slot.child)
                            stack.append(slot.child)
                sizes[c] = best
        return sizes

    # -- classification

    def _ray_instance_count(self, c) -> Cardinal:
        return sum_family((slot.mult, FIN1) for slot in self.ray_slots[c])

    def _classify(self):
        if self.acyclic:
            infinite = any(
                slot.mult.is_infinite for c in self.names for slot in self.p.slots[c]
            )
            return "rayless" if infinite else "finite"
        for c in self.names:
            if self._ray_instance_count(c) >= FIN2:
                return "double-ray"
        return "one-ended"

    # -- walks in the ray graph

    def spine_walk(self):
        """Classes along the unique ray from the root, up to the first repeat.

        Returns (path, cycle_start_index); only meaningful when the root
        reaches a cycle and every visited class has a single ray instance.
        """
        path = []
        seen = {}
        c = self.p.root
        while True:
            if c in seen:
                return path, seen[c]
            seen[c] = len(path)
            path.append(c)
            rs = self.ray_slots[c]
            if not rs:
                return path, None
            c = rs[0].child

    def tstar_top(self):
        """Walk from the root to the first class with two ray directions."""
        c = self.p.root
        path = [c]
        visited = {c}
        while self._ray_instance_count(c) < FIN2:
            rs = self.ray_slots[c]
            if not rs:
                raise PresentationError("no double ray reachable")  # pragma: no cover
            c = rs[0].child
            if c in visited:
                raise PresentationError("walk cycled before a branch")  # pragma: no cover
            visited.add(c)
            path.append(c)
        return path

    def _tstar_classes(self):
        top = self.tstar_top()[-1]
        out = [top]
        seen = {top}
        i = 0
        while i < len(out):
            for slot in self.ray_slots[out[i]]:
                if slot.child not in seen:
                    seen.add(slot.child)
                    out.append(slot.child)
            i += 1
        return out


def classify(p: TreePresentation) -> Classification:
    a = _Analysis(p)
    return Classification(a.kind, a.sizes[a.p.root], dict(a.reaches_cycle),
                          dict(a.on_double_ray))


# ---------------------------------------------------------------------------
# rank


def rank_presented(p: TreePresentation) -> int:
    """Rounds of finite-set removal needed to reduce to finite components."""
    a = _Analysis(p)
    if not a.acyclic:
        raise PresentationError("rank is defined for rayless presentations only")
    mp = a.p
    rank = {}
    for c in a._topo_acyclic(list(mp.names)):
        if a.sizes[c].is_finite:
            rank[c] = 0
            continue
        best = 0
        for slot in mp.slots[c]:
            child_infinite = a.sizes[slot.child].is_infinite
            if child_infinite and slot.mult.is_finite:
                cand = rank[slot.child]
            elif child_infinite:
                cand = rank[slot.child] + 1
            elif slot.mult.is_infinite:
                cand = 1
            else:
                cand = 0
            best = max(best, cand)
        rank[c] = best
    return rank[mp.root]


# ---------------------------------------------------------------------------
# motion


def motion_presented(p: TreePresentation):
    """Least support of a root-fixing symmetry, or None when rigid.

    After minimization, twins are exactly duplicated slots; swapping two
    twin subtrees moves 2 * |subtree| vertices.
    """
    a = _Analysis(p)
    best = None
    for c in a.p.names:
        for slot in a.p.slots[c]:
            if slot.mult >= FIN2:
                moved = sum_family([(a.sizes[slot.child], FIN2)])
                if best is None or moved < best:
                    best = moved
    return best


# ---------------------------------------------------------------------------
# symbolic counting


def _acyclic_count(slots: dict, start: str, memo: dict) -> Cardinal:
    """Twin-class product recursion over an acyclic class graph, in Cardinal."""
    order = []
    done = set(memo)
    stack = [(start, False)]
    while stack:
        c, processed = stack.pop()
        if processed:
            if c not in done:
                done.add(c)
                order.append(c)
            continue
        if c in done:
            continue
        stack.append((c, True))
        for slot in slots[c]:
            if slot.child not in done:
                stack.append((slot.child, False))
    for c in order:
        factors = [(FIN2, FIN1)]
        for slot in slots[c]:
            factors.append((binom(memo[slot.child], slot.mult), FIN1))
        memo[c] = product_family(factors)
    return memo[start]


def _component_slots(a: _Analysis) -> dict:
    """Class table with every ray slot removed (the rayless side trees)."""
    return {
        c: tuple(s for s in a.p.slots[c] if not a.reaches_cycle[s.child])
        for c in a.p.names
    }


def _occurrences(a: _Analysis, src: str, dst: str) -> Cardinal:
    """Number of vertices of class dst in the ray-slot subtree of src."""
    ray = {c: a.ray_slots[c] for c in a.p.names}
    fwd = {src}
    frontier = [src]
    while frontier:
        c = frontier.pop()
        for slot in ray[c]:
            if slot.child not in fwd:
                fwd.add(slot.child)
                frontier.append(slot.child)
    if dst not in fwd:
        return FIN0
    rev = {c: [] for c in a.p.names}
    for c in a.p.names:
        for slot in ray[c]:
            rev[slot.child].append(c)
    back = {dst}
    frontier = [dst]
    while frontier:
        c = frontier.pop()
        for e in rev[c]:
            if e in back or e not in fwd:
                continue
            back.add(e)
            frontier.append(e)
    between = fwd & back

    # cycle inside the useful subgraph means infinitely many paths
    edges = {
        c: [s for s in ray[c] if s.child in between]
        for c in between
    }
    indeg = {c: 0 for c in between}
    for c in between:
        for s in edges[c]:
            indeg[s.child] += 1
    topo = [c for c in sorted(between) if indeg[c] == 0]
    i = 0
    while i < len(topo):
        for s in edges[topo[i]]:
            indeg[s.child] -= 1
            if indeg[s.child] == 0:
                topo.append(s.child)
        i += 1
    if len(topo) < len(between):
        best = ALEPH0
        for c in between:
            for s in edges[c]:
                if s.mult.is_infinite and s.mult > best:
                    best = s.mult
        return best

    ways = {c: FIN0 for c in between}
    ways[src] = FIN1
    for c in topo:
        for s in edges[c]:
            ways[s.child] = sum_family([(ways[s.child], FIN1), (ways[c], s.mult)])
    return ways[dst]


def _count_double_ray(a: _Analysis):
    mp = a.p
    walk = a.tstar_top()
    top = walk[-1]
    comp_slots = _component_slots(a)
    memo: dict = {}
    comp = {c: _acyclic_count(comp_slots, c, memo) for c in a._tstar_classes()}

    # the component of the topmost double-ray vertex also carries the finite
    # stem up to the presentation root, re-rooted at the branch point
    special_slots = dict(comp_slots)
    prev = None
    for depth, c in enumerate(walk[:-1]):
        name = f"#up{depth}"
        entry = list(comp_slots[c])
        if prev is not None:
            entry.append(Slot(prev, FIN1))
        special_slots[name] = tuple(entry)
        prev = name
    top_entry = list(comp_slots[top])
    if prev is not None:
        top_entry.append(Slot(prev, FIN1))
    special_slots["#top"] = tuple(top_entry)
    special_count = _acyclic_count(special_slots, "#top", dict(memo))

    # Polat condition: every twin class of the double-ray skeleton needs at
    # least tau inequivalent colorings of the branch below it
    tstar = a._tstar_classes()
    block = {c: 0 for c in tstar}
    while True:
        sigs = {}
        for c in tstar:
            agg = {}
            for slot in a.ray_slots[c]:
                b = block[slot.child]
                agg.setdefault(b, []).append((slot.mult, FIN1))
            sigs[c] = (block[c], tuple(sorted(
                (b, sum_family(t)._key()) for b, t in agg.items())))
        relabel = {}
        for c in tstar:
            relabel.setdefault(sigs[c], len(relabel))
        nb = {c: relabel[sigs[c]] for c in tstar}
        if len(set(nb.values())) == len(set(block.values())):
            block = nb
            break
        block = nb

    for c in tstar:
        by_block: dict = {}
        for slot in a.ray_slots[c]:
            by_block.setdefault(block[slot.child], []).append(slot)
        for slots_in_block in by_block.values():
            tau = sum_family((s.mult, FIN1) for s in slots_in_block)
            for slot in slots_in_block:
                branch = product_family(
                    (comp[d], _occurrences(a, slot.child, d)) for d in tstar
                )
                if tau > branch:
                    return FIN0, comp, special_count

    if special_count == FIN0:
        return FIN0, comp, special_count

    factors = [(special_count, FIN1)]
    for d in tstar:
        below = sum_family(
            (_occurrences(a, slot.child, d), slot.mult) for slot in a.ray_slots[top]
        )
        factors.append((comp[d], below))
    return product_family(factors), comp, special_count


def count_presented(p: TreePresentation) -> PresentedReport:
    """Classification, size, motion and symbolic asymmetrizing-set count."""
    a = _Analysis(p)
    mp = a.p
    size = a.sizes[mp.root]
    mot = motion_presented(mp)

    if a.kind in ("finite", "rayless"):
        count = _acyclic_count(dict(mp.slots), mp.root, {})
        return PresentedReport(a.kind, size, mot, count, a.kind,
                               rank_presented(mp))

    if a.kind == "one-ended":
        path, cycle_start = a.spine_walk()
        assert cycle_start is not None
        comp_slots = _component_slots(a)
        memo: dict = {}
        factors = []
        for i, c in enumerate(path):
            value = _acyclic_count(comp_slots, c, memo)
            factors.append((value, ALEPH0 if i >= cycle_start else FIN1))
        count = product_family(factors)
        return PresentedReport(a.kind, size, mot, count, a.kind)

    count, _, _ = _count_double_ray(a)
    return PresentedReport(a.kind, size, mot, count, a.kind)


# ---------------------------------------------------------------------------
# unfolding


def unfold(p: TreePresentation, max_size: int = 1_000_000) -> RootedTree:
    """Explicit rooted tree denoted by a finite-multiplicity presentation."""
    a = _Analysis(p)
    if a.kind != "finite":
        raise PresentationError("only finite presentations unfold explicitly")
    if a.sizes[a.p.root].value > max_size:
        raise PresentationError(f"unfolded size exceeds {max_size}")
    tree, _ = _expand(a.p, None, None)
    return tree


def truncated_unfold(p: TreePresentation, depth: int, width: int,
                     max_size: int = 200_000):
    """Depth-limited unfolding with infinite multiplicities capped at width.

    Returns (tree, cut) where ``cut`` is the frozenset of labels whose true
    subtree extends beyond the truncation (depth boundary or capped slot).
    """
    return _expand(minimize(p), depth, width, max_size)


def _expand(mp: TreePresentation, depth, width, max_size: int = 10_000_000):
    labels = []
    parents = []
    cut_labels = set()

    stack = [(mp.root, -1, 0)]
    while stack:
        cls, parent, d = stack.pop()
        idx = len(labels)
        label = f"{cls}_{idx}"
        labels.append(label)
        parents.append(parent)
        if len(labels) > max_size:
            raise PresentationError(f"unfolding exceeds {max_size} vertices")
        if depth is not None and d >= depth:
            if mp.slots[cls]:
                cut_labels.add(label)
            continue
        for slot in mp.slots[cls]:
            if slot.mult.is_finite:
                copies = slot.mult.value
            else:
                copies = width
                cut_labels.add(label)
            for _ in range(copies):
                stack.append((slot.child, idx, d + 1))
    tree = build_rooted(labels, parents)
    return tree, frozenset(cut_labels)


def _marked_codes(tree: RootedTree, selected: frozenset, cut: frozenset) -> tuple:
    """Colored codes where each cut vertex carries a unique marker.

    Equal sibling codes then certify a color-preserving swap that fixes
    every cut vertex pointwise, i.e. a symmetry entirely visible at this
    depth.
    """
    n = tree.n
    code = [""] * n
    for v in sorted(range(n), key=lambda x: tree.sizes[x]):
        bit = "1" if v in selected else "0"
        mark = f"!{v}" if v in cut else ""
        inner = "".join(sorted(code[c] for c in tree.children[v]))
        code[v] = "(" + bit + mark + inner + ")"
    return tuple(code)


def _relative_verify(tree: RootedTree, selected: frozenset, cut: frozenset) -> bool:
    """No non-identity color-preserving symmetry fixing all cut vertices."""
    codes = _marked_codes(tree, selected, cut)
    for v in range(tree.n):
        kids = tree.children[v]
        if len(kids) >= 2:
            seen = set()
            for ch in kids:
                if codes[ch] in seen:
                    return False
                seen.add(codes[ch])
    return True


def _distinct_colorings(tree: RootedTree, v: int, cut_idx: frozenset, want: int,
                        budget: int = 200_000):
    """First ``want`` colorings of the subtree at v, pairwise non-isomorphic
    as colored subtrees, each internally sound relative to the cut.

    Enumerates subsets of the subtree in canonical (size, index) order and
    keeps those passing the relative check with a fresh colored code.
    """
    from itertools import combinations

    lo, hi = v, v + tree.sizes[v]
    verts = list(range(lo, hi))
    sub_cut = frozenset(x for x in cut_idx if lo <= x < hi)
    picked = []
    seen_codes = set()
    tried = 0
    for size in range(len(verts) + 1):
        for combo in combinations(verts, size):
            tried += 1
            if tried > budget:
                raise PresentationError("certificate search budget exceeded")
            sel = frozenset(combo)
            sub_codes = _marked_codes_sub(tree, v, sel, sub_cut)
            if sub_codes is None:
                continue
            plain = colored_codes_sub(tree, v, sel)
            if plain in seen_codes:
                continue
            seen_codes.add(plain)
            picked.append(sel)
            if len(picked) == want:
                return picked
    return None


def _marked_codes_sub(tree: RootedTree, v: int, selected: frozenset,
                      cut: frozenset):
    """Marked-code relative check restricted to the subtree at v; returns
    the root code on success, None when some sibling pair collides."""
    lo, hi = v, v + tree.sizes[v]
    code = {}
    for x in sorted(range(lo, hi), key=lambda y: tree.sizes[y]):
        bit = "1" if x in selected else "0"
        mark = f"!{x}" if x in cut else ""
        kids = tree.children[x]
        parts = sorted(code[c] for c in kids)
        for a, b in zip(parts, parts[1:]):
            if a == b:
                return None
        code[x] = "(" + bit + mark + "".join(parts) + ")"
    return code[v]


def colored_codes_sub(tree: RootedTree, v: int, selected: frozenset) -> str:
    lo, hi = v, v + tree.sizes[v]
    code = {}
    for x in sorted(range(lo, hi), key=lambda y: tree.sizes[y]):
        bit = "1" if x in selected else "0"
        inner = "".join(sorted(code[c] for c in tree.children[x]))
        code[x] = "(" + bit + inner + ")"
    return code[v]


def asym_certificate(p: TreePresentation, depth: int):
    """Finite colored witness of asymmetrizability on a truncation.

    Unfolds to the given depth (infinite multiplicities capped at the same
    value) and colors it so that the twins of every similarity class of the
    root's children receive pairwise non-isomorphic colored subtrees, each
    sound relative to the cut boundary: fully contained subtrees come out
    asymmetric, while distinctions inside subtrees that continue past the
    boundary may be deferred to deeper levels, exactly as in the infinite
    construction.  Returns None when some class needs more inequivalent
    colorings than the truncation offers at this depth (retry deeper).
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    report = count_presented(p)
    if report.count == FIN0:
        raise ValueError("presentation is not asymmetrizable")
    trunc, cut_labels = truncated_unfold(p, depth, depth)
    cut_idx = frozenset(i for i, l in enumerate(trunc.labels) if l in cut_labels)

    selected = set()
    # twin classes of the root's children, contiguous equal-code runs
    runs = []
    run = []
    for c in trunc.children[0]:
        if run and trunc.codes[c] != trunc.codes[run[0]]:
            runs.append(run)
            run = []
        run.append(c)
    if run:
        runs.append(run)
    for members in runs:
        picks = _distinct_colorings(trunc, members[0], cut_idx, len(members))
        if picks is None:
            return None
        base = members[0]
        for member, pick in zip(members, picks):
            shift = member - base
            selected.update(x + shift for x in pick)

    sel = frozenset(selected)
    if not _relative_verify(trunc, sel, cut_idx):
        return None
    return Certificate(trunc, frozenset(trunc.labels[i] for i in sel),
                       cut_labels, depth)
