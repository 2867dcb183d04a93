"""Command-line surface: deterministic, line-oriented key=value output.

Input format is detected from the first non-blank line: ``tree unrooted``
and ``graph root <LABEL>`` headers select the edge-list readers, a leading
``class`` selects the presentation grammar, anything else is parsed as the
rooted-tree grammar.  ``--format json-lines`` renders the same records as
one JSON object per line.  Exit status: 0 success, 1 domain failure, 2
input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import engine, generate, oracle, presented, treelike, trees
from .cardinal import FIN0


class _Out:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def emit(self, record: dict):
        if self.fmt == "json-lines":
            self.stream.write(json.dumps(record) + "\n")
        else:
            parts = [f"{k}={v}" for k, v in record.items()]
            self.stream.write(" ".join(parts) + "\n")


def _read_input(path):
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _detect(text: str):
    head = ""
    for line in text.splitlines():
        if line.strip():
            head = line.strip()
            break
    if head.startswith("tree unrooted"):
        return "unrooted"
    if head.startswith("graph root"):
        return "graph"
    if head.startswith("class"):
        return "presentation"
    return "rooted"


def _load_tree(text: str):
    kind = _detect(text)
    if kind == "rooted":
        return trees.parse_rooted(text.strip()), True
    if kind == "unrooted":
        return trees.parse_unrooted(text), False
    raise ValueError(f"expected a tree, found a {kind} input")


def _render_set(labels) -> str:
    return "{" + ",".join(sorted(labels)) + "}"


def _bool(x) -> str:
    return "true" if x else "false"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="asymtree")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["plain", "json-lines"],
                        default="plain")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, what=None, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        if what is not None:
            p.add_argument("what", choices=what)
        p.add_argument("input", nargs="?", default=None,
                       help="input file (default: stdin)")
        return p

    add("canon")
    add("similarity")
    add("center")
    add("count")
    add("motion")
    add("find")
    p = add("enumerate")
    p.add_argument("--limit", type=int, required=True)
    p = add("verify")
    p.add_argument("--set", dest="set_", required=True)
    add("oracle", what=["count", "motion", "aut"])
    add("contract")
    p = add("lift")
    p.add_argument("--mode", choices=["plain", "augmented"], default="plain")
    p.add_argument("--set", dest="set_", required=True)
    p = add("presented",
            what=["classify", "count", "motion", "rank", "certificate"])
    p.add_argument("--depth", type=int, default=3)
    p = add("treelike", what=["check", "forest", "asymmetrize"])
    p.add_argument("--horizon", type=int, default=None)
    p = sub.add_parser("random-tree", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    args = parser.parse_args(argv)
    out = _Out(args.format, sys.stdout)

    try:
        return _dispatch(args, out)
    except (trees.TreeSyntaxError, trees.DuplicateLabelError,
            presented.PresentationError, oracle.SizeCapExceeded,
            ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, out) -> int:
    cmd = args.command

    if cmd == "random-tree":
        tree = generate.random_rooted_tree(args.n, args.seed)
        out.emit({"tree": trees.serialize_rooted(tree)})
        return 0

    text = _read_input(getattr(args, "input", None))

    if cmd == "canon":
        tree, _ = _load_tree(text)
        if not isinstance(tree, trees.RootedTree):
            tree = trees.root_at(tree, trees.center(tree).vertices[0])
        out.emit({"code": tree.codes[0]})
        return 0

    if cmd == "similarity":
        tree, rooted = _load_tree(text)
        if not rooted:
            tree = trees.root_at(tree, trees.center(tree).vertices[0])
        table = trees.similarity(tree)
        for v in range(tree.n):
            for cl in table.classes[v]:
                out.emit({
                    "vertex": tree.labels[v],
                    "rep": tree.labels[cl.rep],
                    "tau": cl.tau,
                    "members": "|".join(tree.labels[m] for m in cl.members),
                })
        return 0

    if cmd == "center":
        tree, rooted = _load_tree(text)
        utree = trees.rooted_to_unrooted(tree) if rooted else tree
        if isinstance(tree, trees.RootedTree) and tree.n == 1:
            out.emit({"center": "vertex", "vertex": tree.labels[0]})
            return 0
        c = trees.center(utree)
        if c.kind == "vertex":
            out.emit({"center": "vertex", "vertex": utree.labels[c.vertices[0]]})
        else:
            u, v = (utree.labels[x] for x in c.vertices)
            a, b = sorted((u, v))
            out.emit({"center": "edge", "u": a, "v": b,
                      "halves_isomorphic": _bool(c.halves_isomorphic)})
        return 0

    if cmd == "count":
        tree, rooted = _load_tree(text)
        n = engine.count_rooted(tree) if rooted else engine.count_unrooted(tree)
        out.emit({"count": n})
        return 0

    if cmd == "motion":
        tree, rooted = _load_tree(text)
        m = engine.motion_rooted(tree) if rooted else engine.motion(tree)
        out.emit({"motion": "asymmetric" if m is None else m})
        return 0

    if cmd == "find":
        tree, _ = _load_tree(text)
        found = engine.find_asym_set(tree)
        if found is None:
            out.emit({"set": "none"})
            return 1
        out.emit({"set": found.render(), "verified": _bool(found.verified)})
        return 0

    if cmd == "enumerate":
        tree, rooted = _load_tree(text)
        if not rooted:
            raise ValueError("enumerate expects a rooted tree")
        for s in engine.enumerate_asym_sets(tree, args.limit):
            out.emit({"set": s.render()})
        return 0

    if cmd == "verify":
        tree, _ = _load_tree(text)
        labels = [x.strip() for x in args.set_.split(",") if x.strip()]
        ok = engine.verify_asym_set(tree, labels)
        out.emit({"verified": _bool(ok)})
        return 0

    if cmd == "oracle":
        tree, rooted = _load_tree(text)
        if rooted:
            utree = trees.rooted_to_unrooted(tree) if tree.n > 1 else \
                trees.UnrootedTree(tree.labels, ((),))
            fixed = utree.index_of(tree.labels[0])
        else:
            utree, fixed = tree, None
        if args.what == "count":
            out.emit({"count": oracle.oracle_count_asym(utree, fixed)})
        elif args.what == "motion":
            m = (oracle.oracle_motion_rooted(utree, fixed) if fixed is not None
                 else oracle.oracle_motion(utree))
            out.emit({"motion": "asymmetric" if m is None else m})
        else:
            group = oracle._group_on_utree(utree, fixed)
            out.emit({"order": group.order})
        return 0

    if cmd == "contract":
        tree, rooted = _load_tree(text)
        if not rooted:
            raise ValueError("contract expects a rooted tree")
        cmap = treelike.contract_even_levels(tree)
        out.emit({"tprime": trees.serialize_rooted(cmap.tprime)})
        for b in range(cmap.tprime.n):
            out.emit({
                "block": cmap.tprime.labels[b],
                "members": "|".join(sorted(cmap.tree.labels[v]
                                           for v in cmap.members[b])),
            })
        return 0

    if cmd == "lift":
        tree, rooted = _load_tree(text)
        if not rooted:
            raise ValueError("lift expects a rooted tree")
        cmap = treelike.contract_even_levels(tree)
        labels = [x.strip() for x in args.set_.split(",") if x.strip()]
        lifted = treelike.lift_asym_set(cmap, labels, args.mode)
        out.emit({"set": lifted.render(), "verified": _bool(lifted.verified)})
        return 0 if lifted.verified else 1

    if cmd == "presented":
        p = presented.parse_presentation(text)
        if args.what == "classify":
            c = presented.classify(p)
            out.emit({"classification": c.kind, "size": str(c.size)})
            return 0
        if args.what == "count":
            rep = presented.count_presented(p)
            out.emit({"count": str(rep.count), "theorem": rep.theorem})
            return 0
        if args.what == "motion":
            m = presented.motion_presented(p)
            out.emit({"motion": "asymmetric" if m is None else str(m)})
            return 0
        if args.what == "rank":
            out.emit({"rank": presented.rank_presented(p)})
            return 0
        cert = presented.asym_certificate(p, args.depth)
        if cert is None:
            out.emit({"certificate": "none"})
            return 1
        out.emit({
            "tree": trees.serialize_rooted(cert.truncation),
            "set": _render_set(cert.selected),
            "cut": _render_set(cert.cut),
            "depth": cert.depth,
        })
        return 0

    if cmd == "treelike":
        graph = trees.parse_rooted_graph(text)
        if args.what == "check":
            horizon = args.horizon
            if horizon is None:
                horizon = max(treelike._graph_depths(graph))
            rep = treelike.check_treelike(graph, horizon)
            for label, depth, ok in rep.records:
                out.emit({"vertex": label, "depth": depth, "pass": _bool(ok)})
            out.emit({"interior_pass": _bool(rep.all_interior_pass)})
            return 0
        if args.what == "forest":
            f = treelike.extract_forest(graph)
            for a, b in f.edges:
                out.emit({"edge": f"{graph.labels[a]}-{graph.labels[b]}"})
            for i, comp in enumerate(f.components):
                out.emit({
                    "component": i,
                    "vertices": "|".join(sorted(graph.labels[v] for v in comp)),
                    "contains_root": _bool(i == f.w_component),
                })
            return 0
        result = treelike.asymmetrize_treelike(graph)
        if isinstance(result, treelike.TreelikeFailure):
            out.emit({"failure": result.reason})
            return 1
        out.emit({"set": result.render(), "verified": _bool(result.verified)})
        return 0

    raise ValueError(f"unknown command {cmd!r}")


if __name__ == "__main__":
    sys.exit(main())
