"""Small gentle bound quivers: exhaustive enumeration up to isomorphism, and the bundled corpus."""
from __future__ import annotations

from itertools import combinations, combinations_with_replacement
from pathlib import Path

import networkx as nx
from networkx.algorithms.isomorphism import categorical_edge_match, categorical_node_match

from .quiver import GentleQuiver, dump_quiver, is_nk_finite, load_quiver, validate_gentle

DATA = Path(__file__).resolve().parents[2] / "data"


def _signature_graph(q):
    g = nx.DiGraph()
    for v in q.vertices:
        g.add_node(("v", v.id), kind="v")
    for a in q.arrows:
        g.add_node(("a", a.id), kind="a")
        g.add_edge(("v", a.source), ("a", a.id), role="s")
        g.add_edge(("a", a.id), ("v", a.target), role="t")
    for k, (x, y) in enumerate(sorted(q.relations)):
        g.add_node(("r", k), kind="r")
        g.add_edge(("a", x), ("r", k), role="1")
        g.add_edge(("r", k), ("a", y), role="2")
    return g


def isomorphic(q1, q2):
    return nx.is_isomorphic(_signature_graph(q1), _signature_graph(q2),
                            node_match=categorical_node_match("kind", None),
                            edge_match=categorical_edge_match("role", None))


def is_connected(q):
    g = nx.Graph()
    g.add_nodes_from(range(q.n0))
    g.add_edges_from((a.source, a.target) for a in q.arrows)
    return nx.is_connected(g)


def enumerate_gentle(n, max_arrows=None, nk_finite=True):
    """All connected gentle bound quivers on n vertices (optionally only those with finitely
    many strings), one per isomorphism class."""
    names = [str(i + 1) for i in range(n)]
    pairs = [(s, t) for s in names for t in names]
    max_arrows = 2 * n if max_arrows is None else max_arrows
    found = []
    for k in range(n - 1, max_arrows + 1):
        for ends in combinations_with_replacement(pairs, k):
            arrows = [(chr(ord("a") + i), s, t) for i, (s, t) in enumerate(ends)]
            base = GentleQuiver.build(names, arrows)
            if any(len(base.out_arrows(v)) > 2 or len(base.in_arrows(v)) > 2 for v in range(n)):
                continue
            if not is_connected(base):
                continue
            comp = [(x.name, y.name) for x in base.arrows for y in base.arrows if x.target == y.source]
            for r in range(len(comp) + 1):
                for rels in combinations(comp, r):
                    q = GentleQuiver.build(names, arrows, rels)
                    if validate_gentle(q) or (nk_finite and not is_nk_finite(q)):
                        continue
                    if not any(isomorphic(q, p) for p in found):
                        found.append(q)
    return found


def corpus_files():
    return sorted(DATA.glob("**/*.quiver"))


def corpus():
    """Name → quiver for every bundled quiver."""
    return {str(p.relative_to(DATA).with_suffix("")): load_quiver(p) for p in corpus_files()}


def write_two_vertex(directory=None):
    directory = Path(directory or DATA / "two_vertex")
    directory.mkdir(parents=True, exist_ok=True)
    qs = enumerate_gentle(2)
    for i, q in enumerate(qs):
        (directory / f"q{i:02d}.quiver").write_text(dump_quiver(q))
    return qs
