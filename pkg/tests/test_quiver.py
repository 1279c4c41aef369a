import json

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import CORPUS, DATA, gentle_quivers
from nkc.corpus import isomorphic
from nkc.quiver import (GentleQuiver, QuiverError, blind, blind_with_paths, blossoming, dump_quiver, is_gentle,
                        is_nk_finite, load_quiver, parse_quiver, parse_quiver_json, quiver_to_dict,
                        reversed_quiver, validate_gentle)
from oracles import brute_words, quiver


def test_parse_p2():
    q = load_quiver(DATA / "p2.quiver")
    assert (q.n0, q.n1, len(q.relations)) == (2, 1, 0)
    assert q.arrows[0].name == "a" and q.vname(q.arrows[0].source) == "1"


@pytest.mark.parametrize("text, line", [
    ("vertices 1 2\narrow a 1 3\n", 2),
    ("vertices 1 2\narrow a 1 2\narrow a 2 1\n", 3),
    ("vertices 1 2\narrow a 1 2\nrelation a a\n", 3),
    ("vertices 1 2\narrow a 1 2\nrelation a b\n", 3),
    ("vertices 1\nfoo\n", 2),
    ("arrow a 1 2\n", 1),
    ("vertices 1 1\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(QuiverError) as e:
        parse_quiver(text)
    assert e.value.line == line


def test_missing_vertices_line():
    with pytest.raises(QuiverError):
        parse_quiver("# nothing\n")


def test_json_roundtrip(name):
    q = CORPUS[name]
    q2 = parse_quiver_json(json.dumps(quiver_to_dict(q)))
    assert dump_quiver(q2) == dump_quiver(q)
    assert dump_quiver(parse_quiver(dump_quiver(q))) == dump_quiver(q)


def test_malformed_json():
    with pytest.raises(QuiverError):
        parse_quiver_json('{"vertices": ["1"], "arrows": [{"name": "a"}]}')
    with pytest.raises(QuiverError):
        parse_quiver_json("[1, 2")


def test_validate_gentle_violations():
    three_out = quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2"), ("c", "1", "2")])
    assert any("out-degree" in m for m in validate_gentle(three_out))
    # both b and c compose freely after a
    fork = quiver(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "2", "3"), ("c", "2", "4")])
    assert any("outside I" in m for m in validate_gentle(fork))
    both_rel = quiver(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "2", "3"), ("c", "2", "4")],
                      [("a", "b"), ("a", "c")])
    assert any("relations start" in m for m in validate_gentle(both_rel))
    assert is_gentle(quiver(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "2", "3"), ("c", "2", "4")],
                            [("a", "b")]))


def test_corpus_is_gentle_and_finite(name):
    q = CORPUS[name]
    assert validate_gentle(q) == []
    assert is_nk_finite(q)


def test_finiteness_examples():
    kronecker = quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])
    assert not is_nk_finite(kronecker)
    free_loop = quiver(["v"], [("l", "v", "v")])
    assert not is_nk_finite(free_loop)
    cycle = quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])
    assert not is_nk_finite(cycle)
    assert is_nk_finite(quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1")], [("a", "b")]))


@settings(max_examples=60, deadline=None)
@given(gentle_quivers(max_vertices=3))
def test_finiteness_matches_long_words(q):
    # an acyclic letter graph bounds word length by the number of signed letters
    bound = 2 * q.n1
    long_words = [w for w in brute_words(q, bound + 1) if len(w) == bound + 1]
    assert is_nk_finite(q) == (not long_words)


def test_blossoming_degrees(name):
    q = CORPUS[name]
    qb = blossoming(q).quiver
    assert is_gentle(qb)
    for v in qb.vertices:
        deg = len(qb.in_arrows(v.id)) + len(qb.out_arrows(v.id))
        if v.is_blossom:
            assert deg == 1
        else:
            assert len(qb.in_arrows(v.id)) == 2 and len(qb.out_arrows(v.id)) == 2
    # every non-blossom arrow composes freely and with a relation on both sides
    for a in qb.arrows:
        if not qb.is_blossom_vertex(a.target):
            outs = qb.out_arrows(a.target)
            assert sorted((a.id, b) in qb.relations for b in outs) == [False, True]


def test_reverse_is_involution(name):
    q = CORPUS[name]
    assert reversed_quiver(reversed_quiver(q)) == q
    assert is_gentle(reversed_quiver(q))


def test_blind_examples():
    p3, r3 = CORPUS["p3"], CORPUS["r3"]
    q = blind(p3, [p3.vertex_id("2")])
    assert [(a.name, q.vname(a.source), q.vname(a.target)) for a in q.arrows] == [("ab", "1", "3")]
    assert blind(r3, [r3.vertex_id("2")]).n1 == 0
    q, paths = blind_with_paths(p3, [p3.vertex_id("2")])
    assert paths == {0: (0, 1)}


def test_blind_loop_rejected():
    l1 = CORPUS["l1"]
    with pytest.raises(QuiverError):
        blind(l1, [0])


def _blindable(q):
    return [v for v in range(q.n0) if not any(q.arrows[a].target == v for a in q.out_arrows(v))]


def test_blinding_stays_gentle_and_commutes_with_reversal(name):
    q = CORPUS[name]
    for v in _blindable(q):
        if q.n0 < 2:
            continue
        b = blind(q, [v])
        assert is_gentle(b)
        assert isomorphic(reversed_quiver(b), blind(reversed_quiver(q), [v]))


def test_blinding_order_independent():
    q = CORPUS["q6"]
    vs = [q.vertex_id("2"), q.vertex_id("6")]
    assert isomorphic(blind(q, vs), blind(q, vs[::-1]))
    assert isomorphic(blind(blind(q, [vs[0]]), [blind(q, [vs[0]]).vertex_id("6")]), blind(q, vs))


def _without_blossom_components(q):
    """Drop connected components made only of blossom vertices."""
    g = nx.Graph()
    g.add_nodes_from(range(q.n0 + sum(v.is_blossom for v in q.vertices)))
    g.add_edges_from((a.source, a.target) for a in q.arrows)
    keep = set()
    for comp in nx.connected_components(g):
        if any(not q.vertices[v].is_blossom for v in comp):
            keep |= comp
    arrows = [a for a in q.arrows if a.source in keep]
    return GentleQuiver.build([v.name for v in q.vertices if v.id in keep],
                              [(a.name, q.vname(a.source), q.vname(a.target)) for a in arrows],
                              [(q.aname(x), q.aname(y)) for x, y in q.relations if q.arrows[x].source in keep])


def test_blinding_commutes_with_blossoming(name):
    q = CORPUS[name]
    for v in _blindable(q):
        if q.n0 < 2:
            continue
        a = blossoming(blind(q, [v])).quiver
        b = blind(blossoming(q).quiver, [v])
        # blinding inside the blossoming quiver can glue two blossom arrows into an isolated arrow
        assert isomorphic(a, _without_blossom_components(b))
