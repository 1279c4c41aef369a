from collections import Counter

import pytest
from hypothesis import given, settings

from conftest import CORPUS, complex_of, gentle_quivers
from nkc.nonkissing import InfiniteTypeError, NKComplex
from nkc.quiver import is_nk_finite
from nkc.strings import (CapExceeded, NegSimple, almost_positive_strings, canonical, enumerate_strings,
                         g_vector_string, tau_compatible, vertices_of)
from oracles import brute_words, end, lib_key, quiver, start


def _brute_walks(cx):
    qb = cx.qb
    longest = max(len(w) for w in cx.walks)
    out = set()
    for w in brute_words(qb, longest + 1):
        if qb.is_blossom_vertex(start(qb, w[0])) and qb.is_blossom_vertex(end(qb, w[-1])):
            out.add(min(w, tuple((a, -e) for a, e in reversed(w))))
    return out


def test_walks_match_brute_force(small):
    cx = complex_of(small)
    assert {lib_key(w) for w in cx.walks} == _brute_walks(cx)


def test_straight_walk_count(name):
    cx = complex_of(name)
    # every blossom arrow is the end of exactly one walk; straight walks eat two of them
    assert len(cx.qb.arrows) == 2 * cx.q.n0 + len(cx.straight)


def _kiss_oracle(cx, i, j):
    """Count position pairs of a common substring, top in walk i and bottom in walk j."""
    qb = cx.qb
    wi, wj = cx.walks[i], cx.walks[j]

    def pieces(w, top):
        L = w.letters
        vs = vertices_of(qb, w)
        for a in range(1, len(L)):
            for b in range(a, len(L)):
                # the piece between vertex positions a and b, flanked by letters a-1 and b
                left, right = L[a - 1], L[b]
                if top and left[1] == -1 and right[1] == 1:
                    yield (vs[a], L[a:b])
                if not top and left[1] == 1 and right[1] == -1:
                    yield (vs[a], L[a:b])

    def key(v, ls):
        if not ls:
            return (v,)
        return min(ls, tuple((x, -e) for x, e in reversed(ls)))

    tops = Counter(key(*p) for p in pieces(wi, True))
    bots = Counter(key(*p) for p in pieces(wj, False))
    return sum(n * bots[k] for k, n in tops.items())


def test_kiss_counts_match_oracle(small):
    cx = complex_of(small)
    n = len(cx.walks)
    for i in range(n):
        for j in range(n):
            assert cx.kn[i][j] == _kiss_oracle(cx, i, j)


def test_straight_walks_never_kiss(name):
    cx = complex_of(name)
    for i in cx.straight:
        assert not any(cx.kn[i]) and not any(cx.kn[j][i] for j in range(len(cx.walks)))


def test_p2_kissing_pairs():
    cx = complex_of("p2")
    pairs = [(i, j) for i in cx.bending for j in cx.bending if i < j and cx.kisses(i, j)]
    assert len(cx.bending) == 5 and len(pairs) == 5


@pytest.mark.parametrize("name, count", [("p2", 5), ("p3", 14), ("r3", 12), ("l1", 2)])
def test_facet_counts(name, count):
    assert len(complex_of(name).facets) == count


def test_facets_equal_cliques(name):
    cx = complex_of(name)
    assert set(cx.facets) == cx.clique_facets()


def test_peak_and_deep_facets(name):
    cx = complex_of(name)
    assert cx.peak_facet in cx.facets and cx.deep_facet in cx.facets
    n = cx.q.n0
    assert sorted(cx.g_vector(i) for i in cx.peak_facet.walks) == sorted(
        tuple(int(v == k) for v in range(n)) for k in range(n))
    assert sorted(cx.g_vector(i) for i in cx.deep_facet.walks) == sorted(
        tuple(-int(v == k) for v in range(n)) for k in range(n))


def test_string_walk_bijection(name):
    cx = complex_of(name)
    strs = [s for s in almost_positive_strings(cx.q)]
    ws = [cx.string_to_walk(s) for s in strs]
    assert len(set(ws)) == len(ws)
    assert set(ws) == {i for i in range(len(cx.walks)) if i not in cx.straight}
    for s, i in zip(strs, ws):
        assert cx.walk_to_string(i) == s
        assert cx.g_vector(i) == g_vector_string(cx.q, s)
    for v in range(cx.q.n0):
        assert cx.string_to_walk(NegSimple(v)) == cx.deep_walk(v)


def test_self_kissing_iff_not_tau_rigid(name):
    cx = complex_of(name)
    for s in enumerate_strings(cx.q):
        assert (cx.string_to_walk(s) in cx.self_kissing) == (not tau_compatible(cx.q, s, s))


def test_flip_is_unique_and_involutive(name):
    cx = complex_of(name)
    for f in cx.facets[:200]:
        for i in f.walks:
            r = cx.flip(f, i)
            assert cx.flip_bruteforce(f, i) == [r.in_walk]
            back = cx.flip(r.facet, r.in_walk)
            assert back.facet == f and back.increasing != r.increasing
            assert back.sigma == r.sigma


def test_flip_graph_is_regular_and_connected(name):
    cx = complex_of(name)
    facets, edges = cx.flip_graph
    deg = {f: 0 for f in facets}
    for a, b, *_ in edges:
        deg[a] += 1
        deg[b] += 1
    assert set(deg.values()) == {cx.q.n0}
    assert len(edges) * 2 == cx.q.n0 * len(facets)


def test_countercurrent_order_is_total_on_facets(small):
    cx = complex_of(small)
    for f in cx.facets:
        full = cx.full(f)
        for a in cx.qb.arrows:
            marks = cx.marked(full, a.id)
            for m1 in marks:
                for m2 in marks:
                    c = cx.countercurrent_cmp(m1, m2)
                    assert c == -cx.countercurrent_cmp(m2, m1)
                    assert (c == 0) == (m1 == m2)


def test_distinguished_strings_are_substrings(name):
    cx = complex_of(name)
    for f in cx.facets[:100]:
        for i, d in cx.distinguished(f).items():
            w = cx.walks[i]
            vs = vertices_of(cx.qb, w)
            p, r = d.positions
            assert canonical(cx.q, type(d.string)(vs[p + 1], w.letters[p + 1:r])) == d.string


def test_c_vectors_dual_to_g_vectors(name):
    cx = complex_of(name)
    for f in cx.facets:
        ws = sorted(f.walks)
        for i in ws:
            for j in ws:
                g, c = cx.g_vector(i), cx.c_vector(j, f)
                assert sum(x * y for x, y in zip(g, c)) == int(i == j)


def test_flip_increases_along_positive_c(name):
    cx = complex_of(name)
    for a, b, out_w, in_w, sigma in cx.flip_graph[1]:
        c = cx.c_vector(out_w, a)
        assert min(c) >= 0 and max(c) > 0


def test_infinite_type_rejected():
    with pytest.raises(InfiniteTypeError):
        NKComplex(quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")]))


def test_caps():
    with pytest.raises(CapExceeded):
        NKComplex(CORPUS["q6"], max_facets=10).facets
    with pytest.raises(CapExceeded):
        NKComplex(CORPUS["q6"], max_strings=5)


def test_flip_graph_exports():
    cx = complex_of("p2")
    js = cx.flip_graph_json()
    assert len(js["facets"]) == 5 and len(js["edges"]) == 5
    dot = cx.flip_graph_dot()
    assert dot.startswith("digraph") and dot.count("->") == 5
    assert sorted(e["string"] for e in js["edges"]) == ["1", "1", "1 a 2", "2", "2"]


@settings(max_examples=25, deadline=None)
@given(gentle_quivers(max_vertices=3))
def test_random_quivers_complex_invariants(q):
    if not is_nk_finite(q):
        return
    cx = NKComplex(q, max_facets=2000)
    facets = cx.facets
    assert set(facets) == cx.clique_facets()
    assert all(len(f.walks) == q.n0 for f in facets)
    for s in almost_positive_strings(q):
        assert cx.walk_to_string(cx.string_to_walk(s)) == s
    for f in facets:
        for i in f.walks:
            assert cx.flip_bruteforce(f, i) == [cx.flip(f, i).in_walk]
