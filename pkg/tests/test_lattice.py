import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SMALL, complex_of
from nkc.checks import join_irreducibles, lattice, weak_order_s3
from nkc.lattice import FacetPoset, Lattice, lattice_checks, members
from nkc.strings import format_string, is_distinguishable


def lat_of(name):
    return Lattice.of(complex_of(name))


subsets = st.sampled_from(SMALL).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, lat_of(n).full)))


@settings(max_examples=200, deadline=None)
@given(subsets)
def test_closure_matches_composition_fixpoint(x):
    name, s = x
    L = lat_of(name)
    c = L.closure(s)
    assert c == L.closure_by_compose(s)
    assert c & s == s and L.closure(c) == c


@settings(max_examples=100, deadline=None)
@given(subsets, st.integers(0, 2**30))
def test_closure_is_monotone(x, extra):
    name, s = x
    L = lat_of(name)
    t = s | (extra & L.full)
    assert L.closure(s) & ~L.closure(t) == 0


def test_biclosed_enumeration_matches_scan(small):
    L = lat_of(small)
    if L.n > 16:
        pytest.skip("scan too large")
    assert L.biclosed == L.biclosed_by_scan()


def test_biclosed_sets_form_a_lattice(small):
    # brute force: closure of the union is the least biclosed upper bound
    L = lat_of(small)
    bic = L.biclosed
    for s in bic:
        for t in bic:
            j = L.join(s, t)
            ub = [u for u in bic if s & ~u == 0 and t & ~u == 0]
            assert j in ub and all(j & ~u == 0 for u in ub)
            m = L.meet(s, t)
            lb = [u for u in bic if u & ~s == 0 and u & ~t == 0]
            assert m in lb and all(u & ~m == 0 for u in lb)


def test_p2_is_weak_order_s3():
    L = lat_of("p2")
    assert len(L.biclosed) == 6
    assert nx.is_isomorphic(L.hasse_graph(), weak_order_s3())


def test_l1_biclosed():
    L = lat_of("l1")
    assert [[format_string(L.q, x) for x in L.to_set(s)] for s in L.biclosed] == [[], ["v", "v l v"]]


def test_eta_extremes(name):
    cx = complex_of(name)
    L = Lattice.of(cx)
    assert L.eta(0) == cx.peak_facet
    assert L.eta(L.full) == cx.deep_facet


def test_eta_walks_form_a_facet(small):
    cx = complex_of(small)
    L = Lattice.of(cx)
    for s in L.biclosed:
        ws = {cx.walk_id(w) for w in L.eta_walks(s).values()}
        assert all(not cx.kisses(i, j) for i in ws for j in ws)
        assert L.eta(s) in cx.facets


def test_eta_zeta(name):
    rep = lattice(complex_of(name))
    assert rep["ok"], rep


def test_fiber_bounds_by_brute_force(small):
    # group biclosed sets by eta alone; zeta and fiber_top must be the extremes of each group
    cx = complex_of(small)
    L = Lattice.of(cx)
    groups = {}
    for s in L.biclosed:
        groups.setdefault(L.eta(s), []).append(s)
    assert set(groups) == set(cx.facets)
    for f, ms in groups.items():
        lo, hi = L.zeta(f), L.fiber_top(f)
        assert lo in ms and hi in ms
        assert all(lo & ~m == 0 and m & ~hi == 0 for m in ms)
        assert L.pi_down(hi) == lo


def test_pi_down_is_idempotent_and_below(small):
    L = lat_of(small)
    for s in L.biclosed:
        p = L.pi_down(s)
        assert p & ~s == 0 and L.pi_down(p) == p and L.is_biclosed(p)


def test_omega_sigma_bijections(name):
    cx = complex_of(name)
    L = Lattice.of(cx)
    ds = [L.strings[r] for r in L.distinguishable]
    assert ds == [s for s in L.strings if is_distinguishable(cx.q, s)]
    rigid = set(cx.bending) - set(cx.self_kissing)
    below = [L.omega_bottom(s) for s in ds]
    above = [L.omega_top(s) for s in ds]
    # each is a bijection onto the non-self-kissing walks outside one extreme facet
    assert set(below) == rigid - set(cx.peak_facet.walks) and len(set(below)) == len(ds)
    assert set(above) == rigid - set(cx.deep_facet.walks) and len(set(above)) == len(ds)
    assert [L.sigma_bottom(i) for i in below] == ds
    assert [L.sigma_top(i) for i in above] == ds


def test_join_irreducibles(name):
    rep = join_irreducibles(complex_of(name))
    assert rep["ok"], rep


def test_p2_non_friendly_complex():
    L = lat_of("p2")
    assert len(L.non_friendly_complex()) == 5


@pytest.mark.parametrize("name", ["p2", "p3", "r3", "two_vertex/q03", "two_vertex/q05"])
def test_facet_lattice_semidistributive(name):
    rep = lattice_checks(complex_of(name))
    assert rep == {"is_lattice": True, "is_semidistributive": True, "canonical_joins_exist": True}


def test_facet_poset_join_matches_biclosed_join(small):
    cx = complex_of(small)
    L = Lattice.of(cx)
    P = FacetPoset(cx)
    n = len(P.facets)
    for i in range(n):
        for j in range(n):
            k = P.join(i, j)
            assert P.facets[k] == L.facet_join([P.facets[i], P.facets[j]])
            assert P.facets[P.meet(i, j)] == L.facet_meet(P.facets[i], P.facets[j])


def test_canonical_join_rep_sizes_are_descents(name):
    cx = complex_of(name)
    L = Lattice.of(cx)
    for f in cx.facets[:100]:
        assert len(L.canonical_join_rep(f)) == len(cx.descents(f))


def test_exports():
    L = lat_of("p2")
    js = L.to_json()
    assert len(js["biclosed"]) == 6 and len(js["hasse"]) == 6 and len(js["classes"]) == 5
    assert sorted(len(c["members"]) for c in js["classes"]) == [1, 1, 1, 1, 2]
    assert L.hasse_dot().count("->") == 6


def test_members_roundtrip():
    assert members(0b10110) == [1, 2, 4]
