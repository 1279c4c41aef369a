"""Walks on the blossoming quiver, kissing, non-kissing facets, distinguished
data, flips and the oriented flip graph."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property, cmp_to_key

import networkx as nx

from .quiver import blossoming, is_nk_finite
from .strings import (
    NegSimple, StringWord, ZERO, CapExceeded, add_cohook_end, add_cohook_start,
    bottom_words, canonical, enumerate_strings, format_string, inverse,
    occurrences, remove_hook_start, starts_in_deep, top_words, vertices_of,
)


class InfiniteTypeError(ValueError):
    """The quiver has infinitely many strings (a band exists)."""


@dataclass(frozen=True)
class Facet:
    """A reduced non-kissing facet: the set of its bending walk indices."""
    walks: frozenset

    def __iter__(self):
        return iter(sorted(self.walks))

    def __len__(self):
        return len(self.walks)


@dataclass(frozen=True)
class Distinguished:
    positions: tuple      # distinguished letter positions on the canonical word
    string: StringWord    # distinguished substring (over the unblossomed quiver)
    sign: int             # +1 if the string is on top of the walk


@dataclass(frozen=True)
class FlipResult:
    facet: Facet
    out_walk: int
    in_walk: int
    mu: int
    nu: int
    sigma: StringWord
    increasing: bool


def _fill(qb, s, sign):
    """Extend s forward with letters of the given sign until a blossom is reached."""
    while not qb.is_blossom_vertex(qb.letter_end(s.letters[-1])):
        last = s.letters[-1]
        nxt = [l for l in qb.letters_from(qb.letter_end(last)) if l[1] == sign and qb.composable(last, l)]
        assert len(nxt) == 1
        s = StringWord(s.start, s.letters + (nxt[0],))
    return s


def enumerate_walks(qb, cap=None):
    """All undirected walks of a blossoming quiver, canonical and sorted."""
    found = set()
    for b in qb.vertices:
        if not b.is_blossom:
            continue
        (a,) = qb.out_arrows(b.id) + qb.in_arrows(b.id)
        first = (a, 1) if qb.arrows[a].source == b.id else (a, -1)
        stack = [StringWord(b.id, (first,))]
        while stack:
            s = stack.pop()
            end = qb.letter_end(s.letters[-1])
            if qb.is_blossom_vertex(end):
                found.add(canonical(qb, s))
                if cap is not None and len(found) > cap:
                    raise CapExceeded(f"more than {cap} walks")
                continue
            if cap is not None and len(s.letters) > 4 * cap:
                raise CapExceeded("walk length exceeds cap")
            last = s.letters[-1]
            for l in qb.letters_from(end):
                if qb.composable(last, l):
                    stack.append(StringWord(s.start, s.letters + (l,)))
    return sorted(found, key=lambda w: (len(w.letters), w.letters))


def is_straight(w):
    return len({e for _, e in w.letters}) == 1


class NKComplex:
    """Non-kissing complex of a gentle quiver, with all walk-level data cached."""

    def __init__(self, q, max_strings=10**4, max_facets=10**5):
        if not is_nk_finite(q):
            raise InfiniteTypeError("the quiver is not nk-finite (it has a band)")
        self.q = q
        self.bq = blossoming(q)
        self.qb = self.bq.quiver
        self.max_strings = max_strings
        self.max_facets = max_facets
        self.walks = enumerate_walks(self.qb, cap=max_strings)
        self.index = {w: i for i, w in enumerate(self.walks)}
        self.straight = frozenset(i for i, w in enumerate(self.walks) if is_straight(w))
        self._dist_cache = {}

    # ----------------------------------------------------------- basic data

    @cached_property
    def strings(self):
        return enumerate_strings(self.q, cap=self.max_strings)

    @cached_property
    def _tops(self):
        return [top_words(self.qb, w, walk=True) for w in self.walks]

    @cached_property
    def _bottoms(self):
        return [bottom_words(self.qb, w, walk=True) for w in self.walks]

    @cached_property
    def kn(self):
        """kn[i][j]: kisses where walk i is on top and walk j at the bottom."""
        n = len(self.walks)
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            ti = self._tops[i]
            if not ti:
                continue
            for j in range(n):
                bj = self._bottoms[j]
                out[i][j] = sum(c * bj[w] for w, c in ti.items() if w in bj)
        return out

    def kiss_count(self, i, j):
        return self.kn[i][j]

    def kisses(self, i, j):
        return self.kn[i][j] > 0 or self.kn[j][i] > 0

    @cached_property
    def self_kissing(self):
        return frozenset(i for i in range(len(self.walks)) if self.kn[i][i] > 0)

    @cached_property
    def bending(self):
        """Non-self-kissing bending walks: the vertices of the reduced complex."""
        return tuple(i for i in range(len(self.walks))
                     if i not in self.straight and i not in self.self_kissing)

    def walk_token(self, i):
        return format_string(self.qb, self.walks[i])

    def walk_id(self, w):
        return self.index[canonical(self.qb, w)]

    # ------------------------------------------------------ peak/deep walks

    def peak_walk(self, v):
        g, d = sorted(self.qb.out_arrows(v))
        p1 = _fill(self.qb, StringWord(v, ((g, 1),)), 1)
        p2 = _fill(self.qb, StringWord(v, ((d, 1),)), 1)
        return self.walk_id(StringWord(inverse(self.qb, p1).start, inverse(self.qb, p1).letters + p2.letters))

    def deep_walk(self, v):
        a, b = sorted(self.qb.in_arrows(v))
        p1 = _fill(self.qb, StringWord(v, ((a, -1),)), -1)
        p2 = _fill(self.qb, StringWord(v, ((b, -1),)), -1)
        return self.walk_id(StringWord(inverse(self.qb, p1).start, inverse(self.qb, p1).letters + p2.letters))

    @cached_property
    def peak_facet(self):
        return Facet(frozenset(self.peak_walk(v) for v in range(self.q.n0)))

    @cached_property
    def deep_facet(self):
        return Facet(frozenset(self.deep_walk(v) for v in range(self.q.n0)))

    # ------------------------------------------------- strings <-> walks

    def string_to_walk(self, s):
        """omega(s): add a cohook at both ends inside the blossoming quiver."""
        if isinstance(s, NegSimple):
            return self.deep_walk(s.vertex)
        return self.walk_id(self.directed_walk_of(s))

    def directed_walk_of(self, s):
        return add_cohook_end(self.qb, add_cohook_start(self.qb, s))

    def walk_to_string(self, i):
        """Inverse of string_to_walk on bending walks."""
        if i in self.straight:
            raise ValueError("a straight walk has no associated string")
        return walk_word_to_string(self.qb, self.walks[i], self.q)

    # ------------------------------------------------------- g-vectors

    def g_vector(self, i):
        return g_vector_walk(self.qb, self.walks[i], self.q.n0)

    # -------------------------------------------- countercurrent order

    def _oriented(self, i, pos):
        letters = self.walks[i].letters
        if letters[pos][1] > 0:
            return letters, pos
        return tuple((a, -e) for a, e in reversed(letters)), len(letters) - 1 - pos

    def countercurrent_cmp(self, m1, m2):
        """-1 if marked walk m1 precedes m2 at their common marked arrow, 1 if after, 0 if equal."""
        (l1, p1), (l2, p2) = self._oriented(*m1), self._oriented(*m2)
        if l1[p1][0] != l2[p2][0]:
            raise ValueError("marks on different arrows")
        k = 1
        while p1 + k < len(l1) and p2 + k < len(l2) and l1[p1 + k] == l2[p2 + k]:
            k += 1
        if p1 + k < len(l1) and p2 + k < len(l2):
            return -1 if l1[p1 + k][1] > 0 else 1
        k = 1
        while p1 - k >= 0 and p2 - k >= 0 and l1[p1 - k] == l2[p2 - k]:
            k += 1
        if p1 - k >= 0 and p2 - k >= 0:
            return -1 if l1[p1 - k][1] > 0 else 1
        return 0

    def countercurrent_less(self, m1, m2):
        return self.countercurrent_cmp(m1, m2) < 0

    def marked(self, full, arrow):
        return [(i, p) for i in sorted(full) for p, (a, _) in enumerate(self.walks[i].letters) if a == arrow]

    def dw(self, full, arrow):
        """Distinguished marked walk (walk, position) of a set of walks at an arrow."""
        return max(self.marked(full, arrow), key=cmp_to_key(self.countercurrent_cmp))

    def full(self, facet):
        return frozenset(facet.walks) | self.straight

    # ---------------------------------------------------- distinguished

    def distinguished_map(self, facet):
        """arrow of the blossoming quiver -> (walk, position) of its distinguished walk."""
        full = self.full(facet)
        return {a.id: self.dw(full, a.id) for a in self.qb.arrows}

    def distinguished(self, facet):
        """walk -> Distinguished for each bending walk of the facet."""
        if facet in self._dist_cache:
            return self._dist_cache[facet]
        per = {}
        for _, (i, p) in self.distinguished_map(facet).items():
            per.setdefault(i, []).append(p)
        out = {}
        for i in facet.walks:
            ps = sorted(per.get(i, []))
            if len(ps) != 2:
                raise AssertionError(f"walk {self.walk_token(i)} has {len(ps)} distinguished arrows")
            p, r = ps
            letters = self.walks[i].letters
            if letters[p][1] < 0 < letters[r][1]:
                sign = 1
            elif letters[r][1] < 0 < letters[p][1]:
                sign = -1
            else:
                raise AssertionError("distinguished arrows point in the same direction")
            verts = vertices_of(self.qb, self.walks[i])
            ds = canonical(self.q, StringWord(verts[p + 1], letters[p + 1:r]))
            out[i] = Distinguished((p, r), ds, sign)
        self._dist_cache[facet] = out
        return out

    def descents(self, facet):
        return sorted(d.string for d in self.distinguished(facet).values() if d.sign < 0)

    def ascents(self, facet):
        return sorted(d.string for d in self.distinguished(facet).values() if d.sign > 0)

    def c_vector(self, i, facet):
        d = self.distinguished(facet)[i]
        m = [0] * self.q.n0
        for v in vertices_of(self.q, d.string):
            m[v] += d.sign
        return tuple(m)

    # ------------------------------------------------------------ flips

    def _partner(self, letter, at_start_vertex):
        """Arrow forming a relation with the arrow of `letter` at the vertex given."""
        qb = self.qb
        a, e = letter
        incoming = (e > 0) != at_start_vertex  # arrow enters the vertex
        if incoming:
            (b,) = [b for b in qb.out_arrows(qb.arrows[a].target) if (a, b) in qb.relations]
        else:
            (b,) = [b for b in qb.in_arrows(qb.arrows[a].source) if (b, a) in qb.relations]
        return b

    def flip(self, facet, i):
        """Flip the bending walk i out of the facet (constructive)."""
        if i not in facet.walks:
            raise ValueError("walk not in facet")
        d = self.distinguished(facet)[i]
        p, r = d.positions
        letters = self.walks[i].letters
        verts = vertices_of(self.qb, self.walks[i])
        v, w = verts[p + 1], verts[r]
        a2 = self._partner(letters[p], at_start_vertex=False)
        b2 = self._partner(letters[r], at_start_vertex=True)
        rest = self.full(facet) - {i}
        mu, pm = self.dw(rest, a2)
        nu, pn = self.dw(rest, b2)
        prefix = self._orient_prefix(mu, pm, v, letters[p + 1:])
        suffix = self._orient_suffix(nu, pn, w, letters[:r])
        start = self.qb.letter_start(prefix[0])
        new = canonical(self.qb, StringWord(start, prefix + letters[p + 1:r] + suffix))
        j = self.index[new]
        nf = Facet(frozenset(facet.walks - {i} | {j}))
        return FlipResult(nf, i, j, mu, nu, d.string, d.sign > 0)

    def _orient_prefix(self, k, pos, v, tail):
        qb = self.qb
        for letters, p in self._both(k, pos):
            if qb.letter_end(letters[p]) == v and letters[p + 1:] == tail:
                return letters[:p + 1]
        raise AssertionError("flip: the walk at the partner arrow does not end with the expected tail")

    def _orient_suffix(self, k, pos, w, head):
        qb = self.qb
        for letters, p in self._both(k, pos):
            if qb.letter_start(letters[p]) == w and letters[:p] == head:
                return letters[p:]
        raise AssertionError("flip: the walk at the partner arrow does not start with the expected head")

    def _both(self, k, pos):
        letters = self.walks[k].letters
        yield letters, pos
        yield tuple((a, -e) for a, e in reversed(letters)), len(letters) - 1 - pos

    def flip_bruteforce(self, facet, i):
        """All walks other than i compatible with the rest of the facet."""
        rest = facet.walks - {i}
        return [j for j in self.bending if j != i and j not in rest
                and all(not self.kisses(j, k) for k in rest)]

    # ------------------------------------------------------ facets, graph

    @cached_property
    def flip_graph(self):
        """(facets sorted, increasing edges (F, F', walk out, walk in, sigma))."""
        start = self.peak_facet
        seen = {start}
        queue = deque([start])
        edges = {}
        while queue:
            f = queue.popleft()
            for i in sorted(f.walks):
                res = self.flip(f, i)
                g = res.facet
                key = (f, g) if res.increasing else (g, f)
                if key not in edges:
                    out_w, in_w = (i, res.in_walk) if res.increasing else (res.in_walk, i)
                    edges[key] = (out_w, in_w, res.sigma)
                if g not in seen:
                    seen.add(g)
                    if len(seen) > self.max_facets:
                        raise CapExceeded(f"more than {self.max_facets} facets")
                    queue.append(g)
        facets = sorted(seen, key=lambda f: sorted(f.walks))
        edge_list = sorted(((a, b) + v for (a, b), v in edges.items()),
                           key=lambda e: (facets.index(e[0]), facets.index(e[1])))
        return facets, edge_list

    @property
    def facets(self):
        return self.flip_graph[0]

    def facet_index(self, facet):
        return self._facet_pos[facet]

    @cached_property
    def _facet_pos(self):
        return {f: k for k, f in enumerate(self.facets)}

    def clique_facets(self):
        """Independent oracle: maximal cliques of the non-kissing graph."""
        g = nx.Graph()
        g.add_nodes_from(self.bending)
        for x in self.bending:
            for y in self.bending:
                if x < y and not self.kisses(x, y):
                    g.add_edge(x, y)
        return {Facet(frozenset(c)) for c in nx.find_cliques(g)}

    # -------------------------------------------- bottom/top bijections

    def omega_bottom(self, s):
        from .lattice import Lattice
        return Lattice.of(self).omega_bottom(s)

    def sigma_bottom(self, i):
        from .lattice import Lattice
        return Lattice.of(self).sigma_bottom(i)

    def omega_top(self, s):
        from .lattice import Lattice
        return Lattice.of(self).omega_top(s)

    def sigma_top(self, i):
        from .lattice import Lattice
        return Lattice.of(self).sigma_top(i)

    # ------------------------------------------------------------ export

    def facet_json(self, facet):
        dist = self.distinguished(facet)
        return {
            "walks": [
                {"walk": self.walk_token(i),
                 "distinguished_arrows": [self.qb.aname(self.walks[i].letters[p][0]) for p in dist[i].positions],
                 "distinguished_string": format_string(self.q, dist[i].string),
                 "sign": dist[i].sign}
                for i in sorted(facet.walks)],
        }

    def flip_graph_json(self):
        facets, edges = self.flip_graph
        pos = {f: k for k, f in enumerate(facets)}
        return {
            "facets": [[self.walk_token(i) for i in sorted(f.walks)] for f in facets],
            "edges": [{"source": pos[a], "target": pos[b], "string": format_string(self.q, s)}
                      for a, b, _, _, s in edges],
        }

    def flip_graph_dot(self):
        facets, edges = self.flip_graph
        pos = {f: k for k, f in enumerate(facets)}
        lines = ["digraph flips {"]
        for f, k in pos.items():
            label = "\\n".join(self.walk_token(i) for i in sorted(f.walks))
            lines.append(f'  F{k} [label="{label}"];')
        for a, b, _, _, s in edges:
            lines.append(f'  F{pos[a]} -> F{pos[b]} [label="{format_string(self.q, s)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def walk_word_to_string(qb, w, q):
    """Strip the blossom cohooks of a bending walk; deep walks give -v."""
    letters = w.letters
    p = next((k for k, (_, e) in enumerate(letters) if e < 0), None)
    r = next((k for k in range(len(letters) - 1, -1, -1) if letters[k][1] > 0), None)
    if p is None or r is None:
        raise ValueError("a straight walk has no associated string")
    verts = vertices_of(qb, w)
    if p == r + 1:
        return NegSimple(verts[p])
    if p > r:
        raise ValueError("not a bending walk")
    return canonical(q, StringWord(verts[p + 1], letters[p + 1:r]))


def g_vector_walk(qb, w, n0):
    """Peaks minus deeps (corners at non-blossom positions)."""
    g = [0] * n0
    verts = vertices_of(qb, w)
    for o in occurrences(qb, w, walk=True):
        if o.i == o.j:
            g[verts[o.i]] += 1 if o.top else -1
    return tuple(g)


def walk_ar_move(cx, s):
    """For a directed string s, return (s', directed omega(s'), _c(_{h^-1} omega(s))) or None.

    s' = _c s if s does not start in a deep, else _{h^-1} s; None when s' is zero."""
    q, qb = cx.q, cx.qb
    if starts_in_deep(q, s):
        s2 = remove_hook_start(q, s)
    else:
        s2 = add_cohook_start(q, s)
    if s2 is ZERO:
        return None
    w = cx.directed_walk_of(s)
    moved = remove_hook_start(qb, w)
    moved = add_cohook_start(qb, moved)
    return s2, cx.directed_walk_of(s2), moved
