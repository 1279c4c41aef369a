"""Closure operator on strings, biclosed sets, the pi-down congruence, the maps
eta and zeta, join-irreducibles, canonical joins and the non-friendly complex.

Sets of strings are int bitsets over the canonical string enumeration."""
from __future__ import annotations

from functools import cached_property
from itertools import combinations

import networkx as nx

from .nonkissing import Facet, NKComplex
from .strings import (
    CapExceeded, StringWord, bottom_words, canonical, compose, format_string,
    inverse, occurrences, prepend_candidates, substring, top_words, vertices_of,
)


def bits(idx):
    out = 0
    for i in idx:
        out |= 1 << i
    return out


def members(s):
    out, i = [], 0
    while s:
        if s & 1:
            out.append(i)
        s >>= 1
        i += 1
    return out


class Lattice:
    """Biclosed sets of strings of a quiver and their relation to non-kissing facets."""

    def __init__(self, cx: NKComplex, max_biclosed=10**6):
        self.cx = cx
        self.q = cx.q
        self.qb = cx.qb
        self.strings = cx.strings
        self.n = len(self.strings)
        self.index = {s: i for i, s in enumerate(self.strings)}
        self.full = (1 << self.n) - 1
        self.max_biclosed = max_biclosed
        # directed words (both orientations) -> index, to skip canonicalisation in hot loops
        self.dindex = dict(self.index)
        for i, x in enumerate(self.strings):
            self.dindex[inverse(self.q, x)] = i
        self._eta = {}
        self._ends_at = {}
        for l in self.qb.letters:
            self._ends_at.setdefault(self.qb.letter_end(l), []).append(l)

    @classmethod
    def of(cls, cx, **kw):
        if getattr(cx, "_lattice", None) is None:
            cx._lattice = cls(cx, **kw)
        return cx._lattice

    # ---------------------------------------------------------- closure

    @cached_property
    def decompositions(self):
        """For each string, the pairs (prefix, suffix) around each of its letters."""
        out = []
        for s in self.strings:
            verts = vertices_of(self.q, s)
            pairs = []
            for k in range(len(s.letters)):
                a = self.index[canonical(self.q, substring(self.q, s, 0, k, verts))]
                b = self.index[canonical(self.q, substring(self.q, s, k + 1, len(s.letters), verts))]
                pairs.append((a, b))
            out.append(pairs)
        return out

    def closure(self, s):
        # parts of a decomposition are shorter, and strings are sorted by length
        for r, pairs in enumerate(self.decompositions):
            if not s >> r & 1:
                for a, b in pairs:
                    if s >> a & 1 and s >> b & 1:
                        s |= 1 << r
                        break
        return s

    def closure_by_compose(self, s):
        """Fixpoint of pairwise composition (slow oracle for closure)."""
        while True:
            cur = [self.strings[i] for i in members(s)]
            new = s
            for x in cur:
                for y in cur:
                    for z in compose(self.q, x, y):
                        new |= 1 << self.index[z]
            if new == s:
                return s
            s = new

    def coclosure(self, s):
        return self.full ^ self.closure(self.full ^ s)

    def is_closed(self, s):
        return self.closure(s) == s

    def is_biclosed(self, s):
        return self.is_closed(s) and self.is_closed(self.full ^ s)

    def to_set(self, s):
        return [self.strings[i] for i in members(s)]

    def from_strings(self, strs):
        return bits(self.index[canonical(self.q, x)] for x in strs)

    # --------------------------------------------------- substring sets

    @cached_property
    def bottom_sets(self):
        return [self._word_bits(bottom_words(self.q, s)) for s in self.strings]

    @cached_property
    def top_sets(self):
        return [self._word_bits(top_words(self.q, s)) for s in self.strings]

    def _word_bits(self, words):
        return bits(self.index[canonical(self.q, w)] for w in words)

    def walk_bottoms(self, i):
        return self._word_bits(self.cx._bottoms[i])

    def walk_tops(self, i):
        return self._word_bits(self.cx._tops[i])

    def pi_down(self, s):
        return bits(r for r in range(self.n) if self.bottom_sets[r] & ~s == 0)

    def pi_up(self, s):
        return bits(r for r in range(self.n) if self.top_sets[r] & s)

    # ------------------------------------------------------ enumeration

    @cached_property
    def biclosed(self):
        """All biclosed sets (sorted) grown by single-string covers from the empty set."""
        return sorted(self.covers, key=lambda s: (bin(s).count("1"), members(s)))

    @cached_property
    def covers(self):
        """Hasse diagram: biclosed set -> list of biclosed sets covering it."""
        seen = {0: None}
        todo = [0]
        while todo:
            s = todo.pop()
            cands = set()
            for r in range(self.n):
                if not s >> r & 1:
                    t = self.closure(s | 1 << r)
                    if self.is_biclosed(t):
                        cands.add(t)
            # every cover is of this form, so covers are the minimal candidates
            seen[s] = sorted(t for t in cands if not any(u != t and u & t == u for u in cands))
            for t in seen[s]:
                if t not in seen:
                    seen[t] = None
                    todo.append(t)
                    if len(seen) > self.max_biclosed:
                        raise CapExceeded(f"more than {self.max_biclosed} biclosed sets")
        return seen

    def biclosed_by_scan(self):
        """Oracle: test every subset."""
        if self.n > 20:
            raise CapExceeded("subset scan limited to 20 strings")
        return sorted((s for s in range(1 << self.n) if self.is_biclosed(s)),
                      key=lambda s: (bin(s).count("1"), members(s)))

    def hasse_graph(self):
        g = nx.DiGraph()
        g.add_nodes_from(self.biclosed)
        for s, ts in self.covers.items():
            for t in ts:
                g.add_edge(s, t)
        return g

    def join(self, s, t):
        return self.closure(s | t)

    def meet(self, s, t):
        return self.coclosure(s & t)

    # -------------------------------------------------------- eta, zeta

    def omega(self, arrow, s):
        """The directed walk omega(arrow, S) grown by the sign rules."""
        qb, q = self.qb, self.q
        a = qb.arrows[arrow]
        fwd = []
        cur = a.target
        while not qb.is_blossom_vertex(cur):
            piece = StringWord(a.target, tuple(fwd))
            sign = -1 if self._in(piece, s) else 1
            last = (arrow, 1) if not fwd else fwd[-1]
            (nxt,) = [l for l in qb.letters_from(cur) if l[1] == sign and qb.composable(last, l)]
            fwd.append(nxt)
            cur = qb.letter_end(nxt)
        back = []   # letters before the arrow, nearest first
        cur = a.source
        while not qb.is_blossom_vertex(cur):
            piece_letters = tuple(reversed(back))
            start = cur
            piece = StringWord(start, piece_letters)
            sign = 1 if self._in(piece, s) else -1
            first = (arrow, 1) if not back else back[-1]
            cands = [l for l in self._ends_at.get(cur, ()) if l[1] == sign and qb.composable(l, first)]
            (prv,) = cands
            back.append(prv)
            cur = qb.letter_start(prv)
        letters = tuple(reversed(back)) + ((arrow, 1),) + tuple(fwd)
        return StringWord(cur, letters)

    def _in(self, piece, s):
        return bool(s >> self.dindex[piece] & 1)

    def eta_walks(self, s):
        """All directed walks omega(alpha, S), keyed by arrow."""
        return {a.id: self.omega(a.id, s) for a in self.qb.arrows}

    def eta(self, s):
        if s not in self._eta:
            ws = {self.cx.walk_id(w) for w in self.eta_walks(s).values()}
            self._eta[s] = Facet(frozenset(ws - self.cx.straight))
        return self._eta[s]

    def zeta(self, facet):
        u = 0
        for i in facet.walks | self.cx.straight:
            u |= self.walk_bottoms(i)
        return self.closure(u)

    def fiber_top(self, facet):
        """Largest biclosed set of the fiber: complement of the closure of the top substrings."""
        u = 0
        for i in facet.walks | self.cx.straight:
            u |= self.walk_tops(i)
        return self.full ^ self.closure(u)

    # ------------------------------------------------ congruence quotient

    @cached_property
    def classes(self):
        """pi-down fibers: representative (pi_down value) -> member sets."""
        out = {}
        for s in self.biclosed:
            out.setdefault(self.pi_down(s), []).append(s)
        return out

    def quotient_graph(self):
        """Hasse diagram of the quotient, nodes labelled by pi_down representatives."""
        g = nx.DiGraph()
        rep = {s: self.pi_down(s) for s in self.biclosed}
        g.add_nodes_from(self.classes)
        for s, ts in self.covers.items():
            for t in ts:
                if rep[s] != rep[t]:
                    g.add_edge(rep[s], rep[t])
        return g

    def is_interval(self, members_):
        lo = min(members_, key=lambda s: bin(s).count("1"))
        hi = max(members_, key=lambda s: bin(s).count("1"))
        if any(lo & ~m or m & ~hi for m in members_):
            return False
        inside = [s for s in self.biclosed if lo & ~s == 0 and s & ~hi == 0]
        return sorted(inside) == sorted(members_)

    # ------------------------------------------------ join-irreducibles

    def sigma_closure_bottom(self, s):
        return self.closure(self.bottom_sets[self.index[canonical(self.q, s)]])

    def ji(self, s):
        return self.eta(self.sigma_closure_bottom(s))

    def canonical_join_rep(self, facet):
        return {self.ji(s) for s in self.cx.descents(facet)}

    def facet_join(self, facets):
        u = 0
        for f in facets:
            u |= self.zeta(f)
        return self.eta(self.closure(u))

    def facet_meet(self, f, g):
        return self.eta(self.meet(self.zeta(f), self.zeta(g)))

    # -------------------------------------------------- bijections

    def omega_bottom(self, s):
        """Walk containing a'.s.b'^-1 (incoming a', b') grown from closure of its bottoms."""
        s = canonical(self.q, s)
        S = self.sigma_closure_bottom(s)
        (a,) = prepend_candidates(self.qb, s, 1) if s.letters else sorted(self.qb.in_arrows(s.start))[:1]
        return self.cx.walk_id(self.omega(a, S))

    def omega_top(self, s):
        """Dual: walk containing a'^-1.s.b' (outgoing a', b') grown from the complement
        of the closure of its top substrings."""
        s = canonical(self.q, s)
        S = self.full ^ self.closure(self.top_sets[self.index[s]])
        (a,) = prepend_candidates(self.qb, s, -1) if s.letters else sorted(self.qb.out_arrows(s.start))[:1]
        return self.cx.walk_id(self.omega(a, S))

    def sigma_bottom(self, i):
        return self._sigma_min(i, bottom=True)

    def sigma_top(self, i):
        return self._sigma_min(i, bottom=False)

    def _sigma_min(self, i, bottom):
        w = self.cx.walks[i]
        verts = vertices_of(self.qb, w)
        sets = self.bottom_sets if bottom else self.top_sets
        target = self.closure(self.walk_bottoms(i) if bottom else self.walk_tops(i))
        occ = []
        for o in occurrences(self.qb, w, walk=True):
            if (o.bottom if bottom else o.top):
                x = canonical(self.q, substring(self.qb, w, o.i, o.j, verts))
                if self.closure(sets[self.index[x]]) == target:
                    occ.append((o.i, o.j, x))
        if not occ:
            raise ValueError("walk has no suitable substring (peak/deep facet walk?)")
        minimal = {x for i0, j0, x in occ
                   if not any((i1, j1) != (i0, j0) and i0 <= i1 and j1 <= j0 for i1, j1, _ in occ)}
        if len(minimal) != 1:
            raise AssertionError("inclusion-minimal substring is not unique")
        return minimal.pop()

    # ----------------------------------------------- non-friendly complex

    @cached_property
    def distinguishable(self):
        return [r for r in range(self.n) if self.top_sets[r] & self.bottom_sets[r] == 1 << r]

    def non_friendly(self, r, t):
        return not (self.top_sets[r] & self.bottom_sets[t]) and not (self.bottom_sets[r] & self.top_sets[t])

    def non_friendly_complex(self):
        g = nx.Graph()
        g.add_nodes_from(self.distinguishable)
        for r, t in combinations(self.distinguishable, 2):
            if self.non_friendly(r, t):
                g.add_edge(r, t)
        faces = {frozenset()}
        faces |= {frozenset(c) for c in nx.enumerate_all_cliques(g)}
        return faces

    # -------------------------------------------------------- export

    def to_json(self):
        bic = self.biclosed
        pos = {s: k for k, s in enumerate(bic)}
        fmt = lambda s: [format_string(self.q, x) for x in self.to_set(s)]
        cls = sorted(self.classes.items(), key=lambda kv: pos[kv[0]])
        return {
            "biclosed": [fmt(s) for s in bic],
            "hasse": [[pos[s], pos[t]] for s in bic for t in self.covers[s]],
            "classes": [{"members": [pos[m] for m in ms], "facet": [self.cx.walk_token(i) for i in sorted(self.eta(rep).walks)]}
                        for rep, ms in cls],
            "non_friendly_complex": sorted(sorted(format_string(self.q, self.strings[r]) for r in f)
                                           for f in self.non_friendly_complex()),
        }

    def hasse_dot(self):
        bic = self.biclosed
        pos = {s: k for k, s in enumerate(bic)}
        lines = ["digraph bicl {"]
        for s in bic:
            label = ", ".join(format_string(self.q, x) for x in self.to_set(s)) or "{}"
            lines.append(f'  B{pos[s]} [label="{label}"];')
        for s in bic:
            for t in self.covers[s]:
                lines.append(f"  B{pos[s]} -> B{pos[t]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ NKL

class FacetPoset:
    """The non-kissing lattice as the transitive closure of the increasing flip graph."""

    def __init__(self, cx: NKComplex):
        self.cx = cx
        self.facets, edges = cx.flip_graph
        self.pos = {f: k for k, f in enumerate(self.facets)}
        n = len(self.facets)
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        g.add_edges_from((self.pos[a], self.pos[b]) for a, b, *_ in edges)
        self.graph = g
        self.leq = [[False] * n for _ in range(n)]
        for i in range(n):
            self.leq[i][i] = True
            for j in nx.descendants(g, i):
                self.leq[i][j] = True

    def join(self, i, j):
        ub = [k for k in range(len(self.facets)) if self.leq[i][k] and self.leq[j][k]]
        least = [k for k in ub if all(self.leq[k][m] for m in ub)]
        return least[0] if len(least) == 1 else None

    def meet(self, i, j):
        lb = [k for k in range(len(self.facets)) if self.leq[k][i] and self.leq[k][j]]
        great = [k for k in lb if all(self.leq[m][k] for m in lb)]
        return great[0] if len(great) == 1 else None

    def lower_covers(self, i):
        return sorted(self.graph.predecessors(i))


def lattice_checks(cx, cap=400):
    """Brute-force lattice, semidistributivity and canonical-join checks on NKL."""
    P = FacetPoset(cx)
    n = len(P.facets)
    if n > cap:
        raise CapExceeded(f"{n} facets exceed the brute-force cap {cap}")
    J = [[P.join(i, j) for j in range(n)] for i in range(n)]
    M = [[P.meet(i, j) for j in range(n)] for i in range(n)]
    is_lattice = all(x is not None for row in J + M for x in row)
    sd = is_lattice
    if is_lattice:
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if J[x][y] == J[x][z] and J[x][M[y][z]] != J[x][y]:
                        sd = False
                    if M[x][y] == M[x][z] and M[x][J[y][z]] != M[x][y]:
                        sd = False
    lat = Lattice.of(cx)
    cj_ok = is_lattice
    if is_lattice:
        for x in range(n):
            # the canonical join representation from the lattice alone
            expected = set()
            for y in P.lower_covers(x):
                cands = [w for w in range(n) if P.leq[w][x] and J[w][y] == x]
                mins = [w for w in cands if not any(u != w and P.leq[u][w] for u in cands)]
                if len(mins) != 1:
                    cj_ok = False
                    break
                expected.add(mins[0])
            rep = {P.pos[f] for f in lat.canonical_join_rep(P.facets[x])}
            if rep != expected:
                cj_ok = False
    return {"is_lattice": is_lattice, "is_semidistributive": sd, "canonical_joins_exist": cj_ok}
