"""g- and c-vectors, g-vector fan certification, kissing numbers, the
non-kissing associahedron, the zonotope support function and blinding projections.

Everything is exact integer arithmetic."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import networkx as nx
import sympy

from .lattice import Lattice
from .nonkissing import Facet, NKComplex
from .quiver import blind_with_paths
from .strings import vertices_of


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def vadd(*vs):
    return tuple(sum(c) for c in zip(*vs))


def vscale(k, v):
    return tuple(k * c for c in v)


def multiplicity(q, s):
    m = [0] * q.n0
    for v in vertices_of(q, s):
        m[v] += 1
    return tuple(m)


@dataclass(frozen=True)
class FacetFrame:
    facet: Facet
    walks: tuple    # bending walks, sorted
    G: tuple        # g-vectors (one row per walk)
    C: tuple        # c-vectors (same order)
    point: tuple    # x(F)


class Geometry:
    def __init__(self, cx: NKComplex):
        self.cx = cx
        self.q = cx.q
        self.n = cx.q.n0

    # ------------------------------------------------------------ vectors

    def g(self, i):
        return self.cx.g_vector(i)

    def c(self, i, facet):
        return self.cx.c_vector(i, facet)

    @cached_property
    def nk_walks(self):
        return [i for i in range(len(self.cx.walks)) if i not in self.cx.self_kissing]

    @cached_property
    def KN(self):
        """Kissing number of every walk, summed over non-self-kissing walks."""
        kn = self.cx.kn
        return {i: sum(kn[i][j] + kn[j][i] for j in self.nk_walks) for i in range(len(self.cx.walks))}

    def kissing_number(self, i):
        return self.KN[i]

    def frame(self, facet):
        ws = tuple(sorted(facet.walks))
        G = tuple(self.g(i) for i in ws)
        C = tuple(self.c(i, facet) for i in ws)
        x = vadd(*(vscale(self.KN[i], c) for i, c in zip(ws, C))) if ws else ()
        return FacetFrame(facet, ws, G, C, x)

    @cached_property
    def frames(self):
        return {f: self.frame(f) for f in self.cx.facets}

    # ---------------------------------------------------------------- fan

    def check_fan(self, sample_radius=None):
        """Certify the g-vector fan; returns a report with the first witness of each failure."""
        cx = self.cx
        report = {}
        peak = self.frames[cx.peak_facet]
        report["peak_basis"] = sorted(peak.G) == sorted(tuple(int(i == j) for j in range(self.n)) for i in range(self.n))
        bad = []
        for a, b, out_w, in_w, _ in cx.flip_graph[1]:
            res = cx.flip(a, out_w)
            lhs = vadd(self.g(out_w), self.g(in_w))
            rhs = vadd(self.g(res.mu), self.g(res.nu))
            if lhs != rhs:
                bad.append((cx.walk_token(out_w), cx.walk_token(in_w)))
        report["flip_dependence"] = not bad
        if bad:
            report["flip_dependence_witness"] = bad[0]
        dets, dual, coherent, separated = True, True, True, True
        for f, fr in self.frames.items():
            if abs(sympy.Matrix(fr.G).det()) != 1:
                dets = False
            prod = [[dot(gr, cr) for cr in fr.C] for gr in fr.G]
            if prod != [[int(i == j) for j in range(self.n)] for i in range(self.n)]:
                dual = False
            for c in fr.C:
                if min(c) < 0 < max(c):
                    coherent = False
            for v in range(self.n):
                col = [gr[v] for gr in fr.G]
                if min(col) < 0 < max(col):
                    coherent = False
            # a nonpositive c-vector keeps the open cone away from the positive orthant
            if f != cx.peak_facet and not any(max(c) <= 0 for c in fr.C):
                separated = False
        report["det_unimodular"] = dets
        report["dual_bases"] = dual
        report["sign_coherent"] = coherent
        report["peak_cone_isolated"] = separated
        report["thin"] = self._thin()
        report["lattice_points_covered_once"] = self._sample(sample_radius)
        report["ok"] = all(v for k, v in report.items() if not k.endswith("witness"))
        return report

    def _thin(self):
        seen = {}
        for f in self.cx.facets:
            for i in f.walks:
                seen.setdefault(f.walks - {i}, set()).add(f)
        return all(len(v) == 2 for v in seen.values())

    def _sample(self, radius=None):
        """Every integer point off the c-vector hyperplanes lies in exactly one open cone."""
        frames = list(self.frames.values())
        if radius is None:
            radius = 2 if 5 ** self.n * len(frames) <= 2 * 10**5 else 1
        normals = {c for fr in frames for c in fr.C}
        for y in product(range(-radius, radius + 1), repeat=self.n):
            if any(dot(c, y) == 0 for c in normals):
                continue
            hits = sum(all(dot(c, y) > 0 for c in fr.C) for fr in frames)
            if hits != 1:
                return False
        return True

    def fan_json(self):
        rays = sorted({self.g(i) for f in self.cx.facets for i in f.walks})
        pos = {r: k for k, r in enumerate(rays)}
        cones = [sorted(pos[self.g(i)] for i in f.walks) for f in self.cx.facets]
        return {"dim": self.n, "rays": [list(r) for r in rays], "cones": cones}

    # ------------------------------------------------------ associahedron

    def vertices(self):
        return {f: fr.point for f, fr in self.frames.items()}

    def halfspaces(self):
        return {i: (self.g(i), self.KN[i]) for i in self.cx.bending}

    def check_associahedron(self):
        cx = self.cx
        report = {"inequalities": True, "tight_exactly_on_facet": True, "edge_law": True,
                  "strictly_negative": True, "oriented_by_minus_one": True, "submodular": True}
        hs = self.halfspaces()
        for f, fr in self.frames.items():
            for i, (g, kn) in hs.items():
                val = dot(g, fr.point)
                if val > kn:
                    report["inequalities"] = False
                if (val == kn) != (i in f.walks):
                    report["tight_exactly_on_facet"] = False
        for a, b, out_w, in_w, _ in cx.flip_graph[1]:
            res = cx.flip(a, out_w)
            KN = self.KN
            coef = KN[res.mu] + KN[res.nu] - KN[out_w] - KN[in_w]
            c = self.c(out_w, a)
            diff = tuple(y - x for x, y in zip(self.frames[a].point, self.frames[b].point))
            if diff != vscale(coef, c):
                report["edge_law"] = False
            if coef >= 0:
                report["strictly_negative"] = False
            if -sum(diff) <= 0:
                report["oriented_by_minus_one"] = False
            if KN[out_w] + KN[in_w] < KN[res.mu] + KN[res.nu] + 2:
                report["submodular"] = False
        report["ok"] = all(report.values())
        return report

    def polytope_json(self):
        pts = sorted(set(self.vertices().values()))
        return {
            "dim": self.n,
            "vertices": [list(p) for p in pts],
            "inequalities": [{"normal": list(g), "rhs": kn, "walk": self.cx.walk_token(i)}
                             for i, (g, kn) in sorted(self.halfspaces().items())],
        }

    # ----------------------------------------------------------- zonotope

    @cached_property
    def _dist_mult(self):
        lat = Lattice.of(self.cx)
        return [multiplicity(self.q, lat.strings[r]) for r in lat.distinguishable]

    def zonotope_support(self, y):
        return sum(abs(dot(y, m)) for m in self._dist_mult)

    def mutually_kissing(self, i, j):
        return self.cx.kn[i][j] * self.cx.kn[j][i] > 0

    def has_mutually_kissing(self):
        # a self-kissing walk counts as mutually kissing with itself
        n = len(self.cx.walks)
        return any(self.mutually_kissing(i, j) for i in range(n) for j in range(i, n))

    def zonotope_facet_check(self):
        """Walks whose associahedron inequality is not a zonotope inequality."""
        over = [i for i in self.cx.bending if self.zonotope_support(self.g(i)) != self.KN[i]]
        return {"mutually_kissing": self.has_mutually_kissing(),
                "non_zonotope_walks": [self.cx.walk_token(i) for i in over],
                "ok": not over or self.has_mutually_kissing()}


# ------------------------------------------------------------ projections

def corners(cx, i):
    w = cx.walks[i]
    verts = vertices_of(cx.qb, w)
    return {verts[k] for k in range(1, len(w.letters)) if w.letters[k - 1][1] != w.letters[k][1]}


def project_walk(cx, i, V, path_index):
    """Image of a walk with no corner in V inside the blinded quiver, as a key
    (first sign, start vertex name, interior, end vertex name, last sign)."""
    w = cx.walks[i].letters
    verts = vertices_of(cx.qb, cx.walks[i])
    lo, hi = 1, len(w) - 1
    q = cx.q
    while lo < hi and verts[lo] in V:
        lo += 1
    while hi > lo and verts[hi] in V:
        hi -= 1
    out, run = [], []
    for letter in w[lo:hi]:
        run.append(letter)
        if q.letter_end(letter) not in V:
            arrows = tuple(a for a, _ in run)
            sign = run[0][1]
            if sign < 0:
                arrows = arrows[::-1]
            out.append((path_index[arrows], sign))
            run = []
    assert not run
    return (w[0][1], q.vname(verts[lo]), tuple(out), q.vname(verts[hi]), w[-1][1])


def _walk_key(first, s, inner, t, last):
    rev = tuple((a, -e) for a, e in reversed(inner))
    return min((first, s, inner, t, last), (-last, t, rev, s, -first))


def project_check(q, V):
    """Compare the subcomplex of walks without corners in V with the complex of the blinded quiver."""
    V = {q.vertex_id(v) for v in V}
    cx = NKComplex(q)
    if not V:
        return {"ok": True, "walks": len(cx.bending)}
    qv, paths = blind_with_paths(q, V)
    cv = NKComplex(qv)
    path_index = {p: a for a, p in paths.items()}
    keys = {}
    for j in range(len(cv.walks)):
        w = cv.walks[j].letters
        vs = vertices_of(cv.qb, cv.walks[j])
        keys.setdefault(_walk_key(w[0][1], qv.vname(vs[1]), w[1:-1], qv.vname(vs[-2]), w[-1][1]), []).append(j)
    report = {"bijection": True, "kissing_preserved": True, "g_projection": True, "facets_match": True}
    sub = [i for i in cx.bending if not corners(cx, i) & V]
    image = {}
    for i in sub:
        js = keys.get(_walk_key(*project_walk(cx, i, V, path_index)), [])
        if len(js) != 1:
            report["bijection"] = False
            continue
        image[i] = js[0]
    if sorted(image.values()) != sorted(cv.bending) or len(set(image.values())) != len(image):
        report["bijection"] = False
    keep = [v for v in range(q.n0) if v not in V]
    for i, j in image.items():
        g = cx.g_vector(i)
        if any(g[v] for v in V) or tuple(g[v] for v in keep) != cv.g_vector(j):
            report["g_projection"] = False
        for i2, j2 in image.items():
            if cx.kisses(i, i2) != cv.kisses(j, j2):
                report["kissing_preserved"] = False
    if report["bijection"]:
        g = nx.Graph()
        g.add_nodes_from(sub)
        g.add_edges_from((x, y) for x in sub for y in sub if x < y and not cx.kisses(x, y))
        mapped = {frozenset(image[x] for x in c) for c in nx.find_cliques(g)}
        report["facets_match"] = mapped == {f.walks for f in cv.facets}
    else:
        report["facets_match"] = False
    report["walks"] = len(sub)
    report["ok"] = all(v for k, v in report.items() if k != "walks")
    return report
