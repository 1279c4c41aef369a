"""Gentle bound quivers: parsing, validation, blossoming, reversal, blinding."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from itertools import product

# a letter is (arrow id, sign) with sign +1 for the arrow, -1 for its formal inverse
Letter = tuple


class QuiverError(ValueError):
    """Malformed quiver description."""

    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass(frozen=True)
class Vertex:
    id: int
    name: str
    is_blossom: bool = False


@dataclass(frozen=True)
class Arrow:
    id: int
    name: str
    source: int
    target: int
    is_blossom: bool = False


@dataclass(frozen=True)
class GentleQuiver:
    vertices: tuple
    arrows: tuple
    relations: frozenset = frozenset()

    @classmethod
    def build(cls, vertex_names, arrows, relations=(), blossom_vertices=()):
        """Build from names: arrows are (name, src, tgt), relations (name, name)."""
        blossom_vertices = set(blossom_vertices)
        vs = tuple(Vertex(i, n, n in blossom_vertices) for i, n in enumerate(vertex_names))
        vid = {v.name: v.id for v in vs}
        if len(vid) != len(vs):
            raise QuiverError("duplicate vertex name")
        arr = []
        for i, (name, s, t) in enumerate(arrows):
            if s not in vid or t not in vid:
                raise QuiverError(f"arrow {name} uses unknown vertex")
            blossom = vs[vid[s]].is_blossom or vs[vid[t]].is_blossom
            arr.append(Arrow(i, name, vid[s], vid[t], blossom))
        aid = {a.name: a.id for a in arr}
        if len(aid) != len(arr):
            raise QuiverError("duplicate arrow name")
        rels = set()
        for a, b in relations:
            if a not in aid or b not in aid:
                raise QuiverError(f"relation {a} {b} uses unknown arrow")
            if arr[aid[a]].target != arr[aid[b]].source:
                raise QuiverError(f"relation {a} {b} is not composable")
            rels.add((aid[a], aid[b]))
        return cls(vs, tuple(arr), frozenset(rels))

    # -- basic accessors

    @cached_property
    def n0(self):
        return sum(not v.is_blossom for v in self.vertices)

    @cached_property
    def n1(self):
        return sum(not a.is_blossom for a in self.arrows)

    @cached_property
    def _outs(self):
        out = [[] for _ in self.vertices]
        for a in self.arrows:
            out[a.source].append(a.id)
        return tuple(tuple(x) for x in out)

    @cached_property
    def _ins(self):
        inc = [[] for _ in self.vertices]
        for a in self.arrows:
            inc[a.target].append(a.id)
        return tuple(tuple(x) for x in inc)

    def out_arrows(self, v):
        return self._outs[v]

    def in_arrows(self, v):
        return self._ins[v]

    @cached_property
    def _vid(self):
        return {v.name: v.id for v in self.vertices}

    @cached_property
    def _aid(self):
        return {a.name: a.id for a in self.arrows}

    def vertex_id(self, name):
        if isinstance(name, int):
            return name
        return self._vid[str(name)]

    def arrow_id(self, name):
        if isinstance(name, int):
            return name
        return self._aid[name]

    def vname(self, v):
        return self.vertices[v].name

    def aname(self, a):
        return self.arrows[a].name

    def is_blossom_vertex(self, v):
        return self.vertices[v].is_blossom

    # -- letters

    def letter_start(self, letter):
        a, e = letter
        arr = self.arrows[a]
        return arr.source if e > 0 else arr.target

    def letter_end(self, letter):
        a, e = letter
        arr = self.arrows[a]
        return arr.target if e > 0 else arr.source

    def composable(self, l1, l2):
        """Can letter l2 follow letter l1 inside a string?"""
        if self.letter_end(l1) != self.letter_start(l2):
            return False
        (a, e), (b, f) = l1, l2
        if a == b and e == -f:
            return False
        if e > 0 and f > 0:
            return (a, b) not in self.relations
        if e < 0 and f < 0:
            return (b, a) not in self.relations
        return True

    @cached_property
    def letters(self):
        return tuple((a.id, e) for a in self.arrows for e in (1, -1))

    def letters_from(self, v):
        """Letters starting at vertex v, in (arrow id, sign) order."""
        return tuple(sorted([(a, 1) for a in self.out_arrows(v)] + [(a, -1) for a in self.in_arrows(v)]))

    def summary(self):
        return dict(vertices=self.n0, arrows=self.n1, relations=len(self.relations))


@dataclass(frozen=True)
class BlossomQuiver:
    """Blossoming of a gentle quiver.  The original vertices and arrows keep their ids."""
    quiver: GentleQuiver
    base: GentleQuiver

    def origin_vertex(self, v):
        return v if v < self.base.n0 else None

    def origin_arrow(self, a):
        return a if a < self.base.n1 else None


# ---------------------------------------------------------------- parsing

def parse_quiver(text):
    verts, arrows, rels = None, [], []
    seen_arrows = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        if kw == "vertices":
            if verts is not None:
                raise QuiverError("second 'vertices' line", lineno)
            if len(tok) < 2:
                raise QuiverError("'vertices' needs at least one name", lineno)
            if len(set(tok[1:])) != len(tok) - 1:
                raise QuiverError("duplicate vertex name", lineno)
            verts = tok[1:]
        elif kw == "arrow":
            if len(tok) != 4:
                raise QuiverError("expected 'arrow <name> <src> <tgt>'", lineno)
            if verts is None:
                raise QuiverError("'arrow' before 'vertices'", lineno)
            name, s, t = tok[1:]
            if name in seen_arrows:
                raise QuiverError(f"duplicate arrow name {name}", lineno)
            for x in (s, t):
                if x not in verts:
                    raise QuiverError(f"unknown vertex {x}", lineno)
            seen_arrows.add(name)
            arrows.append((name, s, t))
        elif kw == "relation":
            if len(tok) != 3:
                raise QuiverError("expected 'relation <alpha> <beta>'", lineno)
            a, b = tok[1:]
            known = {x[0]: x for x in arrows}
            for x in (a, b):
                if x not in known:
                    raise QuiverError(f"unknown arrow {x}", lineno)
            if known[a][2] != known[b][1]:
                raise QuiverError(f"relation {a} {b} is not composable", lineno)
            rels.append((a, b))
        else:
            raise QuiverError(f"unknown keyword {kw!r}", lineno)
    if verts is None:
        raise QuiverError("missing 'vertices' line")
    return GentleQuiver.build(verts, arrows, rels)


def parse_quiver_json(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise QuiverError(f"invalid JSON: {e.msg}", e.lineno) from None
    if not isinstance(d, dict) or "vertices" not in d:
        raise QuiverError("JSON quiver needs a 'vertices' list")
    try:
        arrows = []
        for a in d.get("arrows", []):
            if isinstance(a, dict):
                arrows.append((str(a["name"]), str(a["source"]), str(a["target"])))
            else:
                name, s, t = a
                arrows.append((str(name), str(s), str(t)))
        rels = [(str(a), str(b)) for a, b in d.get("relations", [])]
        verts = [str(v) for v in d["vertices"]]
    except (KeyError, TypeError, ValueError) as e:
        raise QuiverError(f"malformed JSON quiver: {e}") from None
    return GentleQuiver.build(verts, arrows, rels)


def load_quiver(path, as_json=None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if as_json is None:
        as_json = str(path).endswith(".json")
    return parse_quiver_json(text) if as_json else parse_quiver(text)


def dump_quiver(q):
    lines = ["vertices " + " ".join(v.name for v in q.vertices)]
    lines += [f"arrow {a.name} {q.vname(a.source)} {q.vname(a.target)}" for a in q.arrows]
    lines += [f"relation {q.aname(a)} {q.aname(b)}" for a, b in sorted(q.relations)]
    return "\n".join(lines) + "\n"


def quiver_to_dict(q):
    return {
        "vertices": [v.name for v in q.vertices],
        "arrows": [{"name": a.name, "source": q.vname(a.source), "target": q.vname(a.target)} for a in q.arrows],
        "relations": [[q.aname(a), q.aname(b)] for a, b in sorted(q.relations)],
    }


# ------------------------------------------------------------- validation

def validate_gentle(q):
    """List of human-readable violations; empty means q is gentle."""
    bad = []
    for a, b in sorted(q.relations):
        if q.arrows[a].target != q.arrows[b].source:
            bad.append(f"relation {q.aname(a)} {q.aname(b)}: not composable")
    for v in q.vertices:
        if len(q.in_arrows(v.id)) > 2:
            bad.append(f"vertex {v.name}: in-degree {len(q.in_arrows(v.id))} > 2")
        if len(q.out_arrows(v.id)) > 2:
            bad.append(f"vertex {v.name}: out-degree {len(q.out_arrows(v.id))} > 2")
    for arr in q.arrows:
        b = arr.id
        pre = q.in_arrows(arr.source)
        free = [a for a in pre if (a, b) not in q.relations]
        rel = [a for a in pre if (a, b) in q.relations]
        if len(free) > 1:
            bad.append(f"arrow {arr.name}: {len(free)} arrows compose with it on the left outside I")
        if len(rel) > 1:
            bad.append(f"arrow {arr.name}: {len(rel)} relations end with it (left uniqueness)")
        post = q.out_arrows(arr.target)
        free = [c for c in post if (b, c) not in q.relations]
        rel = [c for c in post if (b, c) in q.relations]
        if len(free) > 1:
            bad.append(f"arrow {arr.name}: {len(free)} arrows compose with it on the right outside I")
        if len(rel) > 1:
            bad.append(f"arrow {arr.name}: {len(rel)} relations start with it (right uniqueness)")
    return bad


def is_gentle(q):
    return not validate_gentle(q)


# ------------------------------------------------------- transformations

def reversed_quiver(q):
    arrows = tuple(Arrow(a.id, a.name, a.target, a.source, a.is_blossom) for a in q.arrows)
    return GentleQuiver(q.vertices, arrows, frozenset((b, a) for a, b in q.relations))


def blossoming(q):
    if validate_gentle(q):
        raise QuiverError("blossoming needs a gentle quiver")
    names = [v.name for v in q.vertices]
    arrows = [(a.name, q.vname(a.source), q.vname(a.target)) for a in q.arrows]
    rels = {(q.aname(a), q.aname(b)) for a, b in q.relations}
    blossoms = []
    for v in q.vertices:
        ins = [q.aname(a) for a in q.in_arrows(v.id)]
        outs = [q.aname(a) for a in q.out_arrows(v.id)]
        old_in, old_out = set(ins), set(outs)
        for k in range(2 - len(ins)):
            tag = f"{v.name}!in{k + 1}"
            blossoms.append(tag)
            arrows.append((tag, tag, v.name))
            ins.append(tag)
        for k in range(2 - len(outs)):
            tag = f"{v.name}!out{k + 1}"
            blossoms.append(tag)
            arrows.append((tag, v.name, tag))
            outs.append(tag)
        # the relations at v must pair incoming with outgoing arrows perfectly;
        # pick the pairing that keeps existing relations and existing non-relations
        options = []
        for perm in ((0, 1), (1, 0)):
            match = {(ins[i], outs[perm[i]]) for i in range(2)}
            ok = True
            for a, b in product(ins, outs):
                if a in old_in and b in old_out and ((a, b) in rels) != ((a, b) in match):
                    ok = False
            if ok:
                options.append(match)
        assert options, f"no relation completion at {v.name}"
        if old_in and old_out:
            # any original pair through v already fixes the pairing
            assert len(options) == 1, f"ambiguous completion at {v.name}"
        rels |= options[0]
    nq = GentleQuiver.build(names + blossoms, arrows, sorted(rels), blossom_vertices=blossoms)
    return BlossomQuiver(nq, q)


def blind(q, vs):
    """Blind the vertices vs (names or ids): forbid corners there by gluing paths through them."""
    return blind_with_paths(q, vs)[0]


def blind_with_paths(q, vs):
    """Blinded quiver plus, for each of its arrows, the path of original arrow ids it stands for."""
    ids = {q.vertex_id(v) for v in vs}
    if len(ids) >= q.n0:
        raise QuiverError("cannot blind every vertex")
    if any(q.is_blossom_vertex(v) for v in ids):
        raise QuiverError("cannot blind a blossom vertex")
    paths = {a.id: (a.id,) for a in q.arrows}
    for name in [q.vname(v) for v in sorted(ids)]:
        q, paths = _blind_one(q, q.vertex_id(name), paths)
    return q, paths


def _blind_one(q, v, paths):
    if any(q.arrows[a].target == v for a in q.out_arrows(v)):
        raise QuiverError(f"cannot blind vertex {q.vname(v)} carrying a loop")
    keep = [x for x in q.vertices if x.id != v]
    # each new arrow remembers its first and last arrow in q to decide relations
    new = [(a.name, q.vname(a.source), q.vname(a.target), a.id, a.id, paths[a.id])
           for a in q.arrows if v not in (a.source, a.target)]
    for a in q.in_arrows(v):
        for b in q.out_arrows(v):
            if (a, b) not in q.relations:
                name = q.aname(a) + q.aname(b)
                new.append((name, q.vname(q.arrows[a].source), q.vname(q.arrows[b].target), a, b,
                            paths[a] + paths[b]))
    used = set()
    for i, x in enumerate(new):
        name = x[0]
        while name in used:
            name += "'"
        used.add(name)
        new[i] = (name,) + x[1:]
    rels = [(x[0], y[0]) for x in new for y in new
            if x[2] == y[1] and (x[4], y[3]) in q.relations]
    nq = GentleQuiver.build([x.name for x in keep], [x[:3] for x in new], rels,
                            blossom_vertices=[x.name for x in keep if x.is_blossom])
    return nq, {i: x[5] for i, x in enumerate(new)}


# --------------------------------------------------------------- finiteness

def letter_graph(q):
    """Successor map of the letter-transition digraph."""
    return {l1: [l2 for l2 in q.letters if q.composable(l1, l2)] for l1 in q.letters}


def is_nk_finite(q):
    """True iff q has finitely many strings (no band): the letter digraph is acyclic."""
    try:
        tuple(TopologicalSorter(letter_graph(q)).static_order())
    except CycleError:
        return False
    return True
