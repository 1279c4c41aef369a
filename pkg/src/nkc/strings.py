"""Strings of a gentle quiver: enumeration, hooks and cohooks, AR translation,
morphism counts, tau-compatibility and g-vectors."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product


class CapExceeded(RuntimeError):
    """An enumeration grew past its configured cap."""


@dataclass(frozen=True, order=True)
class StringWord:
    """A directed string: a start vertex followed by letters (arrow id, +-1)."""
    start: int
    letters: tuple = ()

    def __len__(self):
        return len(self.letters)


@dataclass(frozen=True, order=True)
class NegSimple:
    """The negative simple string -v."""
    vertex: int


class _Zero:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ZERO"

    def __reduce__(self):
        return (_Zero, ())


ZERO = _Zero()


def vertex_string(v):
    return StringWord(v, ())


def end_vertex(q, s):
    return q.letter_end(s.letters[-1]) if s.letters else s.start


def vertices_of(q, s):
    """Vertex sequence visited by s (length len(s) + 1)."""
    out = [s.start]
    for letter in s.letters:
        out.append(q.letter_end(letter))
    return out


def inverse(q, s):
    return StringWord(end_vertex(q, s), tuple((a, -e) for a, e in reversed(s.letters)))


def canonical(q, s):
    """Representative of the undirected string s (direct letters sort first)."""
    if not isinstance(s, StringWord) or not s.letters:
        return s
    t = inverse(q, s)
    return min(s, t, key=word_key)


def word_key(s):
    return tuple((a, -e) for a, e in s.letters)


def is_string(q, s):
    if not 0 <= s.start < len(q.vertices):
        return False
    if not s.letters:
        return True
    if q.letter_start(s.letters[0]) != s.start:
        return False
    return all(q.composable(x, y) for x, y in zip(s.letters, s.letters[1:]))


def is_direct(s):
    return all(e > 0 for _, e in s.letters)


def is_inverse_path(s):
    return all(e < 0 for _, e in s.letters)


def substring(q, s, i, j, verts=None):
    """Directed substring between vertex positions i <= j."""
    verts = verts or vertices_of(q, s)
    return StringWord(verts[i], s.letters[i:j])


def enumerate_strings(q, cap=None):
    """All undirected strings of q (canonical representatives), sorted by length."""
    found = set()

    def push(s):
        found.add(canonical(q, s))
        if cap is not None and len(found) > cap:
            raise CapExceeded(f"more than {cap} strings")

    for v in q.vertices:
        push(StringWord(v.id))
    stack = [StringWord(q.letter_start(l), (l,)) for l in q.letters]
    while stack:
        s = stack.pop()
        push(s)
        last = s.letters[-1]
        for l in q.letters_from(q.letter_end(last)):
            if q.composable(last, l):
                if cap is not None and len(s.letters) > max(cap, 64):
                    raise CapExceeded("string length exceeds cap; is the quiver nk-finite?")
                stack.append(StringWord(s.start, s.letters + (l,)))
    return sorted(found, key=lambda x: (len(x.letters), word_key(x), x.start))


def almost_positive_strings(q, cap=None):
    return [NegSimple(v.id) for v in q.vertices] + enumerate_strings(q, cap)


# ------------------------------------------------------------ occurrences

@dataclass(frozen=True)
class Occurrence:
    i: int
    j: int
    top: bool
    bottom: bool


def occurrences(q, s, walk=False):
    """Substring occurrences (vertex positions i <= j) with top/bottom flags.

    For walks the two blossom endpoints are excluded."""
    n = len(s.letters)
    lo, hi = (1, n - 1) if walk else (0, n)
    out = []
    for i in range(lo, hi + 1):
        left_in = i == 0 or s.letters[i - 1][1] < 0
        left_out = i == 0 or s.letters[i - 1][1] > 0
        for j in range(i, hi + 1):
            right_in = j == n or s.letters[j][1] > 0
            right_out = j == n or s.letters[j][1] < 0
            top, bottom = left_in and right_in, left_out and right_out
            if top or bottom:
                out.append(Occurrence(i, j, top, bottom))
    return out


def top_words(q, s, walk=False):
    verts = vertices_of(q, s)
    return Counter(canonical(q, substring(q, s, o.i, o.j, verts)) for o in occurrences(q, s, walk) if o.top)


def bottom_words(q, s, walk=False):
    verts = vertices_of(q, s)
    return Counter(canonical(q, substring(q, s, o.i, o.j, verts)) for o in occurrences(q, s, walk) if o.bottom)


def hom_dim(q, rho, rho2):
    """dim Hom(M(rho), M(rho2)): substrings on top of rho and at the bottom of rho2."""
    a, b = top_words(q, rho), bottom_words(q, rho2)
    return sum(n * b[w] for w, n in a.items())


def is_distinguishable(q, s):
    """s is the only string both on top of and at the bottom of s."""
    return set(top_words(q, s)) & set(bottom_words(q, s)) == {canonical(q, s)}


# --------------------------------------------------------- hooks, cohooks

def prepend_candidates(q, s, sign):
    """Arrows x such that x^sign followed by s is a string."""
    v = s.start
    pool = q.in_arrows(v) if sign > 0 else q.out_arrows(v)
    if not s.letters:
        return sorted(set(pool))
    return sorted(a for a in set(pool) if q.composable((a, sign), s.letters[0]))


def _prepend(s, q, a, sign):
    return StringWord(q.letter_start((a, sign)), ((a, sign),) + s.letters)


def starts_on_peak(q, s):
    return not prepend_candidates(q, s, 1)


def starts_in_deep(q, s):
    return not prepend_candidates(q, s, -1)


def ends_on_peak(q, s):
    return starts_on_peak(q, inverse(q, s))


def ends_in_deep(q, s):
    return starts_in_deep(q, inverse(q, s))


def _grow(q, s, sign):
    while True:
        cand = prepend_candidates(q, s, sign)
        if not cand:
            return s
        assert len(cand) == 1
        s = _prepend(s, q, cand[0], sign)


def _add_start(q, s, first_sign):
    # for a vertex string both free slots may qualify; the first arrow by id is used
    cand = prepend_candidates(q, s, first_sign)
    if not cand:
        raise ValueError("no room for a (co)hook at the start")
    return _grow(q, _prepend(s, q, cand[0], first_sign), -first_sign)


def add_hook_start(q, s):
    return _add_start(q, s, 1)


def add_cohook_start(q, s):
    return _add_start(q, s, -1)


def _remove_start(q, s, run_sign):
    k = 0
    while k < len(s.letters) and s.letters[k][1] == run_sign:
        k += 1
    if k == len(s.letters):
        return ZERO
    return StringWord(q.letter_end(s.letters[k]), s.letters[k + 1:])


def remove_hook_start(q, s):
    return _remove_start(q, s, -1)


def remove_cohook_start(q, s):
    return _remove_start(q, s, 1)


def _at_end(op):
    def f(q, s):
        if s is ZERO:
            return ZERO
        r = op(q, inverse(q, s))
        return ZERO if r is ZERO else inverse(q, r)
    return f


def _at_start(op):
    def f(q, s):
        return ZERO if s is ZERO else op(q, s)
    return f


add_hook_end = _at_end(add_hook_start)
add_cohook_end = _at_end(add_cohook_start)
remove_hook_end = _at_end(remove_hook_start)
remove_cohook_end = _at_end(remove_cohook_start)

_OPS = {
    ("start", "hook", "add"): _at_start(add_hook_start),
    ("start", "cohook", "add"): _at_start(add_cohook_start),
    ("start", "hook", "remove"): _at_start(remove_hook_start),
    ("start", "cohook", "remove"): _at_start(remove_cohook_start),
    ("end", "hook", "add"): add_hook_end,
    ("end", "cohook", "add"): add_cohook_end,
    ("end", "hook", "remove"): remove_hook_end,
    ("end", "cohook", "remove"): remove_cohook_end,
}

_SIDE = {
    ("start", "hook", "add"): lambda q, s: not starts_on_peak(q, s),
    ("start", "cohook", "add"): lambda q, s: not starts_in_deep(q, s),
    ("start", "hook", "remove"): starts_in_deep,
    ("start", "cohook", "remove"): starts_on_peak,
    ("end", "hook", "add"): lambda q, s: not ends_on_peak(q, s),
    ("end", "cohook", "add"): lambda q, s: not ends_in_deep(q, s),
    ("end", "hook", "remove"): ends_in_deep,
    ("end", "cohook", "remove"): ends_on_peak,
}


def hook_op(q, s, end, kind, mode):
    """Add or remove a hook or cohook at the start or end of s (checked)."""
    key = (end, kind, mode)
    if key not in _OPS:
        raise ValueError(f"unknown operation {key}")
    if not _SIDE[key](q, s):
        raise ValueError(f"{mode} {kind} at the {end} is undefined for this string")
    return _OPS[key](q, s)


# ------------------------------------------------------------ AR translation

def _slot_flags(q, s, degree):
    # a vertex string: 0 free arrows -> both sides blocked, 1 -> only the start side
    d = len(degree(s.start))
    return d == 0, d < 2


def ar_translate(q, s):
    """String of tau M(s), or ZERO when M(s) is projective."""
    if s.letters:
        sd, ed = starts_in_deep(q, s), ends_in_deep(q, s)
    else:
        sd, ed = _slot_flags(q, s, q.out_arrows)
    if not sd and not ed:
        r = add_cohook_end(q, add_cohook_start(q, s))
    elif sd and not ed:
        r = _at_start(remove_hook_start)(q, add_cohook_end(q, s))
    elif not sd and ed:
        r = remove_hook_end(q, add_cohook_start(q, s))
    else:
        r = remove_hook_end(q, _at_start(remove_hook_start)(q, s))
    return canonical(q, r)


def ar_inverse(q, s):
    """String of tau^-1 M(s), or ZERO when M(s) is injective."""
    if s.letters:
        sp, ep = starts_on_peak(q, s), ends_on_peak(q, s)
    else:
        sp, ep = _slot_flags(q, s, q.in_arrows)
    if not sp and not ep:
        r = add_hook_end(q, add_hook_start(q, s))
    elif sp and not ep:
        r = _at_start(remove_cohook_start)(q, add_hook_end(q, s))
    elif not sp and ep:
        r = remove_cohook_end(q, add_hook_start(q, s))
    else:
        r = remove_cohook_end(q, _at_start(remove_cohook_start)(q, s))
    return canonical(q, r)


# ------------------------------------------------- attract / reach for

def _orientations(q, s):
    t = inverse(q, s)
    return [s] if t == s else [s, t]


def attracts(q, rho, rho2):
    """rho attracts rho2: some cohook of rho2 starts with a direct path on top of rho."""
    if not isinstance(rho, StringWord) or not isinstance(rho2, StringWord):
        return False
    tops = set(top_words(q, rho))
    for r in _orientations(q, rho2):
        for a in prepend_candidates(q, r, -1):
            c = _grow(q, _prepend(r, q, a, -1), 1)
            direct = c.letters[:len(c.letters) - len(r.letters) - 1]
            # suffixes alpha_k ... alpha_1 of the direct part, down to the vertex t(alpha)
            for k in range(len(direct) + 1):
                w = StringWord(q.letter_start(direct[k]) if k < len(direct) else q.arrows[a].target,
                               direct[k:])
                if canonical(q, w) in tops:
                    return True
    return False


def reaches_for(q, rho, rho2):
    """rho reaches for rho2: a common substring on top of rho and at the bottom of
    rho2 whose missing arms on rho2 can be swung from rho."""
    if isinstance(rho2, NegSimple) or rho is ZERO or rho2 is ZERO:
        return False
    if isinstance(rho, NegSimple):
        return rho.vertex in vertices_of(q, rho2)
    vr = vertices_of(q, rho)
    tops = [(o.i, o.j, substring(q, rho, o.i, o.j, vr)) for o in occurrences(q, rho) if o.top]
    for r in _orientations(q, rho2) if rho2.letters else [rho2]:
        n2 = len(r.letters)
        vr2 = vertices_of(q, r)
        for o in occurrences(q, r):
            if not o.bottom:
                continue
            xi = substring(q, r, o.i, o.j, vr2)
            for i, j, w in tops:
                for wi, wj, ww in ((i, j, w), (len(rho) - j, len(rho) - i, inverse(q, w))):
                    if ww != xi:
                        continue
                    rl = rho.letters if ww is w else inverse(q, rho).letters
                    if _arms_ok(q, r, o.i, o.j, n2, rl, wi, wj):
                        return True
    return False


def _arms_ok(q, r, k, m, n2, rl, i, j):
    # i, j locate the common substring in rho; k, m locate it in rho2
    if k == 0:
        if i == 0 or (r.letters and not q.composable(rl[i - 1], r.letters[0])):
            return False
    if m == n2:
        if j == len(rl) or (r.letters and not q.composable(r.letters[-1], rl[j])):
            return False
    return True


def tau_compatible(q, rho, rho2):
    """Neither string attracts or reaches for the other."""
    return not any(f(q, x, y) for f in (attracts, reaches_for)
                   for x, y in ((rho, rho2), (rho2, rho)))


def tau_compatibility_matrix(q, strings):
    return [[tau_compatible(q, x, y) for y in strings] for x in strings]


# -------------------------------------------------------------- g-vectors

def g_vector_string(q, s):
    """g-vector of M(s) (minus e_v for -v), over the vertices of q."""
    g = [0] * len(q.vertices)
    if isinstance(s, NegSimple):
        g[s.vertex] = -1
        return tuple(g)
    verts = vertices_of(q, s)
    n = len(s.letters)
    for o in occurrences(q, s):
        if o.i == o.j:
            if o.top:
                g[verts[o.i]] += 1
            if o.bottom and 0 < o.i < n:
                g[verts[o.i]] -= 1
    if not s.letters:
        for a in sorted(set(q.out_arrows(s.start))):
            g[q.arrows[a].target] -= 1
    else:
        for a in prepend_candidates(q, s, -1):
            g[q.arrows[a].target] -= 1
        for a in prepend_candidates(q, inverse(q, s), -1):
            g[q.arrows[a].target] -= 1
    return tuple(g)


# ---------------------------------------------------------------- text I/O

def format_string(q, s):
    if s is ZERO:
        return "0"
    if isinstance(s, NegSimple):
        return "-" + q.vname(s.vertex)
    out = [q.vname(s.start)]
    for a, e in s.letters:
        out.append(q.aname(a) + ("" if e > 0 else "^-1"))
        out.append(q.vname(q.letter_end((a, e))))
    return " ".join(out)


def parse_string(q, text):
    tok = text.split()
    if not tok:
        raise ValueError("empty string token")
    if tok == ["0"]:
        return ZERO
    if len(tok) == 1 and tok[0].startswith("-") and tok[0][1:] in q._vid:
        return NegSimple(q.vertex_id(tok[0][1:]))
    if len(tok) % 2 == 0:
        raise ValueError(f"malformed string {text!r}")
    try:
        start = q.vertex_id(tok[0])
        letters = []
        for k in range(1, len(tok), 2):
            name, sign = (tok[k][:-3], -1) if tok[k].endswith("^-1") else (tok[k], 1)
            letter = (q.arrow_id(name), sign)
            if q.letter_end(letter) != q.vertex_id(tok[k + 1]):
                raise ValueError(f"letter {tok[k]} does not end at {tok[k + 1]}")
            letters.append(letter)
    except KeyError as e:
        raise ValueError(f"unknown name {e.args[0]!r}") from None
    s = StringWord(start, tuple(letters))
    if not is_string(q, s):
        raise ValueError(f"{text!r} is not a string")
    return s


def compose(q, s, t):
    """s o t: all strings obtained by joining an endpoint of s to one of t by an arrow."""
    out = set()
    for x, y in product(_orientations(q, s), _orientations(q, t)):
        for first, second in ((x, y), (y, x)):
            u, v = end_vertex(q, first), second.start
            for a in q.out_arrows(u):
                if q.arrows[a].target != v:
                    continue
                w = StringWord(first.start, first.letters + ((a, 1),) + second.letters)
                if is_string(q, w):
                    out.add(canonical(q, w))
    return out
