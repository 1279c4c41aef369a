import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import assume, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from nkc.corpus import corpus, is_connected  # noqa: E402
from nkc.nonkissing import NKComplex  # noqa: E402
from nkc.quiver import GentleQuiver, is_gentle  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "data"
CORPUS = corpus()
NAMES = sorted(CORPUS)
SMALL = [n for n in NAMES if n != "q6"]

ACCEPTANCE = []


@lru_cache(maxsize=None)
def complex_of(name):
    return NKComplex(CORPUS[name])


@pytest.fixture(params=NAMES)
def name(request):
    return request.param


@pytest.fixture(params=SMALL)
def small(request):
    return request.param


@st.composite
def gentle_quivers(draw, max_vertices=3):
    """Random connected gentle bound quivers (not necessarily nk-finite), gentle by construction."""
    n = draw(st.integers(1, max_vertices))
    names = [str(i + 1) for i in range(n)]
    outd, ind = [0] * n, [0] * n
    arrows = []
    for k in range(draw(st.integers(max(n - 1, 1), 2 * n))):
        free = [(s, t) for s in range(n) for t in range(n) if outd[s] < 2 and ind[t] < 2]
        if not free:
            break
        s, t = draw(st.sampled_from(free))
        outd[s] += 1
        ind[t] += 1
        arrows.append((chr(ord("a") + k), s, t))
    rels = []
    for v in range(n):
        ins = [a[0] for a in arrows if a[2] == v]
        outs = [a[0] for a in arrows if a[1] == v]
        if not ins or not outs:
            continue
        if len(ins) == len(outs) == 1:
            if draw(st.booleans()):
                rels.append((ins[0], outs[0]))
        elif len(ins) == 2 and len(outs) == 2:
            x = draw(st.booleans())
            rels += [(ins[0], outs[int(x)]), (ins[1], outs[1 - int(x)])]
        elif len(ins) == 2:
            rels.append((draw(st.sampled_from(ins)), outs[0]))
        else:
            rels.append((ins[0], draw(st.sampled_from(outs))))
    q = GentleQuiver.build(names, [(a, names[s], names[t]) for a, s, t in arrows], rels)
    assert is_gentle(q)
    assume(is_connected(q))
    return q


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
