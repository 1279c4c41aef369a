"""Regenerate data/two_vertex/: one file per isomorphism class of connected,
nk-finite gentle bound quivers on two vertices."""
from nkc.corpus import write_two_vertex

if __name__ == "__main__":
    for i, q in enumerate(write_two_vertex()):
        print(f"q{i:02d}: arrows={q.n1} relations={len(q.relations)}")
