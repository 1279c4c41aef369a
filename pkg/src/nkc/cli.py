"""Command-line front end: `nk <command> <file> [flags]`.

Exit codes: 0 success, 1 verification failure, 2 usage error (bad arguments,
unreadable or malformed input, infinite type, cap exceeded)."""
from __future__ import annotations

import argparse
import json
import sys

from .checks import CHECKS, run_all
from .geometry import Geometry, project_check
from .lattice import Lattice
from .nonkissing import InfiniteTypeError, NKComplex
from .quiver import QuiverError, blind, dump_quiver, is_nk_finite, load_quiver, quiver_to_dict, validate_gentle
from .strings import (CapExceeded, almost_positive_strings, enumerate_strings, format_string,
                      g_vector_string, is_distinguishable, tau_compatibility_matrix)

COMMANDS = ["validate", "info", "strings", "walks", "complex", "flip-graph", "tau", "lattice",
            "fan", "polytope", "zonotope", "blind", "check-all"]


class UsageError(Exception):
    pass


def build_parser():
    p = argparse.ArgumentParser(prog="nk", description="Non-kissing complexes of gentle bound quivers.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="quiver file (text format, or JSON with --json)")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="Graphviz output for graph commands")
    fmt.add_argument("--text", action="store_true", help="human-readable output")
    p.add_argument("--json", action="store_true", help="read the quiver as JSON")
    p.add_argument("--count", action="store_true", help="print counts only")
    p.add_argument("--oracle", action="store_true", help="cross-check facets against maximal cliques")
    p.add_argument("--max-strings", type=int, default=10**4)
    p.add_argument("--max-facets", type=int, default=10**5)
    p.add_argument("--max-biclosed", type=int, default=10**6)
    p.add_argument("--jobs", type=int, default=1, help="accepted for compatibility; runs single-threaded")
    p.add_argument("--vertices", default="", help="comma-separated vertex names (blind)")
    p.add_argument("--support", default=None, help="comma-separated integer vector (zonotope)")
    p.add_argument("--only", default=None, help="comma-separated check names (check-all)")
    return p


def _split(s):
    return [x for x in (s or "").split(",") if x]


def emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=False))


def _complex(q, args):
    return NKComplex(q, max_strings=args.max_strings, max_facets=args.max_facets)


def cmd_validate(q, args):
    bad = validate_gentle(q)
    finite = not bad and is_nk_finite(q)
    if args.text:
        print("gentle" if not bad else "not gentle:\n  " + "\n  ".join(bad))
        print(f"finite={str(finite).lower()}")
    else:
        emit({"gentle": not bad, "violations": bad, "nk_finite": finite})
    return 0 if not bad else 1


def cmd_info(q, args):
    finite = is_nk_finite(q)
    line = f"vertices={q.n0} arrows={q.n1} relations={len(q.relations)} finite={str(finite).lower()}"
    if finite:
        line += f" strings={len(enumerate_strings(q, cap=args.max_strings))}"
    print(line)
    return 0


def cmd_strings(q, args):
    strs = enumerate_strings(q, cap=args.max_strings)
    if args.count:
        print(f"strings={len(strs)}")
    elif args.text:
        for s in strs:
            print(format_string(q, s))
    else:
        emit([{"string": format_string(q, s), "length": len(s), "g_vector": list(g_vector_string(q, s)),
               "distinguishable": is_distinguishable(q, s)} for s in strs])
    return 0


def cmd_walks(q, args):
    cx = _complex(q, args)
    n = len(cx.walks)
    if args.count:
        print(f"walks={n} bending={len(cx.bending)} straight={len(cx.straight)} "
              f"self_kissing={len(cx.self_kissing)}")
        return 0
    rows = []
    for i in range(n):
        kind = "straight" if i in cx.straight else "bending"
        row = {"walk": cx.walk_token(i), "kind": kind, "self_kissing": i in cx.self_kissing,
               "g_vector": list(cx.g_vector(i))}
        if kind == "bending":
            row["string"] = format_string(q, cx.walk_to_string(i))
        rows.append(row)
    if args.text:
        for r in rows:
            print(f"{r['kind']:8} {'self-kissing ' if r['self_kissing'] else ''}{r['walk']}")
    else:
        emit(rows)
    return 0


def cmd_complex(q, args):
    cx = _complex(q, args)
    facets = cx.facets
    status = 0
    extra = {}
    if args.oracle:
        same = set(facets) == cx.clique_facets()
        extra["oracle_agrees"] = same
        status = 0 if same else 1
    if args.count:
        print(f"facets={len(facets)}" + (f" oracle={str(extra['oracle_agrees']).lower()}" if extra else ""))
    elif args.text:
        for f in facets:
            print(" | ".join(cx.walk_token(i) for i in sorted(f.walks)))
    else:
        emit({"facets": [cx.facet_json(f) for f in facets], **extra})
    return status


def cmd_flip_graph(q, args):
    cx = _complex(q, args)
    if args.count:
        print(f"facets={len(cx.facets)} edges={len(cx.flip_graph[1])}")
    elif args.dot:
        sys.stdout.write(cx.flip_graph_dot())
    else:
        emit(cx.flip_graph_json())
    return 0


def cmd_tau(q, args):
    cx = _complex(q, args)
    strs = almost_positive_strings(q, cap=args.max_strings)
    M = tau_compatibility_matrix(q, strs)
    walks = [cx.string_to_walk(s) for s in strs]
    K = [[(i not in cx.self_kissing) if a == b else not cx.kisses(i, j)
          for b, j in enumerate(walks)] for a, i in enumerate(walks)]
    ok = M == K
    if args.text:
        names = [format_string(q, s) for s in strs]
        for name, row in zip(names, M):
            print("".join("1" if x else "." for x in row), name)
        print(f"agrees_with_kissing={str(ok).lower()}")
    else:
        emit({"strings": [format_string(q, s) for s in strs], "compatible": M, "agrees_with_kissing": ok})
    return 0 if ok else 1


def cmd_lattice(q, args):
    cx = _complex(q, args)
    lat = Lattice.of(cx, max_biclosed=args.max_biclosed)
    if args.count:
        print(f"biclosed={len(lat.biclosed)} classes={len(lat.classes)} facets={len(cx.facets)}")
        return 0
    if args.dot:
        sys.stdout.write(lat.hasse_dot())
        return 0
    rep = CHECKS["lattice"](cx, max_biclosed=args.max_biclosed)
    if args.text:
        for k, v in rep.items():
            print(f"{k}={str(v).lower() if isinstance(v, bool) else v}")
    else:
        emit({**lat.to_json(), "checks": rep})
    return 0 if rep["ok"] else 1


def cmd_fan(q, args):
    geo = Geometry(_complex(q, args))
    rep = geo.check_fan()
    if args.text:
        for k, v in rep.items():
            print(f"{k}={str(v).lower() if isinstance(v, bool) else v}")
    else:
        emit({**geo.fan_json(), "certificate": rep})
    return 0 if rep["ok"] else 1


def cmd_polytope(q, args):
    geo = Geometry(_complex(q, args))
    rep = geo.check_associahedron()
    if args.text:
        for p in geo.polytope_json()["vertices"]:
            print(" ".join(map(str, p)))
        print(f"verified={str(rep['ok']).lower()}")
    else:
        emit({**geo.polytope_json(), "verification": rep})
    return 0 if rep["ok"] else 1


def cmd_zonotope(q, args):
    geo = Geometry(_complex(q, args))
    rep = geo.zonotope_facet_check()
    out = {"generators": [list(m) for m in geo._dist_mult], "facet_check": rep}
    if args.support is not None:
        try:
            y = tuple(int(x) for x in _split(args.support))
        except ValueError:
            raise UsageError("--support expects comma-separated integers") from None
        if len(y) != q.n0:
            raise UsageError(f"--support needs {q.n0} coordinates")
        out["support"] = geo.zonotope_support(y)
    if args.text:
        if "support" in out:
            print(f"support={out['support']}")
        print(f"ok={str(rep['ok']).lower()} mutually_kissing={str(rep['mutually_kissing']).lower()}")
    else:
        emit(out)
    return 0 if rep["ok"] else 1


def cmd_blind(q, args):
    names = _split(args.vertices)
    if not names:
        raise UsageError("blind needs --vertices v1,v2,...")
    unknown = [v for v in names if v not in {x.name for x in q.vertices}]
    if unknown:
        raise UsageError(f"unknown vertices: {', '.join(unknown)}")
    if len(set(names)) >= q.n0:
        raise UsageError("blinding needs a strict subset of the vertices")
    qv = blind(q, [q.vertex_id(v) for v in names])
    status = 0
    rep = None
    if is_nk_finite(q):
        rep = project_check(q, names)
        status = 0 if rep["ok"] else 1
    if args.text:
        sys.stdout.write(dump_quiver(qv))
    else:
        emit({"quiver": quiver_to_dict(qv), "projection": rep})
    return status


def cmd_check_all(q, args):
    only = _split(args.only) or None
    if only and set(only) - set(CHECKS):
        raise UsageError(f"unknown checks: {', '.join(sorted(set(only) - set(CHECKS)))}")
    rep = run_all(q, args.max_strings, args.max_facets, args.max_biclosed, only=only)
    ok = all(v["ok"] for v in rep.values())
    if args.text:
        for k, v in rep.items():
            print(f"{'PASS' if v['ok'] else 'FAIL'} {k}")
    else:
        emit({"ok": ok, "checks": rep})
    return 0 if ok else 1


HANDLERS = {
    "validate": cmd_validate, "info": cmd_info, "strings": cmd_strings, "walks": cmd_walks,
    "complex": cmd_complex, "flip-graph": cmd_flip_graph, "tau": cmd_tau, "lattice": cmd_lattice,
    "fan": cmd_fan, "polytope": cmd_polytope, "zonotope": cmd_zonotope, "blind": cmd_blind,
    "check-all": cmd_check_all,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        q = load_quiver(args.file, as_json=args.json or None)
        if args.command != "validate":
            bad = validate_gentle(q)
            if bad:
                raise UsageError("quiver is not gentle: " + "; ".join(bad))
        return HANDLERS[args.command](q, args)
    except (OSError, QuiverError, UsageError, InfiniteTypeError, CapExceeded, json.JSONDecodeError) as e:
        print(f"nk: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
