"""Run every check on every bundled quiver and print one PASS/FAIL line per check.

Usage: python scripts/run_acceptance.py [name ...]"""
import sys
import time

from nkc.checks import run_all
from nkc.corpus import corpus


def main(argv):
    qs = corpus()
    names = argv or sorted(qs)
    failed = 0
    for name in names:
        t = time.perf_counter()
        rep = run_all(qs[name])
        dt = time.perf_counter() - t
        for check, r in rep.items():
            ok = r["ok"]
            failed += not ok
            print(f"{'PASS' if ok else 'FAIL'} {name:16} {check}")
        print(f"     {name:16} {dt:.2f}s")
    print(f"{failed} failures")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
