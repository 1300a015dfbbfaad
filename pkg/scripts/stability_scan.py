#!/usr/bin/env python3
"""Scan stability bounds across groups and gamma choices.

Each configuration gets its own empirical bound; the scan also reports the
maximum over everything explored, which is the honest stand-in for a single
uniform bound per group.

    python3 scripts/stability_scan.py --window 3
    python3 scripts/stability_scan.py --configs sym:3:all-nontrivial dihedral:4:r,s
"""

import argparse
import json
import sys
import time

from hurwitz import build_builtin, find_stability_bound
from hurwitz.braid import Caps
from hurwitz.cli import _parse_gamma

DEFAULT_CONFIGS = [
    "sym:3:(12)",
    "sym:3:all-nontrivial",
    "cyclic:4:all-nontrivial",
    "cyclic:2xcyclic:2:all-nontrivial",
    "dihedral:4:r,s",
    "quaternion:8:i,j",
]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--configs", nargs="*", default=DEFAULT_CONFIGS,
                        help="entries 'groupspec:gammaspec'")
    parser.add_argument("--window", type=int, default=3)
    parser.add_argument("--confirm", type=int, default=2)
    parser.add_argument("--nodes", type=int, default=2_000_000)
    parser.add_argument("--jsonl", action="store_true")
    args = parser.parse_args(argv)

    caps = Caps(lattice_nodes=args.nodes)
    worst = None
    rows = []
    for config in args.configs:
        group_spec, _, gamma_spec = config.rpartition(":")
        G = build_builtin(group_spec)
        gamma = _parse_gamma(G, gamma_spec)
        t0 = time.time()
        rep = find_stability_bound(G, gamma, window=args.window,
                                   confirm=args.confirm, caps=caps)
        row = {
            "group": group_spec,
            "gamma": gamma_spec,
            "bound": rep.bound,
            "confident": rep.confident,
            "stable_count": rep.levels[rep.bound].count if rep.bound is not None else None,
            "uniform_floor": max(rep.levels[rep.bound].nu) if rep.bound is not None else None,
            "seconds": round(time.time() - t0, 2),
        }
        rows.append(row)
        if rep.bound is not None:
            worst = rep.bound if worst is None else max(worst, rep.bound)
    if args.jsonl:
        for row in rows:
            print(json.dumps(row, sort_keys=True))
    else:
        header = f"{'group':24s} {'gamma':18s} {'bound':>5s} {'conf':>5s} {'count':>6s} {'floor':>5s} {'sec':>6s}"
        print(header)
        print("-" * len(header))
        for r in rows:
            print(f"{r['group']:24s} {r['gamma']:18s} {str(r['bound']):>5s} "
                  f"{str(r['confident']):>5s} {str(r['stable_count']):>6s} "
                  f"{str(r['uniform_floor']):>5s} {r['seconds']:>6.2f}")
    print(f"\nmax bound over explored configurations: {worst}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
