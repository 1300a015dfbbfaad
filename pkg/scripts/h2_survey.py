#!/usr/bin/env python3
"""Compute the stable-count invariant for a list of groups.

    python3 scripts/h2_survey.py
    python3 scripts/h2_survey.py --configs quaternion:8:all-nontrivial --window 2
"""

import argparse
import json
import sys
import time

from hurwitz import build_builtin, h2_structure
from hurwitz.braid import Caps
from hurwitz.cli import _parse_gamma

DEFAULT_CONFIGS = [
    "sym:3:(12)",
    "sym:3:all-nontrivial",
    "cyclic:4:all-nontrivial",
    "cyclic:2xcyclic:2:all-nontrivial",
    "dihedral:4:all-nontrivial",
    "quaternion:8:all-nontrivial",
]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--configs", nargs="*", default=DEFAULT_CONFIGS)
    parser.add_argument("--window", type=int, default=2)
    parser.add_argument("--nodes", type=int, default=2_000_000)
    args = parser.parse_args(argv)

    caps = Caps(lattice_nodes=args.nodes)
    for config in args.configs:
        group_spec, _, gamma_spec = config.rpartition(":")
        G = build_builtin(group_spec)
        gamma = _parse_gamma(G, gamma_spec)
        t0 = time.time()
        try:
            rep = h2_structure(G, gamma, window=args.window, caps=caps)
            record = rep.to_jsonable()
            record.update(group=group_spec, gamma=gamma_spec,
                          seconds=round(time.time() - t0, 2))
            print(json.dumps(record, sort_keys=True))
        except Exception as e:  # keep surveying past one blown budget
            print(json.dumps({"group": group_spec, "gamma": gamma_spec,
                              "error": f"{type(e).__name__}: {e}"}, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
