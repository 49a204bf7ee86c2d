#!/usr/bin/env python3
"""Exhaustive admissible-signature sweep over a few field sizes.

Prints one row per admissible signature with its solution-space dimension
and matched shape.  The q=2 row set includes the degree-4 family that the
two-family prediction misses.
"""

import argparse
import sys
import time

sys.path.insert(0, "src")

from hermitia.classify import enumerate_admissible  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, nargs="*", default=[2, 3, 4, 5])
    ap.add_argument("--max-d", type=int, default=None)
    args = ap.parse_args()
    for q in args.q:
        t0 = time.time()
        rep = enumerate_admissible(q, args.max_d)
        print(f"q={q}  d<={rep.d_max}  scanned={rep.stats['signatures_scanned']}  "
              f"[{time.time() - t0:.1f}s]  prediction_matched={rep.matches_prediction}")
        for e in rep.admissible:
            label = e.case_sig.astuple() if e.case_sig else "-"
            print(f"    sig={e.sig.astuple()}  dim={e.dim}  case={e.case}  label={label}")


if __name__ == "__main__":
    main()
