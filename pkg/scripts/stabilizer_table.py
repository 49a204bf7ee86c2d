#!/usr/bin/env python3
"""Exhaustive diagonal stabilizer scans against the closed-form orders.

The even-degree family matches the closed form everywhere tested; the
odd-degree family matches for q = 1 mod 4 and comes out exactly double for
q = 3 mod 4 (the scan group is the full (q^3+1)/2 root-of-unity group).
"""

import argparse
import sys
import time

sys.path.insert(0, "src")

from hermitia.orbit import stabilizer_search  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, nargs="*", default=[3, 4, 5, 7])
    ap.add_argument("--samples", type=int, default=500)
    args = ap.parse_args()
    print(f"{'case':<5}{'q':>3}{'scan':>8}{'formula':>9}{'cyclic':>8}"
          f"{'nondiag hits':>14}{'time':>8}")
    for q in args.q:
        case = "c2" if q % 2 == 0 else "c3"
        t0 = time.time()
        rep = stabilizer_search(case, q, samples=args.samples, seed=1)
        flag = "" if rep.matches_prediction else "   <- mismatch"
        print(f"{case:<5}{q:>3}{rep.order:>8}{rep.predicted_order:>9}"
              f"{str(rep.cyclic):>8}{rep.nondiagonal_hits:>10}/{args.samples}"
              f"{time.time() - t0:>7.1f}s{flag}")


if __name__ == "__main__":
    main()
