"""Hierarchy profile of every small binary systematic code.

For each ``[I_k | M]`` with the given bounds, compute the largest t for
batch, online, asynchronous and strong serving plus the best ceil(m/L), and
tally the distinct profiles.  Any non-monotone profile is printed in full.

    python scripts/hierarchy_census.py --max-k 2 --max-n 5
"""

from __future__ import annotations

import argparse
import time
from collections import Counter
from itertools import product

from batchcodes.gf import GFMatrix
from batchcodes.hierarchy import ROWS, hierarchy_scan


def systematic_codes(k: int, n: int):
    for bits in product((0, 1), repeat=k * (n - k)):
        M = [list(bits[r * (n - k):(r + 1) * (n - k)]) for r in range(k)]
        yield GFMatrix.systematic(M, 2)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-k", type=int, default=2)
    p.add_argument("--max-n", type=int, default=5)
    args = p.parse_args(argv)
    t0 = time.perf_counter()
    profiles: Counter = Counter()
    bad = 0
    for k in range(1, args.max_k + 1):
        for n in range(k, args.max_n + 1):
            for G in systematic_codes(k, n):
                scan = hierarchy_scan(G)
                profiles[(k, n, tuple(v for _, v in scan.rows()))] += 1
                if not scan.is_monotone():
                    bad += 1
                    print("NON-MONOTONE", G.rows, scan.rows())
    print(f"{'k':>2} {'n':>2}  " + " ".join(f"{r:>12}" for r in ROWS) + "  codes")
    for (k, n, vals), count in sorted(profiles.items()):
        print(f"{k:>2} {n:>2}  " + " ".join(f"{v:>12}" for v in vals) + f"  {count:>5}")
    print(f"{sum(profiles.values())} codes, {bad} non-monotone, {time.perf_counter() - t0:.1f} s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
