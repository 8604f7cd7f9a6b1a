"""Randomized audit of the cluster geometry against its algebraic oracles.

Generates seeded random blowup clusters and re-derives skewness, dual
pairings, and thinness from the inverse intersection matrix, reporting
throughput and the first failure if any.  Exit status is nonzero on a
mismatch, so this doubles as a long-running soak check.

Usage: python3 scripts/oracle_audit.py [--seed S] [--count N] [--depth D]
"""

import argparse
import sys
import time

from valinf.randomized import oracle_check


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--batch", type=int, default=100,
                    help="progress granularity")
    args = ap.parse_args()

    total_pass, t0 = 0, time.perf_counter()
    remaining, seed = args.count, args.seed
    while remaining > 0:
        n = min(args.batch, remaining)
        passed, failures = oracle_check(seed=seed, count=n,
                                        depth_cap=args.depth)
        total_pass += passed
        if failures:
            print(f"seed {seed}: {len(failures)} inconsistent clusters")
            for f in failures[:5]:
                print(f"  {f}")
            return 1
        remaining -= n
        seed += 1
        rate = total_pass / (time.perf_counter() - t0)
        print(f"{total_pass}/{args.count} clusters consistent "
              f"({rate:.0f}/s)", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
