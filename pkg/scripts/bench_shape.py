"""Run the timing sweep, write CSV and report the linear fit over rule counts."""
from __future__ import annotations

import argparse
import sys
import time

from policysim.bench import BenchConfig, linear_fit, run_bench, summarize, write_csv


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rules", default="4,8,12,16,20")
    ap.add_argument("--pairs", type=int, default=16)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=0)
    ap.add_argument("--out", default="bench.csv")
    args = ap.parse_args(argv)

    cfg = BenchConfig(rule_counts=tuple(int(x) for x in args.rules.split(",")),
                      pair_counts=(args.pairs,), repetitions=args.reps,
                      seed=args.seed, workers=args.workers)
    start = time.perf_counter()
    records = run_bench(cfg)
    write_csv(records, args.out)
    cells = summarize(records)
    for (rules, _, _), c in cells.items():
        print(f"{rules:3d} rules: mean {c['meanTotalMillis']:8.2f} ms "
              f"(preprocess {c['meanPreprocessMillis']:.2f}, prove {c['meanProveMillis']:.2f})")
    slope, intercept, r2 = linear_fit([float(k[0]) for k in cells],
                                      [c["meanTotalMillis"] for c in cells.values()])
    print(f"fit: {slope:.3f} ms/rule {intercept:+.3f} ms, R²={r2:.3f}")
    print(f"{len(records)} pairs in {time.perf_counter() - start:.1f} s, rows in {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
