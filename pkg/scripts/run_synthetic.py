#!/usr/bin/env python3
"""Symmetric-Markov study: every scheme across a window sweep, one CSV per
alphabet size.

Desk-scale by default (n=1e5, lean networks); pass --full-n for the
full-length sequences and --paper-nets for the 6x200 architecture.  Feed the
CSVs to the plotting frontend for error-vs-k and runtime-vs-k figures.
"""

import argparse
import sys

from figodenoise.config import PAPER_SCALE_N, ExperimentConfig
from figodenoise.evaluation import run_experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alphabet-sizes", type=int, nargs="+", default=[2, 4])
    parser.add_argument("--n", type=int, default=100_000)
    parser.add_argument("--full-n", action="store_true")
    parser.add_argument("--k", type=int, nargs="+", default=[1, 2, 4, 6, 8])
    parser.add_argument("--seed", type=int, default=100)
    parser.add_argument("--epochs", type=int, default=16)
    parser.add_argument("--paper-nets", action="store_true",
                        help="use the 6x200 architecture instead of 3x64")
    parser.add_argument("--out-prefix", default="synthetic")
    args = parser.parse_args()

    n = PAPER_SCALE_N if args.full_n else args.n
    hidden = [200] * 6 if args.paper_nets else [64] * 3
    for M in args.alphabet_sizes:
        schemes = ["fb", "gen_cude", "cude", "dude", "ml_pdf"]
        if M ** (2 * max(args.k) + 1) <= 10**6:
            schemes.append("gen_dude")
        cfg = ExperimentConfig(
            mode="synthetic", M=M, n=n, seed=args.seed, schemes=schemes,
            k=list(args.k), hidden=hidden, epochs=args.epochs,
            csv=f"{args.out_prefix}_M{M}.csv",
        )
        print(f"M={M}: {len(cfg.schemes)} schemes x k={cfg.k} -> {cfg.csv}")
        runs = run_experiment(cfg)
        for r in runs:
            status = r.error_message or f"raw={r.raw_error:.5f} norm={r.normalized_error:.4f}"
            print(f"  {r.scheme:9s} k={r.k}  {status}  ({r.runtime_seconds:.1f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
