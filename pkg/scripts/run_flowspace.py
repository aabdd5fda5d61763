#!/usr/bin/env python3
"""Homopolymer-channel study: denoise simulated flowgrams and score the
recovered DNA against the clean reference.

Uses repeat-rich simulated DNA unless --dna points at a real sequence file
(plain text or FASTA).  The CSV's similarity column feeds the frontend's
similarity_bars figure.
"""

import argparse
import sys

from figodenoise.config import ExperimentConfig
from figodenoise.evaluation import run_experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100_000, help="flow count")
    parser.add_argument("--k", type=int, nargs="+", default=[1, 2, 3])
    parser.add_argument("--seed", type=int, default=400)
    parser.add_argument("--noise-stddev", type=float, default=0.35)
    parser.add_argument("--dna", default="", help="optional clean DNA file")
    parser.add_argument("--wash-cycle", default="TACG")
    parser.add_argument("--epochs", type=int, default=10)
    parser.add_argument("--paper-nets", action="store_true",
                        help="use the 7x500 architecture instead of 3x64")
    parser.add_argument("--out", default="flowspace.csv")
    args = parser.parse_args()

    cfg = ExperimentConfig(
        mode="flowspace", M=10, n=args.n, seed=args.seed,
        encoding="index", noise_stddev=args.noise_stddev,
        schemes=["gen_cude", "cude", "dude", "ml_pdf", "baum_welch"],
        k=list(args.k), hidden=[500] * 7 if args.paper_nets else [64] * 3,
        epochs=args.epochs, csv=args.out, wash_cycle=args.wash_cycle,
        dna=args.dna,
    )
    runs = run_experiment(cfg)
    for r in runs:
        status = r.error_message or (
            f"raw={r.raw_error:.5f} similarity={r.similarity:.5f}"
        )
        print(f"{r.scheme:10s} k={r.k}  {status}  ({r.runtime_seconds:.1f}s)")
    print(f"wrote {cfg.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
