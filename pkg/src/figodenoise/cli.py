"""Command-line entry point.

Subcommands: simulate (write clean/noisy/quantized files), denoise (run one
scheme), evaluate (compare sequence files), bound (performance-bound
constants), bench (full experiment harness with CSV output).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import denoise, evaluation, source
from .config import PAPER_SCALE_N, SCHEMES, parse_config
from .errors import (
    ComplexityCapError,
    ConfigError,
    EncodingError,
    FigoError,
    FormatError,
    InsufficientDataError,
    InvalidChannelError,
    NumericalUnderflowError,
    TrainingDivergedError,
)
from .evaluation import BoundInputs, prepare_data, run_experiment, theorem_bound

EXIT_CODES = {
    ConfigError: 3,
    FormatError: 4,
    InvalidChannelError: 5,
    InsufficientDataError: 6,
    EncodingError: 7,
    TrainingDivergedError: 8,
    ComplexityCapError: 9,
    NumericalUnderflowError: 10,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figodenoise",
        description="Universal denoising for finite-input, general-output channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="write clean/noisy/quantized sequence files")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out-prefix", required=True)
    p_sim.add_argument("--full-n", action="store_true",
                       help=f"use the full-scale n={PAPER_SCALE_N}")

    p_den = sub.add_parser("denoise", help="run one scheme and write the reconstruction")
    p_den.add_argument("--config", required=True)
    p_den.add_argument("--scheme", required=True, choices=SCHEMES)
    p_den.add_argument("--k", type=int, default=None)
    p_den.add_argument("--out", required=True)
    p_den.add_argument("--full-n", action="store_true")

    p_eval = sub.add_parser("evaluate", help="compare a reconstruction against the clean file")
    p_eval.add_argument("--clean", required=True)
    p_eval.add_argument("--denoised", required=True)
    p_eval.add_argument("--k", type=int, default=0)
    p_eval.add_argument("--reference-dna", default=None,
                        help="clean DNA file; adds an alignment similarity score")
    p_eval.add_argument("--wash-cycle", default=source.DEFAULT_WASH_CYCLE)

    p_bound = sub.add_parser("bound", help="performance-bound constants")
    p_bound.add_argument("--k", type=int, required=True)
    p_bound.add_argument("--delta", type=float, required=True)
    p_bound.add_argument("--M", type=int, required=True)
    p_bound.add_argument("--n", type=int, required=True)
    p_bound.add_argument("--epsilon", type=float, required=True)
    p_bound.add_argument("--epsilon-star", type=float, required=True)
    p_bound.add_argument("--lambda-max", type=float, required=True)

    p_bench = sub.add_parser("bench", help="run the experiment harness end to end")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--csv", default=None, help="override the config's CSV path")
    p_bench.add_argument("--full-n", action="store_true",
                         help=f"use the full-scale n={PAPER_SCALE_N}")
    return parser


def _load_config(args):
    cfg = parse_config(args.config)
    if getattr(args, "full_n", False):
        cfg.n = PAPER_SCALE_N
    return cfg


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    data = prepare_data(cfg)
    source.save_sequence(f"{args.out_prefix}.clean.txt", data.x)
    source.save_sequence(f"{args.out_prefix}.noisy.txt", data.Y)
    source.save_sequence(f"{args.out_prefix}.quantized.txt", data.Z)
    print(f"wrote {args.out_prefix}.{{clean,noisy,quantized}}.txt (n={cfg.n})")
    return 0


def _cmd_denoise(args) -> int:
    cfg = _load_config(args)
    if args.k is not None:
        cfg.k = [args.k]
    cfg.schemes = [args.scheme]
    data = prepare_data(cfg)
    k = cfg.k[0]
    xhat = evaluation._run_scheme(args.scheme, None if args.scheme == "ml_pdf" else k,
                                  data, cfg, cfg.seed + 1000)
    source.save_sequence(args.out, xhat)
    err = evaluation.hamming_loss(data.x, xhat)
    print(f"{args.scheme}: raw error {err:.6f}, wrote {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    x = source.load_sequence(args.clean, "symbols")
    xhat = source.load_sequence(args.denoised, "symbols")
    raw = evaluation.hamming_loss(x, xhat)
    print(f"raw_error {raw:.6f}")
    if args.k > 0:
        interior = evaluation.hamming_loss(x, xhat, interior_only=True, k=args.k)
        print(f"interior_error {interior:.6f}")
    if args.reference_dna:
        ref = source.load_dna(args.reference_dna)
        cand = source.flow_to_dna(np.clip(xhat, 0, None), args.wash_cycle)
        print(f"similarity {evaluation.alignment_similarity(ref, cand):.6f}")
    return 0


def _cmd_bound(args) -> int:
    inputs = BoundInputs(
        k=args.k, n=args.n, M=args.M, delta=args.delta,
        epsilon=args.epsilon, epsilon_star=args.epsilon_star,
        lambda_max=args.lambda_max,
    )
    c1, c2, bound = theorem_bound(inputs)
    print(f"c1 = {c1:.10g}")
    print(f"c2 = {c2:.10g}")
    print(f"bound = {bound:.10g}")
    return 0


def _cmd_bench(args) -> int:
    cfg = _load_config(args)
    runs = run_experiment(cfg, csv_path=args.csv)
    path = args.csv or cfg.csv
    failed = sum(1 for r in runs if r.error_message)
    print(f"wrote {len(runs)} rows to {path}" + (f" ({failed} failed)" if failed else ""))
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "denoise": _cmd_denoise,
    "evaluate": _cmd_evaluate,
    "bound": _cmd_bound,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except FigoError as e:
        print(f"{args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CODES.get(type(e), 1)
    except ValueError as e:
        print(f"{args.command}: {e}", file=sys.stderr)
        return 1


def console_main() -> None:
    raise SystemExit(main())
