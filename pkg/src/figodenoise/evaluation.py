"""Loss metrics, the performance-bound calculator, and the experiment harness."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import denoise, neural, source
from .channel import (
    ChannelModel,
    InducedDMC,
    Quantizer,
    gaussian_channel,
    induced_dmc,
    load_channel,
    load_quantizer,
    quantize_all,
)
from .errors import FigoError

CSV_COLUMNS = [
    "scheme",
    "k",
    "n",
    "M",
    "raw_error",
    "interior_error",
    "normalized_error",
    "similarity",
    "runtime_seconds",
    "seed",
    "error_message",
]


@dataclass
class DenoiseRun:
    scheme: str
    k: int | None
    n: int
    M: int
    raw_error: float | None
    interior_error: float | None
    normalized_error: float | None
    similarity: float | None
    runtime_seconds: float
    seed: int
    error_message: str = ""


def hamming_loss(x: np.ndarray, xhat: np.ndarray, interior_only: bool = False, k: int = 0) -> float:
    """Fraction of mismatched positions; interior averaging drops the k
    boundary positions on each side."""
    x = np.asarray(x)
    xhat = np.asarray(xhat)
    if x.size != xhat.size:
        raise ValueError(f"length mismatch: {x.size} vs {xhat.size}")
    if interior_only and k > 0:
        if x.size <= 2 * k:
            raise ValueError(f"no interior positions for n={x.size}, k={k}")
        x = x[k:-k]
        xhat = xhat[k:-k]
    return float(np.mean(x != xhat))


def normalized_error(run_error: float, baseline_error: float) -> float:
    if not baseline_error > 0:
        raise ValueError(f"baseline error must be positive, got {baseline_error}")
    return run_error / baseline_error


def alignment_similarity(reference_dna: str, candidate_dna: str) -> float:
    """Best global-alignment match count (match 1, mismatch 0, gap 0)
    divided by the reference length.  Linear-space scoring."""
    if not reference_dna:
        raise ValueError("reference must be nonempty")
    if not candidate_dna:
        return 0.0
    ref = np.frombuffer(reference_dna.encode(), dtype=np.uint8)
    cand = np.frombuffer(candidate_dna.encode(), dtype=np.uint8)
    prev = np.zeros(cand.size + 1, dtype=np.int32)
    curr = np.empty(cand.size + 1, dtype=np.int32)
    for c in ref:
        curr[0] = 0
        np.maximum(prev[:-1] + (cand == c), prev[1:], out=curr[1:])
        np.maximum.accumulate(curr, out=curr)
        prev, curr = curr, prev
    return float(prev[-1]) / len(reference_dna)


@dataclass(frozen=True)
class BoundInputs:
    k: int
    n: int
    M: int
    delta: float
    epsilon: float
    epsilon_star: float
    lambda_max: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.lambda_max > 0:
            raise ValueError("lambda_max must be positive")


def theorem_bound(b: BoundInputs) -> tuple[float, float, float]:
    """Concentration-bound constants and the bound itself for the windowed
    competitive guarantee.

    c1 = 2(2k+1)(1/delta + 1)^M, c2 = (eps - lam(3 eps* + M delta / 2))^2 / lam^2,
    bound = min(1, c1 exp(-2(n-2k)/(2k+1) c2)).
    """
    threshold = b.lambda_max * (3.0 * b.epsilon_star + b.M * b.delta / 2.0)
    if not b.epsilon > threshold:
        raise ValueError(
            f"epsilon must exceed lambda_max*(3*epsilon_star + M*delta/2) = {threshold}"
        )
    c1 = 2.0 * (2 * b.k + 1) * (1.0 / b.delta + 1.0) ** b.M
    c2 = (b.epsilon - threshold) ** 2 / b.lambda_max**2
    exponent = -2.0 * (b.n - 2 * b.k) / (2 * b.k + 1) * c2
    return c1, c2, min(1.0, c1 * np.exp(exponent))


def epsilon_star(epsilon_prime: float, dmc: InducedDMC) -> float:
    """Posterior L1 sensitivity factor: eps' times the sum of Euclidean norms
    of the inverse-matrix columns."""
    if epsilon_prime < 0:
        raise ValueError("epsilon_prime must be >= 0")
    return float(epsilon_prime * np.linalg.norm(dmc.pi_inv, axis=0).sum())


# ---------------------------------------------------------------------------
# Experiment harness


def _auto_quantizer(encoding: np.ndarray) -> Quantizer:
    """Nearest-encoded-value rounding: boundaries at midpoints."""
    enc = np.sort(np.asarray(encoding, dtype=float))
    return Quantizer((enc[:-1] + enc[1:]) / 2.0)


@dataclass
class ExperimentData:
    x: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    channel: ChannelModel
    quantizer: Quantizer
    dmc: InducedDMC
    transition: np.ndarray | None     # known source chain (synthetic mode)
    reference_dna: str | None = None
    wash_cycle: str | None = None


def prepare_data(cfg) -> ExperimentData:
    """Generate (or load) the clean source, corrupt it, and quantize."""
    enc = (
        source.odd_integer_encoding(cfg.M)
        if cfg.encoding == "odd"
        else np.arange(cfg.M, dtype=float)
    )
    if cfg.channel == "auto":
        channel = gaussian_channel(enc, cfg.noise_stddev)
    else:
        channel = load_channel(cfg.channel)
        if channel.num_symbols != cfg.M:
            raise FigoError(
                f"channel file defines {channel.num_symbols} densities, config M={cfg.M}"
            )
    quantizer = (
        _auto_quantizer(enc) if cfg.quantizer == "auto-round" else load_quantizer(cfg.quantizer)
    )
    dmc = induced_dmc(channel, quantizer)

    reference_dna = None
    transition = None
    if cfg.mode == "synthetic":
        x = source.gen_markov_source(cfg.M, cfg.n, cfg.stay_prob, cfg.seed)
        transition = source.transition_matrix(cfg.M, cfg.stay_prob)
    else:
        if cfg.dna:
            dna = source.load_dna(cfg.dna)
            flows, _ = source.dna_to_flow(dna, cfg.wash_cycle, cfg.max_homopolymer)
        else:
            rng = np.random.default_rng(cfg.seed)
            chunks = []
            total = 0
            while total < cfg.n:
                dna = source.homopolymer_rich_dna(max(cfg.n, 1024), rng)
                f, _ = source.dna_to_flow(dna, cfg.wash_cycle, cfg.max_homopolymer)
                chunks.append(f)
                total += f.size
            flows = np.concatenate(chunks)
        if flows.size < cfg.n:
            raise FigoError(
                f"DNA yields only {flows.size} flows, config requests n={cfg.n}"
            )
        x = flows[: cfg.n]
        reference_dna = source.flow_to_dna(x, cfg.wash_cycle)
    Y = source.corrupt(x, channel, enc, seed=cfg.seed + 1)
    Z = quantize_all(quantizer, Y)
    return ExperimentData(
        x=x,
        Y=Y,
        Z=Z,
        channel=channel,
        quantizer=quantizer,
        dmc=dmc,
        transition=transition,
        reference_dna=reference_dna,
        wash_cycle=cfg.wash_cycle if cfg.mode == "flowspace" else None,
    )


def _run_scheme(scheme: str, k: int | None, data: ExperimentData, cfg, cell_seed: int) -> np.ndarray:
    loss = denoise.hamming_matrix(cfg.M)
    tc = neural.TrainConfig(
        learning_rate=cfg.learning_rate,
        beta1=cfg.beta1,
        beta2=cfg.beta2,
        adam_epsilon=cfg.adam_epsilon,
        batch_size=cfg.batch_size,
        epochs=cfg.epochs,
        seed=cell_seed,
        standardize=cfg.standardize,
    )
    if scheme == "ml_pdf":
        return denoise.ml_pdf(data.Y, data.channel)
    if scheme == "dude":
        return denoise.dude_denoise(data.Z, k, data.dmc.pi, loss)
    if scheme == "cude":
        return denoise.cude_denoise(data.Z, k, data.dmc.pi, loss, cfg.hidden, tc)
    if scheme == "gen_dude":
        return denoise.gen_dude_denoise(data.Y, k, data.channel, data.quantizer, loss)
    if scheme == "gen_cude":
        return denoise.gen_cude_denoise(
            data.Y, k, data.channel, data.quantizer, loss, cfg.hidden, tc
        )
    if scheme == "fb":
        if data.transition is None:
            raise FigoError("fb needs a known source chain; use baum_welch in flowspace mode")
        return denoise.fb_recursion(data.Y, data.transition, data.channel, loss)
    if scheme == "baum_welch":
        T = denoise.baum_welch(data.Y, data.channel, cfg.M, max_iters=cfg.bw_max_iters, tol=cfg.bw_tol)
        return denoise.fb_recursion(data.Y, T, data.channel, loss)
    raise FigoError(f"unknown scheme {scheme!r}")


def run_experiment(cfg, csv_path=None) -> list[DenoiseRun]:
    """Run every planned (scheme, k) cell and write one CSV row per cell.

    Scheme failures become rows with the error_message column populated.
    """
    from .config import planned_cells  # local import to avoid a cycle

    data = prepare_data(cfg)
    n, M = cfg.n, cfg.M
    runs: list[DenoiseRun] = []
    for idx, (scheme, k) in enumerate(planned_cells(cfg)):
        cell_seed = cfg.seed + 1000 + idx
        start = time.perf_counter()
        try:
            xhat = _run_scheme(scheme, k, data, cfg, cell_seed)
        except (FigoError, ValueError) as e:
            elapsed = time.perf_counter() - start
            runs.append(
                DenoiseRun(scheme, k, n, M, None, None, None, None, elapsed, cell_seed,
                           f"{type(e).__name__}: {e}")
            )
            continue
        elapsed = time.perf_counter() - start
        kk = k or 0
        raw = hamming_loss(data.x, xhat)
        interior = hamming_loss(data.x, xhat, interior_only=True, k=kk)
        if data.dmc.num_cells == M:
            base = hamming_loss(data.x, data.Z, interior_only=True, k=kk)
        else:
            base = hamming_loss(data.x, denoise.ml_pdf(data.Y, data.channel),
                                interior_only=True, k=kk)
        norm = normalized_error(interior, base) if base > 0 else None
        similarity = None
        if data.reference_dna is not None:
            cand = source.flow_to_dna(np.clip(xhat, 0, M - 1), data.wash_cycle)
            similarity = alignment_similarity(data.reference_dna, cand)
        runs.append(
            DenoiseRun(scheme, k, n, M, raw, interior, norm, similarity, elapsed, cell_seed)
        )
    if csv_path is None:
        csv_path = cfg.csv
    if csv_path:
        write_csv(csv_path, runs)
    return runs


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def write_csv(path, runs: list[DenoiseRun]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in runs:
            writer.writerow(
                [
                    r.scheme,
                    _fmt(r.k),
                    r.n,
                    r.M,
                    _fmt(r.raw_error),
                    _fmt(r.interior_error),
                    _fmt(r.normalized_error),
                    _fmt(r.similarity),
                    _fmt(r.runtime_seconds),
                    r.seed,
                    r.error_message,
                ]
            )


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_COLUMNS:
            raise FigoError(f"unexpected CSV columns: {reader.fieldnames}")
        return list(reader)
