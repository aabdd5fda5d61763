"""Clean-source generation, corruption, and DNA flow-space conversion."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .channel import ChannelModel, sample_outputs
from .errors import EncodingError, FormatError

DNA_BASES = "ACGT"
DEFAULT_WASH_CYCLE = "TACG"


def gen_markov_source(M: int, n: int, stay_prob: float, seed) -> np.ndarray:
    """Symmetric Markov chain over 0..M-1.

    The first symbol is uniform; afterwards the chain stays with probability
    ``stay_prob`` and otherwise jumps to one of the other M-1 symbols
    uniformly.
    """
    if M < 2:
        raise ValueError(f"alphabet size must be >= 2, got {M}")
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    if not 0.0 < stay_prob < 1.0:
        raise ValueError(f"stay_prob must be in (0, 1), got {stay_prob}")
    rng = np.random.default_rng(seed)
    x0 = int(rng.integers(M))
    if n == 1:
        return np.array([x0], dtype=np.int64)
    stays = rng.random(n - 1) < stay_prob
    jumps = rng.integers(1, M, size=n - 1)
    steps = np.where(stays, 0, jumps)
    x = np.empty(n, dtype=np.int64)
    x[0] = x0
    # Additive jumps mod M give a uniform choice among the other symbols,
    # so the whole path is one cumulative sum.
    x[1:] = (x0 + np.cumsum(steps)) % M
    return x


def transition_matrix(M: int, stay_prob: float) -> np.ndarray:
    """Row-stochastic transition matrix of the symmetric chain."""
    off = (1.0 - stay_prob) / (M - 1)
    T = np.full((M, M), off)
    np.fill_diagonal(T, stay_prob)
    return T


def odd_integer_encoding(M: int) -> np.ndarray:
    """Ascending symmetric integer levels; odd values for even M
    (e.g. M=4 -> [-3, -1, 1, 3])."""
    return np.array([2 * a - (M - 1) for a in range(M)], dtype=float)


def corrupt(x: np.ndarray, channel: ChannelModel, encoding=None, seed=None) -> np.ndarray:
    """Pass a symbol sequence through the channel: Y[i] ~ f_{x[i]}.

    The channel densities already live on the encoded output scale; when an
    encoding map is supplied it is only checked for covering all symbols.
    """
    x = np.asarray(x)
    if encoding is not None and len(encoding) != channel.num_symbols:
        raise ValueError(
            f"encoding covers {len(encoding)} symbols, channel has {channel.num_symbols}"
        )
    rng = np.random.default_rng(seed)
    return sample_outputs(channel, x, rng)


def dna_to_flow(dna: str, cycle: str, max_len: int) -> tuple[np.ndarray, int]:
    """Homopolymer flow encoding of a DNA string.

    Washes the cycle bases over the sequence; each flow consumes the maximal
    run of its base at the current position and emits the run length.  Stops
    after the flow that consumes the final base.  Returns the flow sequence
    and the number of flows clipped to ``max_len``.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if not cycle:
        raise ValueError("wash cycle must be nonempty")
    cycle_set = set(cycle)
    flows: list[int] = []
    clipped = 0
    pos = 0
    flow_idx = 0
    n = len(dna)
    while pos < n:
        if dna[pos] not in cycle_set:
            raise EncodingError(
                f"base {dna[pos]!r} at position {pos} never appears in cycle {cycle!r}"
            )
        base = cycle[flow_idx % len(cycle)]
        run = 0
        while pos < n and dna[pos] == base:
            run += 1
            pos += 1
        if run > max_len:
            clipped += 1
            run = max_len
        flows.append(run)
        flow_idx += 1
    return np.array(flows, dtype=np.int64), clipped


def flow_to_dna(flows: np.ndarray, cycle: str) -> str:
    """Inverse of the flow encoding: emit flows[i] copies of the cycle base."""
    if not cycle:
        raise ValueError("wash cycle must be nonempty")
    parts = []
    for i, f in enumerate(np.asarray(flows)):
        f = int(f)
        if f < 0:
            raise ValueError(f"negative flow value {f} at index {i}")
        if f:
            parts.append(cycle[i % len(cycle)] * f)
    return "".join(parts)


def homopolymer_rich_dna(num_bases: int, rng: np.random.Generator,
                         min_run: int = 2, geometric_p: float = 0.55,
                         max_run: int = 8) -> str:
    """Repeat-rich DNA built from homopolymer runs of geometric length.

    Models the microsatellite-like sequence where flow-space error correction
    matters; uniform base-by-base DNA has mean run length 4/3 and almost no
    exploitable run structure.
    """
    parts: list[str] = []
    prev = ""
    total = 0
    while total < num_bases:
        choices = DNA_BASES.replace(prev, "") if prev else DNA_BASES
        base = choices[int(rng.integers(len(choices)))]
        run = min_run + min(int(rng.geometric(geometric_p)) - 1, max_run - min_run)
        parts.append(base * run)
        prev = base
        total += run
    return "".join(parts)


def random_dna(num_bases: int, rng: np.random.Generator, max_run: int | None = None) -> str:
    """Uniform random DNA; with ``max_run`` set, no homopolymer exceeds it."""
    out = []
    run = 0
    prev = ""
    for _ in range(num_bases):
        if max_run is not None and run >= max_run:
            choices = DNA_BASES.replace(prev, "")
            base = choices[int(rng.integers(len(choices)))]
        else:
            base = DNA_BASES[int(rng.integers(4))]
        if base == prev:
            run += 1
        else:
            prev, run = base, 1
        out.append(base)
    return "".join(out)


def load_sequence(path, kind: str) -> np.ndarray:
    """Read a newline-delimited sequence file.

    ``kind`` is ``symbols`` (integers, must be nonempty) or ``observations``
    (decimals, may be empty).
    """
    if kind not in ("symbols", "observations"):
        raise ValueError(f"kind must be 'symbols' or 'observations', got {kind!r}")
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        tok = raw.strip()
        if not tok:
            continue
        try:
            values.append(int(tok) if kind == "symbols" else float(tok))
        except ValueError:
            raise FormatError(f"bad token {tok!r}", lineno) from None
    if kind == "symbols":
        if not values:
            raise FormatError("symbol sequence file is empty")
        return np.array(values, dtype=np.int64)
    return np.array(values, dtype=float)


def save_sequence(path, seq: np.ndarray) -> None:
    """Write one value per line; floats keep 17 significant digits."""
    seq = np.asarray(seq)
    if np.issubdtype(seq.dtype, np.integer):
        lines = (str(int(v)) for v in seq)
    else:
        lines = (format(float(v), ".17g") for v in seq)
    Path(path).write_text("\n".join(lines) + ("\n" if seq.size else ""))


def load_dna(path) -> str:
    """Read DNA as concatenated plain text; FASTA headers and whitespace are
    skipped."""
    parts = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith(">"):
            continue
        parts.append("".join(line.split()).upper())
    return "".join(parts)
