"""Memoryless channels with finite input and continuous output.

A channel is a list of per-symbol output densities (Gaussian or Gaussian-kernel
KDE).  A quantizer partitions the output line into half-open cells; together
they induce a discrete channel matrix whose (pseudo-)inverse drives the
denoisers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import ndtr

from .errors import FormatError, InsufficientDataError, InvalidChannelError

# Relative tolerance on the smallest singular value below which the induced
# matrix is treated as rank deficient.
RANK_TOL = 1e-10

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianDensity:
    mean: float
    stddev: float

    def __post_init__(self):
        if not self.stddev > 0:
            raise ValueError(f"stddev must be positive, got {self.stddev}")

    def pdf(self, y):
        z = (np.asarray(y, dtype=float) - self.mean) / self.stddev
        return np.exp(-0.5 * z * z) / (_SQRT_2PI * self.stddev)

    def cell_mass(self, lo: float, hi: float) -> float:
        # Exact CDF difference; lo/hi may be +-inf.
        zlo = (lo - self.mean) / self.stddev
        zhi = (hi - self.mean) / self.stddev
        return float(ndtr(zhi) - ndtr(zlo))

    def support(self) -> tuple[float, float]:
        return (self.mean - 8.0 * self.stddev, self.mean + 8.0 * self.stddev)

    def sample(self, rng: np.random.Generator, size: int):
        return self.mean + self.stddev * rng.standard_normal(size)


@dataclass(frozen=True)
class KDEDensity:
    """Average of Gaussian kernels centred at the stored samples."""

    samples: np.ndarray
    bandwidth: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float).ravel()
        if samples.size == 0:
            raise ValueError("KDE density needs at least one sample")
        if not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        object.__setattr__(self, "samples", samples)

    def pdf(self, y):
        y = np.asarray(y, dtype=float)
        z = (y[..., None] - self.samples) / self.bandwidth
        k = np.exp(-0.5 * z * z) / (_SQRT_2PI * self.bandwidth)
        return k.mean(axis=-1)

    def support(self) -> tuple[float, float]:
        return (
            float(self.samples.min()) - 6.0 * self.bandwidth,
            float(self.samples.max()) + 6.0 * self.bandwidth,
        )

    def cell_mass(self, lo: float, hi: float) -> float:
        slo, shi = self.support()
        lo = max(lo, slo)
        hi = min(hi, shi)
        if hi <= lo:
            return 0.0
        return _adaptive_simpson(lambda x: float(self.pdf(x)), lo, hi, 1e-9)

    def sample(self, rng: np.random.Generator, size: int):
        centers = rng.choice(self.samples, size=size, replace=True)
        return centers + self.bandwidth * rng.standard_normal(size)


Density = GaussianDensity | KDEDensity


@dataclass(frozen=True)
class ChannelModel:
    """Ordered per-symbol output densities, indexed by source symbol."""

    densities: tuple[Density, ...]

    def __post_init__(self):
        object.__setattr__(self, "densities", tuple(self.densities))
        if len(self.densities) == 0:
            raise ValueError("channel needs at least one density")

    @property
    def num_symbols(self) -> int:
        return len(self.densities)

    def support(self) -> tuple[float, float]:
        los, his = zip(*(d.support() for d in self.densities))
        return (min(los), max(his))

    def validate(self, tol: float = 1e-6) -> None:
        """Check each density integrates to one over its support."""
        for a, d in enumerate(self.densities):
            lo, hi = d.support()
            total = _adaptive_simpson(lambda x: float(d.pdf(x)), lo, hi, 1e-9)
            if abs(total - 1.0) > tol:
                raise ValueError(
                    f"density for symbol {a} integrates to {total:.8f}, not 1"
                )


def gaussian_channel(means, stddev) -> ChannelModel:
    """Channel with one Gaussian per symbol; scalar stddev is shared."""
    means = np.asarray(means, dtype=float)
    stds = np.broadcast_to(np.asarray(stddev, dtype=float), means.shape)
    return ChannelModel(
        tuple(GaussianDensity(float(m), float(s)) for m, s in zip(means, stds))
    )


def density_eval(channel: ChannelModel, a: int, y: float) -> float:
    """Evaluate f_a(y)."""
    if not 0 <= a < channel.num_symbols:
        raise ValueError(f"symbol {a} out of range 0..{channel.num_symbols - 1}")
    return float(channel.densities[a].pdf(y))


def density_values(channel: ChannelModel, Y: np.ndarray, chunk: int = 65536) -> np.ndarray:
    """Matrix F with F[i, a] = f_a(Y[i])."""
    Y = np.asarray(Y, dtype=float)
    out = np.empty((Y.size, channel.num_symbols))
    for start in range(0, Y.size, chunk):
        block = Y[start : start + chunk]
        for a, d in enumerate(channel.densities):
            out[start : start + block.size, a] = d.pdf(block)
    return out


def sample_output(channel: ChannelModel, a: int, rng: np.random.Generator) -> float:
    """Draw one observation Y ~ f_a."""
    if not 0 <= a < channel.num_symbols:
        raise ValueError(f"symbol {a} out of range 0..{channel.num_symbols - 1}")
    return float(channel.densities[a].sample(rng, 1)[0])


def sample_outputs(channel: ChannelModel, symbols: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw Y[i] ~ f_{symbols[i]} independently.

    Draws are grouped by symbol in symbol order, so the result is
    deterministic for a given generator state.
    """
    symbols = np.asarray(symbols)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= channel.num_symbols):
        raise ValueError("symbol out of range for channel")
    out = np.empty(symbols.size, dtype=float)
    for a, d in enumerate(channel.densities):
        mask = symbols == a
        cnt = int(mask.sum())
        if cnt:
            out[mask] = d.sample(rng, cnt)
    return out


@dataclass(frozen=True)
class Quantizer:
    """Half-open interval partition of the real line.

    Cell i is [boundaries[i-1], boundaries[i]); the leftmost cell extends to
    -inf and the rightmost to +inf.  A boundary point belongs to the cell on
    its right.
    """

    boundaries: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=float).ravel()
        if b.size > 1 and not np.all(np.diff(b) > 0):
            raise ValueError("boundaries must be strictly increasing")
        object.__setattr__(self, "boundaries", b)

    @property
    def num_cells(self) -> int:
        return self.boundaries.size + 1


def quantize(q: Quantizer, y: float) -> int:
    """Index of the cell containing y."""
    return int(np.searchsorted(q.boundaries, y, side="right"))


def quantize_all(q: Quantizer, Y: np.ndarray) -> np.ndarray:
    return np.searchsorted(q.boundaries, np.asarray(Y, dtype=float), side="right").astype(np.int64)


@dataclass(frozen=True)
class InducedDMC:
    """Discrete channel matrix induced by a channel/quantizer pair."""

    pi: np.ndarray       # (M, K), row stochastic
    pi_inv: np.ndarray   # (K, M), inverse or Moore-Penrose pseudo-inverse

    @property
    def num_symbols(self) -> int:
        return self.pi.shape[0]

    @property
    def num_cells(self) -> int:
        return self.pi.shape[1]


def induced_dmc(channel: ChannelModel, q: Quantizer) -> InducedDMC:
    """Integrate each density over each quantizer cell.

    Gaussian cells are exact CDF differences; KDE cells use adaptive Simpson
    quadrature (abs. tolerance 1e-9) over the density support, with the row
    renormalized to absorb the support truncation.
    """
    M = channel.num_symbols
    edges = np.concatenate(([-np.inf], q.boundaries, [np.inf]))
    K = q.num_cells
    pi = np.empty((M, K))
    for a, d in enumerate(channel.densities):
        row = np.array([d.cell_mass(edges[j], edges[j + 1]) for j in range(K)])
        row = np.clip(row, 0.0, None)
        if isinstance(d, KDEDensity):
            total = row.sum()
            if total <= 0:
                raise InvalidChannelError(f"density {a} has no mass on any cell")
            row = row / total
        pi[a] = row
    sv = np.linalg.svd(pi, compute_uv=False)
    if sv.size < M or sv[-1] < RANK_TOL * sv[0]:
        raise InvalidChannelError(
            f"induced matrix is rank deficient (smallest/largest singular value "
            f"= {sv[-1] / sv[0]:.3e}); densities are not separable under this quantizer"
        )
    pi_inv = np.linalg.pinv(pi)
    return InducedDMC(pi=pi, pi_inv=pi_inv)


def kde_estimate(paired_holdout, bandwidth: float, M: int) -> ChannelModel:
    """Per-symbol Gaussian KDE from (symbol, observation) pairs."""
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    buckets: list[list[float]] = [[] for _ in range(M)]
    for a, y in paired_holdout:
        a = int(a)
        if not 0 <= a < M:
            raise ValueError(f"symbol {a} out of range 0..{M - 1}")
        buckets[a].append(float(y))
    for a, b in enumerate(buckets):
        if not b:
            raise InsufficientDataError(f"no holdout samples for symbol {a}")
    return ChannelModel(
        tuple(KDEDensity(np.array(b), bandwidth) for b in buckets)
    )


def load_channel(path) -> ChannelModel:
    """Read a channel descriptor: one `gauss <mean> <stddev>` or
    `kde <samples-file> <bandwidth>` line per symbol.  Sample file paths are
    resolved relative to the descriptor's directory."""
    path = Path(path)
    densities: list[Density] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0].lower()
        if kind == "gauss":
            if len(parts) != 3:
                raise FormatError("expected: gauss <mean> <stddev>", lineno)
            try:
                densities.append(GaussianDensity(float(parts[1]), float(parts[2])))
            except ValueError as e:
                raise FormatError(str(e), lineno) from e
        elif kind == "kde":
            if len(parts) != 3:
                raise FormatError("expected: kde <samples-file> <bandwidth>", lineno)
            sample_path = path.parent / parts[1]
            try:
                samples = _load_decimals(sample_path)
                densities.append(KDEDensity(samples, float(parts[2])))
            except ValueError as e:
                raise FormatError(str(e), lineno) from e
        else:
            raise FormatError(f"unknown density kind {parts[0]!r}", lineno)
    if not densities:
        raise FormatError("channel descriptor defines no densities")
    return ChannelModel(tuple(densities))


def load_quantizer(path) -> Quantizer:
    """Read one line of space-separated boundary values."""
    text = Path(path).read_text().strip()
    if not text:
        return Quantizer(np.empty(0))
    try:
        values = np.array([float(tok) for tok in text.split()])
    except ValueError as e:
        raise FormatError(f"bad boundary value: {e}") from e
    return Quantizer(values)


def _load_decimals(path) -> np.ndarray:
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        tok = raw.strip()
        if not tok:
            continue
        try:
            values.append(float(tok))
        except ValueError:
            raise FormatError(f"bad decimal {tok!r} in {path}", lineno) from None
    return np.array(values)


def _adaptive_simpson(f, lo: float, hi: float, tol: float) -> float:
    """Recursive adaptive Simpson quadrature with absolute tolerance."""

    def simpson(a, fa, b, fb):
        m = 0.5 * (a + b)
        fm = f(m)
        return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, fa, b, fb, m, fm, whole, eps, depth):
        lm, flm, left = simpson(a, fa, m, fm)
        rm, frm, right = simpson(m, fm, b, fb)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return recurse(a, fa, m, fm, lm, flm, left, eps / 2.0, depth - 1) + recurse(
            m, fm, b, fb, rm, frm, right, eps / 2.0, depth - 1
        )

    fa, fb = f(lo), f(hi)
    m, fm, whole = simpson(lo, fa, hi, fb)
    return recurse(lo, fa, hi, fb, m, fm, whole, tol, 48)
