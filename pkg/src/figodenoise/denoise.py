"""Reconstruction schemes.

All schemes share the same conventions: windowed schemes reconstruct interior
positions (k <= i < n-k, 0-based) and pass the quantized observation through
at the boundary; ties in any arg-min are broken toward the smallest symbol
index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelModel, InducedDMC, Quantizer, density_values, induced_dmc, quantize_all
from .errors import ComplexityCapError, InvalidChannelError, NumericalUnderflowError
from .neural import ContextDataset, TrainConfig, build_contexts, predict_proba, standardize_features, train

DEFAULT_TUPLE_CAP = 10**6

# Memory budget (floats) for the per-position tuple-product blocks of the
# joint-expansion denoiser.
_BLOCK_BUDGET = 4 * 10**6


def hamming_matrix(M: int) -> np.ndarray:
    return 1.0 - np.eye(M)


def bayes_response(v: np.ndarray, loss_matrix: np.ndarray) -> int:
    """Symbol minimizing the expected loss under belief vector v.

    v may be unnormalized and may contain negative entries.
    """
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("belief vector must be finite")
    return int(np.argmin(v @ np.asarray(loss_matrix, dtype=float)))


def bayes_responses(V: np.ndarray, loss_matrix: np.ndarray) -> np.ndarray:
    return np.argmin(np.asarray(V) @ np.asarray(loss_matrix, dtype=float), axis=1).astype(np.int64)


def ml_pdf(Y: np.ndarray, channel: ChannelModel) -> np.ndarray:
    """Symbol-by-symbol maximum likelihood: argmax_a f_a(Y_i)."""
    return np.argmax(density_values(channel, np.asarray(Y, dtype=float)), axis=1).astype(np.int64)


@dataclass(frozen=True)
class ContextCountTable:
    """Center-symbol counts per observed double-sided context."""

    codes: np.ndarray    # sorted unique context codes, base-K digits
    counts: np.ndarray   # (len(codes), K) integer counts
    k: int
    num_symbols: int

    def vector_for(self, context) -> np.ndarray:
        code = _encode_context(np.asarray(context, dtype=np.int64), self.num_symbols)
        idx = np.searchsorted(self.codes, code)
        if idx >= self.codes.size or self.codes[idx] != code:
            return np.zeros(self.num_symbols, dtype=np.int64)
        return self.counts[idx].copy()

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _encode_context(ctx: np.ndarray, K: int) -> int:
    code = 0
    for s in ctx:
        code = code * K + int(s)
    return code


def _context_codes(Z: np.ndarray, k: int, K: int) -> np.ndarray:
    """Base-K code of the 2k-symbol context around each interior position."""
    n = Z.size
    if k == 0:
        return np.zeros(n, dtype=np.int64)
    if 2 * k * np.log2(max(K, 2)) > 62:
        raise ValueError(f"context space K^2k = {K}^{2 * k} exceeds 64-bit codes")
    win = np.lib.stride_tricks.sliding_window_view(Z, 2 * k + 1)
    ctx = np.concatenate([win[:, :k], win[:, k + 1 :]], axis=1)
    powers = K ** np.arange(2 * k - 1, -1, -1, dtype=np.int64)
    return ctx @ powers


def dude_counts(Z: np.ndarray, k: int, num_symbols: int | None = None) -> ContextCountTable:
    """Exact joint counts of (context, center) pairs over interior positions."""
    Z = np.asarray(Z, dtype=np.int64)
    n = Z.size
    if n < 2 * k + 1:
        raise ValueError(f"need at least 2k+1={2 * k + 1} symbols, got {n}")
    K = int(Z.max()) + 1 if num_symbols is None else num_symbols
    codes = _context_codes(Z, k, K)
    centers = Z[k : n - k]
    uniq, inverse = np.unique(codes, return_inverse=True)
    counts = np.zeros((uniq.size, K), dtype=np.int64)
    np.add.at(counts, (inverse, centers), 1)
    return ContextCountTable(codes=uniq, counts=counts, k=k, num_symbols=K)


def _check_full_row_rank(gamma: np.ndarray) -> None:
    sv = np.linalg.svd(gamma, compute_uv=False)
    if sv.size < gamma.shape[0] or sv[-1] < 1e-10 * sv[0]:
        raise InvalidChannelError("channel matrix is not full row rank")


def quantized_rule(P: np.ndarray, centers: np.ndarray, gamma: np.ndarray,
                   gamma_pinv: np.ndarray, loss_matrix: np.ndarray) -> np.ndarray:
    """Shared inverted-channel decision: B((p Gamma^+) * gamma_z) per row."""
    V = P @ gamma_pinv                      # (rows, M)
    W = V * gamma[:, centers].T             # reweight by the observed column
    return bayes_responses(W, loss_matrix)


def dude_denoise(Z: np.ndarray, k: int, gamma: np.ndarray, loss_matrix: np.ndarray) -> np.ndarray:
    """Count-based sliding-window denoiser on a quantized sequence."""
    Z = np.asarray(Z, dtype=np.int64)
    gamma = np.asarray(gamma, dtype=float)
    _check_full_row_rank(gamma)
    n = Z.size
    K = gamma.shape[1]
    if n < 2 * k + 1:
        raise ValueError(f"need at least 2k+1={2 * k + 1} symbols, got {n}")
    codes = _context_codes(Z, k, K)
    centers = Z[k : n - k] if k else Z
    uniq, inverse = np.unique(codes, return_inverse=True)
    counts = np.zeros((uniq.size, K))
    np.add.at(counts, (inverse, centers), 1.0)
    P = counts / counts.sum(axis=1, keepdims=True)
    gamma_pinv = np.linalg.pinv(gamma)
    # One decision per (context, observed symbol) pair, then gather.
    V = P @ gamma_pinv                                   # (U, M)
    W = V[:, :, None] * gamma[None, :, :]                # (U, M, K)
    losses = np.einsum("umk,mx->uxk", W, loss_matrix)
    table = np.argmin(losses, axis=1).astype(np.int64)   # (U, K)
    xhat = Z.copy()
    xhat[k : n - k] = table[inverse, centers]
    return xhat


def cude_denoise(Z: np.ndarray, k: int, gamma: np.ndarray, loss_matrix: np.ndarray,
                 hidden_dims, cfg: TrainConfig) -> np.ndarray:
    """Like dude_denoise but with a network-learned conditional in place of
    the empirical counts."""
    Z = np.asarray(Z, dtype=np.int64)
    gamma = np.asarray(gamma, dtype=float)
    _check_full_row_rank(gamma)
    n = Z.size
    K = gamma.shape[1]
    dataset = build_contexts(Z.astype(float), Z, k, num_classes=K)
    inputs = dataset.inputs
    if cfg.standardize:
        _, inputs = standardize_features(dataset.inputs)
        dataset = ContextDataset(inputs, dataset.targets, K)
    params = train(dataset, hidden_dims, cfg)
    P = predict_proba(params, inputs)
    centers = Z[k : n - k] if k else Z
    xhat = Z.copy()
    xhat[k : n - k] = quantized_rule(P, centers, gamma, np.linalg.pinv(gamma), loss_matrix)
    return xhat


def gen_cude_posterior(p: np.ndarray, dmc: InducedDMC, fvec: np.ndarray) -> np.ndarray:
    """Unnormalized source posterior (p . Pi^-1) * f; negatives preserved."""
    p = np.asarray(p, dtype=float)
    fvec = np.asarray(fvec, dtype=float)
    if p.size != dmc.num_cells:
        raise ValueError(f"p has length {p.size}, expected {dmc.num_cells}")
    if fvec.size != dmc.num_symbols:
        raise ValueError(f"fvec has length {fvec.size}, expected {dmc.num_symbols}")
    return (p @ dmc.pi_inv) * fvec


def gen_cude_decisions(P: np.ndarray, dmc: InducedDMC, F: np.ndarray,
                       loss_matrix: np.ndarray) -> np.ndarray:
    """Bayes responses of row-wise gen_cude_posterior(P[i], dmc, F[i])."""
    V = (np.asarray(P, dtype=float) @ dmc.pi_inv) * np.asarray(F, dtype=float)
    return bayes_responses(V, loss_matrix)


def gen_cude_denoise(Y: np.ndarray, k: int, channel: ChannelModel, q: Quantizer,
                     loss_matrix: np.ndarray, hidden_dims, cfg: TrainConfig) -> np.ndarray:
    """Train a center-symbol predictor on continuous contexts, invert the
    induced channel, reweight by density values, take the Bayes response."""
    Y = np.asarray(Y, dtype=float)
    dmc = induced_dmc(channel, q)
    Z = quantize_all(q, Y)
    n = Y.size
    dataset = build_contexts(Y, Z, k, num_classes=dmc.num_cells)
    inputs = dataset.inputs
    if cfg.standardize:
        _, inputs = standardize_features(dataset.inputs)
        dataset = ContextDataset(inputs, dataset.targets, dmc.num_cells)
    params = train(dataset, hidden_dims, cfg)
    P = predict_proba(params, inputs)
    F = density_values(channel, Y[k : n - k] if k else Y)
    xhat = Z.copy()
    xhat[k : n - k] = gen_cude_decisions(P, dmc, F, loss_matrix)
    return xhat


def delta_rounded_decisions(P: np.ndarray, dmc: InducedDMC, F: np.ndarray,
                            loss_matrix: np.ndarray, delta: float) -> np.ndarray:
    """Test support: posteriors rescaled and rounded to multiples of delta in
    [0, 1] before the Bayes response.

    Rescaling uses the L1 norm (positive), so orientation is preserved and
    negative components round to zero as the coarse quantizer prescribes.
    """
    V = (np.asarray(P, dtype=float) @ dmc.pi_inv) * np.asarray(F, dtype=float)
    scale = np.abs(V).sum(axis=1, keepdims=True)
    Vn = V / np.where(scale > 0, scale, 1.0)
    rounded = np.clip(np.round(Vn / delta) * delta, 0.0, 1.0)
    return bayes_responses(rounded, loss_matrix)


def tuple_distribution(Z: np.ndarray, k: int, dmc: InducedDMC) -> np.ndarray:
    """Estimated clean-tuple distribution: empirical quantized (2k+1)-tuple
    frequencies pushed through Pi^-1 per coordinate, clamped and renormalized.
    """
    Z = np.asarray(Z, dtype=np.int64)
    K = dmc.num_cells
    width = 2 * k + 1
    win = np.lib.stride_tricks.sliding_window_view(Z, width)
    powers = K ** np.arange(width - 1, -1, -1, dtype=np.int64)
    codes = win @ powers
    freq = np.bincount(codes, minlength=K**width).astype(float)
    freq /= freq.sum()
    tensor = freq.reshape((K,) * width)
    for axis in range(width):
        tensor = np.moveaxis(np.tensordot(tensor, dmc.pi_inv, axes=([axis], [0])), -1, axis)
    tensor = np.clip(tensor, 0.0, None)
    total = tensor.sum()
    if total <= 0:
        raise InvalidChannelError("tuple distribution vanished after clamping")
    return tensor / total


def gen_dude_denoise(Y: np.ndarray, k: int, channel: ChannelModel, q: Quantizer,
                     loss_matrix: np.ndarray, tuple_cap: int = DEFAULT_TUPLE_CAP) -> np.ndarray:
    """Joint-expansion denoiser: sums density products over all clean
    (2k+1)-tuples, weighted by the inverted empirical tuple distribution.
    Work and memory grow as M^(2k+1)."""
    Y = np.asarray(Y, dtype=float)
    M = channel.num_symbols
    width = 2 * k + 1
    num_tuples = M**width
    if num_tuples > tuple_cap:
        raise ComplexityCapError(
            f"M^(2k+1) = {M}^{width} = {num_tuples} exceeds cap {tuple_cap}"
        )
    dmc = induced_dmc(channel, q)
    Z = quantize_all(q, Y)
    n = Y.size
    if n < width:
        raise ValueError(f"need at least 2k+1={width} observations, got {n}")
    p_tuple = tuple_distribution(Z, k, dmc).ravel()
    F = density_values(channel, Y)
    xhat = Z.copy()
    interior = n - 2 * k
    block = max(1, _BLOCK_BUDGET // num_tuples)
    left = M**k
    for start in range(0, interior, block):
        stop = min(start + block, interior)
        rows = np.arange(start, stop)
        # Per-position product of density values over the window, expanded
        # over every tuple: W[r, u] = prod_j f_{u_j}(Y[i+j-k]).
        W = np.ones((rows.size, 1))
        for j in range(width):
            W = (W[:, :, None] * F[rows + j, None, :]).reshape(rows.size, -1)
        joint = (W * p_tuple).reshape(rows.size, left, M, left).sum(axis=(1, 3))
        xhat[k + start : k + stop] = bayes_responses(joint, loss_matrix)
    return xhat


def stationary_distribution(transition: np.ndarray) -> np.ndarray:
    """Stationary distribution of a row-stochastic matrix (least squares)."""
    T = np.asarray(transition, dtype=float)
    M = T.shape[0]
    A = np.vstack([T.T - np.eye(M), np.ones(M)])
    b = np.zeros(M + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def _forward_backward(E: np.ndarray, transition: np.ndarray, initial: np.ndarray):
    """Scaled forward/backward recursion over emission density values.

    Returns (alpha, beta, scales, gamma, loglik) with per-step rescaling.
    """
    n, M = E.shape
    T = np.asarray(transition, dtype=float)
    alpha = np.empty((n, M))
    beta = np.empty((n, M))
    scales = np.empty(n)
    a = initial * E[0]
    s = a.sum()
    if not np.isfinite(s) or s <= 0.0:
        raise NumericalUnderflowError("all-zero emission row at position 0")
    alpha[0] = a / s
    scales[0] = s
    for t in range(1, n):
        a = (alpha[t - 1] @ T) * E[t]
        s = a.sum()
        if not np.isfinite(s) or s <= 0.0:
            raise NumericalUnderflowError(f"all-zero emission row at position {t}")
        alpha[t] = a / s
        scales[t] = s
    beta[n - 1] = 1.0
    for t in range(n - 2, -1, -1):
        beta[t] = (T @ (E[t + 1] * beta[t + 1])) / scales[t + 1]
    gamma = alpha * beta
    gamma /= gamma.sum(axis=1, keepdims=True)
    return alpha, beta, scales, gamma, float(np.log(scales).sum())


def fb_posteriors(Y: np.ndarray, transition: np.ndarray, channel: ChannelModel,
                  initial: np.ndarray | None = None) -> np.ndarray:
    """Smoothed per-position posteriors P(x_i | Y^n) for a Markov source."""
    E = density_values(channel, np.asarray(Y, dtype=float))
    if initial is None:
        initial = stationary_distribution(transition)
    return _forward_backward(E, transition, np.asarray(initial, dtype=float))[3]


def fb_recursion(Y: np.ndarray, transition: np.ndarray, channel: ChannelModel,
                 loss_matrix: np.ndarray, initial: np.ndarray | None = None) -> np.ndarray:
    """Optimal smoothing denoiser for a known Markov source."""
    return bayes_responses(fb_posteriors(Y, transition, channel, initial), loss_matrix)


def baum_welch(Y: np.ndarray, channel: ChannelModel, M: int, max_iters: int = 50,
               tol: float = 1e-4, init_transition: np.ndarray | None = None,
               return_history: bool = False):
    """Estimate the source transition matrix with emissions held fixed.

    The default start is diagonally biased; a uniform start is a fixed point
    of the update and would never leave the i.i.d. family.
    """
    if channel.num_symbols != M:
        raise ValueError(f"channel has {channel.num_symbols} densities, expected {M}")
    if init_transition is None:
        T = np.full((M, M), 0.4 / max(M - 1, 1))
        np.fill_diagonal(T, 0.6)
    else:
        T = np.asarray(init_transition, dtype=float).copy()
    E = density_values(channel, np.asarray(Y, dtype=float))
    initial = np.full(M, 1.0 / M)
    history: list[float] = []
    prev = -np.inf
    for _ in range(max_iters):
        alpha, beta, scales, gamma, loglik = _forward_backward(E, T, initial)
        history.append(loglik)
        flow = alpha[:-1].T @ (beta[1:] * E[1:] / scales[1:, None])
        T_new = T * flow
        T_new /= T_new.sum(axis=1, keepdims=True)
        T = T_new
        if loglik - prev < tol:
            break
        prev = loglik
    if return_history:
        return T, history
    return T
