"""Minimal feed-forward network: ReLU hiddens, softmax output, Adam training.

Just enough machinery to learn the conditional distribution of the quantized
center symbol given a sliding-window context.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import TrainingDivergedError


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    batch_size: int = 256
    epochs: int = 10
    seed: int = 0
    standardize: bool = False

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("betas must lie in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")


@dataclass
class ContextDataset:
    """Sliding-window inputs and quantized center targets."""

    inputs: np.ndarray   # (rows, 2k) float
    targets: np.ndarray  # (rows,) int in 0..num_classes-1
    num_classes: int

    def __post_init__(self):
        self.inputs = np.asarray(self.inputs, dtype=float)
        self.targets = np.asarray(self.targets, dtype=np.int64)
        if self.inputs.shape[0] != self.targets.shape[0]:
            raise ValueError("inputs and targets must have equal length")
        if self.targets.size and (
            self.targets.min() < 0 or self.targets.max() >= self.num_classes
        ):
            raise ValueError("targets out of range")

    def __len__(self) -> int:
        return self.inputs.shape[0]


@dataclass
class NetworkParams:
    weights: list[np.ndarray] = field(default_factory=list)
    biases: list[np.ndarray] = field(default_factory=list)

    @property
    def layer_dims(self) -> list[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]


def build_contexts(Y: np.ndarray, Z: np.ndarray, k: int, num_classes: int | None = None) -> ContextDataset:
    """Rows (Y[i-k..i-1], Y[i+1..i+k]) -> Z[i] for interior positions i."""
    Y = np.asarray(Y, dtype=float)
    Z = np.asarray(Z, dtype=np.int64)
    n = Y.size
    if Z.size != n:
        raise ValueError("Y and Z must have equal length")
    if k < 0:
        raise ValueError("window must be >= 0")
    if n < 2 * k + 1:
        raise ValueError(f"need at least 2k+1={2 * k + 1} positions, got {n}")
    if num_classes is None:
        num_classes = int(Z.max()) + 1 if Z.size else 1
    if k == 0:
        return ContextDataset(np.empty((n, 0)), Z, num_classes)
    win = np.lib.stride_tricks.sliding_window_view(Y, 2 * k + 1)
    inputs = np.concatenate([win[:, :k], win[:, k + 1 :]], axis=1).copy()
    return ContextDataset(inputs, Z[k : n - k], num_classes)


def init_params(layer_dims: list[int], rng: np.random.Generator) -> NetworkParams:
    """He-style scaled-uniform weights, zero biases."""
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
        limit = np.sqrt(6.0 / max(fan_in, 1))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return NetworkParams(weights, biases)


def _logits(params: NetworkParams, X: np.ndarray) -> np.ndarray:
    h = X
    for W, b in zip(params.weights[:-1], params.biases[:-1]):
        h = np.maximum(h @ W + b, 0.0)
    return h @ params.weights[-1] + params.biases[-1]


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def forward(params: NetworkParams, x: np.ndarray) -> np.ndarray:
    """Probability vector(s) for a single input or a batch."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = x[None, :] if single else x
    if X.shape[1] != params.weights[0].shape[0]:
        raise ValueError(
            f"input has {X.shape[1]} features, network expects {params.weights[0].shape[0]}"
        )
    probs = _softmax(_logits(params, X))
    return probs[0] if single else probs


def predict_proba(params: NetworkParams, X: np.ndarray, chunk: int = 65536) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    out = np.empty((X.shape[0], params.biases[-1].size))
    for start in range(0, X.shape[0], chunk):
        out[start : start + chunk] = forward(params, X[start : start + chunk])
    return out


def loss_and_grad(params: NetworkParams, inputs: np.ndarray, targets: np.ndarray):
    """Mean cross-entropy and its gradient by backpropagation."""
    X = np.asarray(inputs, dtype=float)
    t = np.asarray(targets, dtype=np.int64)
    if X.shape[0] == 0:
        raise ValueError("batch must be nonempty")
    B = X.shape[0]

    acts = [X]
    h = X
    for W, b in zip(params.weights[:-1], params.biases[:-1]):
        h = np.maximum(h @ W + b, 0.0)
        acts.append(h)
    logits = h @ params.weights[-1] + params.biases[-1]

    shifted = logits - logits.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1))
    loss = float(np.mean(lse - shifted[np.arange(B), t]))

    probs = _softmax(logits)
    delta = probs
    delta[np.arange(B), t] -= 1.0
    delta /= B

    grad_w = [np.empty_like(W) for W in params.weights]
    grad_b = [np.empty_like(b) for b in params.biases]
    for layer in range(len(params.weights) - 1, -1, -1):
        grad_w[layer] = acts[layer].T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ params.weights[layer].T) * (acts[layer] > 0)
    return loss, (grad_w, grad_b)


def fit(
    dataset: ContextDataset,
    hidden_dims: list[int],
    cfg: TrainConfig,
    after_step=None,
):
    """Adam over shuffled minibatches; returns (params, per-epoch mean losses)."""
    if len(dataset) == 0:
        raise ValueError("dataset must be nonempty")
    rng = np.random.default_rng(cfg.seed)
    dims = [dataset.inputs.shape[1]] + list(hidden_dims) + [dataset.num_classes]
    params = init_params(dims, rng)

    m_w = [np.zeros_like(W) for W in params.weights]
    v_w = [np.zeros_like(W) for W in params.weights]
    m_b = [np.zeros_like(b) for b in params.biases]
    v_b = [np.zeros_like(b) for b in params.biases]
    step = 0
    epoch_losses: list[float] = []
    n = len(dataset)
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            loss, (gw, gb) = loss_and_grad(params, dataset.inputs[idx], dataset.targets[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(f"loss became {loss} at step {step}")
            total += loss * idx.size
            step += 1
            bc1 = 1.0 - cfg.beta1**step
            bc2 = 1.0 - cfg.beta2**step
            for i in range(len(params.weights)):
                m_w[i] = cfg.beta1 * m_w[i] + (1 - cfg.beta1) * gw[i]
                v_w[i] = cfg.beta2 * v_w[i] + (1 - cfg.beta2) * gw[i] ** 2
                params.weights[i] -= cfg.learning_rate * (m_w[i] / bc1) / (
                    np.sqrt(v_w[i] / bc2) + cfg.adam_epsilon
                )
                m_b[i] = cfg.beta1 * m_b[i] + (1 - cfg.beta1) * gb[i]
                v_b[i] = cfg.beta2 * v_b[i] + (1 - cfg.beta2) * gb[i] ** 2
                params.biases[i] -= cfg.learning_rate * (m_b[i] / bc1) / (
                    np.sqrt(v_b[i] / bc2) + cfg.adam_epsilon
                )
            if after_step is not None:
                after_step(params)
        epoch_losses.append(total / n)
    return params, epoch_losses


def train(dataset: ContextDataset, hidden_dims: list[int], cfg: TrainConfig) -> NetworkParams:
    return fit(dataset, hidden_dims, cfg)[0]


def standardize_features(X: np.ndarray):
    """Per-feature standardization transform fitted on X.

    Returns (transform, X_standardized); constant features pass through."""
    X = np.asarray(X, dtype=float)
    mu = X.mean(axis=0) if X.size else np.zeros(X.shape[1])
    sigma = X.std(axis=0) if X.size else np.ones(X.shape[1])
    sigma = np.where(sigma > 0, sigma, 1.0)

    def transform(A):
        return (np.asarray(A, dtype=float) - mu) / sigma

    return transform, transform(X)


def save_params(path, params: NetworkParams) -> None:
    """Text dump: layer dims, then row-major values (weights then bias per
    layer) at full precision."""
    lines = [" ".join(str(d) for d in params.layer_dims)]
    for W, b in zip(params.weights, params.biases):
        lines.extend(format(v, ".17g") for v in W.ravel())
        lines.extend(format(v, ".17g") for v in b)
    Path(path).write_text("\n".join(lines) + "\n")


def load_params(path) -> NetworkParams:
    text = Path(path).read_text().splitlines()
    dims = [int(tok) for tok in text[0].split()]
    flat = np.array([float(tok) for tok in text[1:] if tok.strip()])
    weights, biases = [], []
    pos = 0
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        weights.append(flat[pos : pos + fan_in * fan_out].reshape(fan_in, fan_out))
        pos += fan_in * fan_out
        biases.append(flat[pos : pos + fan_out].copy())
        pos += fan_out
    if pos != flat.size:
        raise ValueError("parameter file has trailing values")
    return NetworkParams(weights, biases)
