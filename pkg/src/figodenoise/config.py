"""Experiment configuration: plain-text `key = value` files with defaults."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

SCHEMES = ("ml_pdf", "dude", "cude", "gen_dude", "gen_cude", "fb", "baum_welch")
MODES = ("synthetic", "flowspace")
ENCODINGS = ("odd", "index")

PAPER_SCALE_N = 3_000_000


@dataclass
class ExperimentConfig:
    mode: str = "synthetic"
    M: int = 2
    n: int = 100_000
    seed: int = 0
    stay_prob: float = 0.9
    encoding: str = "odd"
    channel: str = "auto"
    noise_stddev: float = 1.0
    quantizer: str = "auto-round"
    schemes: list[str] = field(default_factory=lambda: ["gen_cude", "dude", "ml_pdf", "fb"])
    k: list[int] = field(default_factory=lambda: [2, 4])
    hidden: list[int] = field(default_factory=lambda: [200] * 6)
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    batch_size: int = 256
    epochs: int = 10
    standardize: bool = False
    bw_max_iters: int = 50
    bw_tol: float = 1e-4
    csv: str = "results.csv"
    wash_cycle: str = "TACG"
    max_homopolymer: int = 9
    dna: str = ""


_REQUIRED = ("mode", "M", "n", "seed")

_INT_KEYS = {"M", "n", "seed", "batch_size", "epochs", "bw_max_iters", "max_homopolymer"}
_FLOAT_KEYS = {"stay_prob", "noise_stddev", "learning_rate", "beta1", "beta2", "adam_epsilon", "bw_tol"}
_BOOL_KEYS = {"standardize"}
_INT_LIST_KEYS = {"k", "hidden"}
_STR_LIST_KEYS = {"schemes"}
_STR_KEYS = {"mode", "encoding", "channel", "quantizer", "csv", "wash_cycle", "dna"}

_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _INT_LIST_KEYS | _STR_LIST_KEYS | _STR_KEYS

# Defaults that depend on the mode; applied only when the key is absent.
_MODE_DEFAULTS = {
    "synthetic": {
        "encoding": "odd",
        "noise_stddev": 1.0,
        "schemes": ["gen_cude", "dude", "ml_pdf", "fb"],
        "hidden": [200] * 6,
    },
    "flowspace": {
        "encoding": "index",
        "noise_stddev": 0.35,
        "schemes": ["gen_cude", "dude", "ml_pdf", "baum_welch"],
        "hidden": [500] * 7,
    },
}


def _parse_value(key: str, raw: str, lineno: int):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            low = raw.lower()
            if low in ("true", "yes", "1"):
                return True
            if low in ("false", "no", "0"):
                return False
            raise ValueError(f"expected a boolean, got {raw!r}")
        if key in _INT_LIST_KEYS:
            return [int(tok.strip()) for tok in raw.split(",") if tok.strip()]
        if key in _STR_LIST_KEYS:
            return [tok.strip() for tok in raw.split(",") if tok.strip()]
        return raw
    except ValueError as e:
        raise ConfigError(f"bad value for {key}: {e}", lineno) from None


def parse_config(path) -> ExperimentConfig:
    """Parse and validate a config file; unset keys get documented defaults."""
    path = Path(path)
    seen: dict[str, object] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected `key = value`, got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        seen[key] = _parse_value(key, value, lineno)

    for key in _REQUIRED:
        if key not in seen:
            raise ConfigError(f"missing required key {key!r}")

    mode = seen["mode"]
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    for key, default in _MODE_DEFAULTS[mode].items():
        seen.setdefault(key, default)

    cfg = ExperimentConfig(**seen)
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {cfg.mode!r}")
    if cfg.M < 2:
        raise ConfigError(f"M must be >= 2, got {cfg.M}")
    if cfg.n < 1:
        raise ConfigError(f"n must be >= 1, got {cfg.n}")
    if not 0.0 < cfg.stay_prob < 1.0:
        raise ConfigError(f"stay_prob must be in (0, 1), got {cfg.stay_prob}")
    if cfg.encoding not in ENCODINGS:
        raise ConfigError(f"encoding must be one of {ENCODINGS}, got {cfg.encoding!r}")
    if not cfg.schemes:
        raise ConfigError("schemes list must be nonempty")
    for s in cfg.schemes:
        if s not in SCHEMES:
            raise ConfigError(f"unknown scheme {s!r}; valid: {', '.join(SCHEMES)}")
    if not cfg.k:
        raise ConfigError("k list must be nonempty")
    if any(kk < 0 for kk in cfg.k):
        raise ConfigError("window sizes must be >= 0")
    if not cfg.noise_stddev > 0:
        raise ConfigError(f"noise_stddev must be positive, got {cfg.noise_stddev}")
    if not cfg.learning_rate > 0:
        raise ConfigError("learning_rate must be positive")
    if cfg.batch_size < 1 or cfg.epochs < 0:
        raise ConfigError("batch_size must be >= 1 and epochs >= 0")
    if cfg.mode == "flowspace" and not cfg.wash_cycle:
        raise ConfigError("flowspace mode requires a wash_cycle")
    if cfg.max_homopolymer < 1:
        raise ConfigError("max_homopolymer must be >= 1")
    # Paths are working-directory relative unless absolute.
    for key in ("channel", "quantizer", "dna"):
        value = getattr(cfg, key)
        if key == "channel" and value == "auto":
            continue
        if key == "quantizer" and value == "auto-round":
            continue
        if key == "dna" and not value:
            continue
        if not Path(value).exists():
            raise ConfigError(f"{key} file does not exist: {value}")


def serialize_config(cfg: ExperimentConfig) -> str:
    """Inverse of parse_config: emits every field as a `key = value` line."""
    lines = []
    for key in (
        "mode", "M", "n", "seed", "stay_prob", "encoding", "channel",
        "noise_stddev", "quantizer", "schemes", "k", "hidden", "learning_rate",
        "beta1", "beta2", "adam_epsilon", "batch_size", "epochs", "standardize",
        "bw_max_iters", "bw_tol", "csv", "wash_cycle", "max_homopolymer", "dna",
    ):
        value = getattr(cfg, key)
        if isinstance(value, list):
            value = ", ".join(str(v) for v in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def planned_cells(cfg: ExperimentConfig) -> list[tuple[str, int | None]]:
    """One cell per (scheme, k); ml_pdf ignores the window and runs once."""
    cells: list[tuple[str, int | None]] = []
    for scheme in cfg.schemes:
        if scheme == "ml_pdf":
            cells.append((scheme, None))
        else:
            cells.extend((scheme, kk) for kk in cfg.k)
    return cells
