"""Universal denoising for finite-input, general-output noisy channels."""

from .channel import (
    ChannelModel,
    GaussianDensity,
    InducedDMC,
    KDEDensity,
    Quantizer,
    density_eval,
    density_values,
    gaussian_channel,
    induced_dmc,
    kde_estimate,
    load_channel,
    load_quantizer,
    quantize,
    quantize_all,
    sample_output,
    sample_outputs,
)
from .config import ExperimentConfig, parse_config, planned_cells, serialize_config
from .denoise import (
    baum_welch,
    bayes_response,
    cude_denoise,
    dude_counts,
    dude_denoise,
    fb_posteriors,
    fb_recursion,
    gen_cude_denoise,
    gen_cude_posterior,
    gen_dude_denoise,
    hamming_matrix,
    ml_pdf,
)
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
from .evaluation import (
    BoundInputs,
    DenoiseRun,
    alignment_similarity,
    epsilon_star,
    hamming_loss,
    normalized_error,
    run_experiment,
    theorem_bound,
)
from .neural import (
    ContextDataset,
    NetworkParams,
    TrainConfig,
    build_contexts,
    forward,
    loss_and_grad,
    train,
)
from .source import (
    corrupt,
    dna_to_flow,
    flow_to_dna,
    gen_markov_source,
    load_dna,
    load_sequence,
    odd_integer_encoding,
    save_sequence,
    transition_matrix,
)

__version__ = "0.1.0"
