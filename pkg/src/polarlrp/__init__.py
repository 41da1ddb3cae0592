"""Exact likelihood-ratio-profile algebra for polar synthetic channels."""

from .algebra import (
    PatternIndex,
    arikan_general,
    arikan_symmetric,
    bec_f_alpha,
    delta_m,
    diamond,
    nabla_m,
    star,
    transform_by_pattern,
    transform_general_by_pattern,
)
from .channels import (
    BscMixture,
    ChannelError,
    Lrp,
    Metrics,
    TransitionMatrix,
    evaluate_metrics,
    lrp_from_matrix,
    make_b_ab,
    make_bec,
    make_bsc,
    make_mixture,
)
from .codec import build_generator, encode, monte_carlo_fer, sc_decode, simulate_channel
from .construction import (
    FrozenPlan,
    SynthesisTable,
    metrics_table,
    oracle_channel,
    select_frozen,
    synthesize_all,
)

__version__ = "0.1.0"
