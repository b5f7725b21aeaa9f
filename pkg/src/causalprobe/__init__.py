"""Discriminating causal hypotheses of reversible processes, classically and quantumly."""

__version__ = "0.1.0"

from .combinat import GroupPartition, group_partitions, invariant_subspace_dim, multiplicity
from .discrimination import (
    DiscriminationResult,
    classical_optimum,
    helstrom_error,
    monte_carlo_classical,
    srm_error,
)
from .formulas import (
    cause_id,
    decay_rate_closed,
    decay_rate_fit,
    fidelity_divergence_estimate,
    indefinite_lower_bound,
    p_classical,
    p_coherent,
    p_multi_k,
    p_reference,
    p_reference_asymptotic,
    p_singlet,
    seq_lower_bound,
)
from .quantum import Channel, HypothesisSpec, MultiState, Rng, hypothesis_channel
from .strategies import (
    ClassicalProbe,
    CoherentProbe,
    ReferenceProbe,
    SingletProbe,
    output_pair,
    output_state,
)
