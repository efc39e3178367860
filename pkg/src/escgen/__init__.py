"""Exact sampling and cluster-count laws for Exchangeable Sequence of Clusters models."""

from escgen.distributions import ClusterSizeSpec, mean, pmf_prefix, zeta
from escgen.errors import CapabilityError, ESCError, SamplerExhausted, UnreachableError
from escgen.kdist import (
    CompositionTable,
    KDistribution,
    composition_table,
    k_distribution,
    k_distribution_closed,
)
from escgen.renewal import (
    RenewalTable,
    prob_en_closed,
    prob_en_exact,
    renewal_limit,
    renewal_table,
)
from escgen.samplers import (
    Partition,
    SamplerTables,
    assemble_partition,
    make_rng,
    prepare,
    sample_sizes,
    sample_sizes_naive,
)

__all__ = [
    "CapabilityError",
    "ClusterSizeSpec",
    "CompositionTable",
    "ESCError",
    "KDistribution",
    "Partition",
    "RenewalTable",
    "SamplerExhausted",
    "SamplerTables",
    "UnreachableError",
    "assemble_partition",
    "composition_table",
    "k_distribution",
    "k_distribution_closed",
    "make_rng",
    "mean",
    "pmf_prefix",
    "prepare",
    "prob_en_closed",
    "prob_en_exact",
    "renewal_limit",
    "renewal_table",
    "sample_sizes",
    "sample_sizes_naive",
    "zeta",
]
