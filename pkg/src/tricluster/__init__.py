"""Triclustering of temporal interaction data.

Jointly partitions source vertices, destination vertices and time into a
piecewise-stationary block model by exact minimization of a parameter-free
MAP criterion, with agglomerative coarsening and mutual-information
analysis of the result.
"""

from .edges import (
    EdgeListError,
    ParseError,
    TemporalEdgeList,
    ingest_edges,
    rank_transform,
)
from .model import (
    CoverageError,
    ModelError,
    Triclustering,
    compute_counts,
    merge_clusters,
    null_model,
    time_partition_from_marginals,
)
from .combinatorics import CombinatoricsCache, shared_cache
from .criterion import (
    Cost,
    NoStructureWarning,
    cost,
    informativity,
    merge_delta,
    null_cost,
)
from .search import (
    SearchConfig,
    greedy_merge,
    initial_solution,
    refine_reassign,
    vns_fit,
)
from .coarsen import MergeHierarchy, MergeRecord, agglomerate, posterior_ratio
from .analysis import (
    ClusterDistributions,
    asymptotic_dissimilarity_check,
    cluster_distributions,
    js_divergence,
    kl_divergence,
    mi_pair_time,
    mi_source_dest,
    to_bits,
)
from .synthgen import (
    GeneratorConfig,
    erdos_renyi_temporal,
    generate,
    reallocate,
    recovery_score,
    sample_from_model,
    shuffle_time,
    theta,
)

__version__ = "0.1.0"

__all__ = [
    "EdgeListError", "ParseError", "TemporalEdgeList", "ingest_edges",
    "rank_transform",
    "CoverageError", "ModelError", "Triclustering", "compute_counts",
    "merge_clusters", "null_model", "time_partition_from_marginals",
    "CombinatoricsCache", "shared_cache",
    "Cost", "NoStructureWarning", "cost", "informativity", "merge_delta",
    "null_cost",
    "SearchConfig", "greedy_merge", "initial_solution", "refine_reassign",
    "vns_fit",
    "MergeHierarchy", "MergeRecord", "agglomerate", "posterior_ratio",
    "ClusterDistributions", "asymptotic_dissimilarity_check",
    "cluster_distributions", "js_divergence", "kl_divergence",
    "mi_pair_time", "mi_source_dest", "to_bits",
    "GeneratorConfig", "erdos_renyi_temporal", "generate", "reallocate",
    "recovery_score", "sample_from_model", "shuffle_time", "theta",
]
