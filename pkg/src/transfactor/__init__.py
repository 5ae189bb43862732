"""Transversal factors in randomly sparsified hypergraph systems.

Core objects: uniform hypergraphs and colored systems, small-pattern
analysis (densities, balance, expansions, copy complexes), exact
perfect-matching machinery with spread audits, random clustering with
redistribution, exact transversal-factor search at cluster scale, and a
Monte Carlo harness for threshold sweeps.
"""

from .bipartite import (
    BipartiteGraph,
    Matching,
    count_pms,
    sample_pms,
    uniform_pm_complete,
    uniform_pm_dense,
)
from .clustering import (
    BadClusterFamily,
    BipartitePartition,
    ClusterPartition,
    SystemClusterPlan,
    cluster_subsystem,
    degree_inheritance_check,
    location_spread_audit,
    sample_bipartite_clusters,
    sample_system_clusters,
)
from .errors import (
    CapacityError,
    NoPerfectMatchingError,
    ParameterError,
    PipelineFailureError,
)
from .gluing import GlueDiagnostics, pikhurko_glue
from .harness import (
    ExperimentConfig,
    ThresholdCurve,
    bound_calculators,
    end_to_end_robustness,
    parse_config,
    reference_scale_d1,
    reference_scale_m1,
    run_general_sweep_m1,
    run_threshold_sweep,
    serialize_config,
    wilson_interval,
)
from .hypergraph import (
    ColoredExpansionGraph,
    Hypergraph,
    HypergraphSystem,
    build_colored_expansion,
    decode_colored_expansion,
    format_hypergraph,
    format_system,
    min_d_degree,
    parse_hypergraph,
    parse_system,
    system_min_degree,
)
from .partite import PartiteHypergraph, partite_degree
from .patterns import (
    ExpandedPattern,
    FactorComplex,
    Pattern,
    automorphism_count,
    expand,
    f_complex,
    is_strictly_one_balanced,
    m_one,
    one_density,
    standard_patterns,
    verify_expansion_claims,
)
from .randmodels import (
    SparsifiedSystem,
    coupled_complex_sample,
    random_bipartite_with_degree_sum_floor,
    random_k_graph,
    random_system_with_degree_floor,
    sparsify,
    sparsify_system,
    thin_to_degree_floor,
)
from .rng import RngSpec
from .solver import (
    Embedding,
    FactorSampler,
    compose_global_embedding,
    count_transversal_factors,
    enumerate_factors,
    find_factor_in_expansion,
    find_transversal_factor,
    uniform_random_factor,
    validate_embedding,
)
from .spread import SpreadReport, spread_audit, vertex_spread_audit

__version__ = "0.1.0"

__all__ = [
    "BadClusterFamily",
    "BipartiteGraph",
    "BipartitePartition",
    "CapacityError",
    "ClusterPartition",
    "ColoredExpansionGraph",
    "Embedding",
    "ExpandedPattern",
    "ExperimentConfig",
    "FactorComplex",
    "FactorSampler",
    "GlueDiagnostics",
    "Hypergraph",
    "HypergraphSystem",
    "Matching",
    "NoPerfectMatchingError",
    "ParameterError",
    "PartiteHypergraph",
    "Pattern",
    "PipelineFailureError",
    "RngSpec",
    "SparsifiedSystem",
    "SpreadReport",
    "SystemClusterPlan",
    "ThresholdCurve",
    "automorphism_count",
    "bound_calculators",
    "build_colored_expansion",
    "cluster_subsystem",
    "compose_global_embedding",
    "count_pms",
    "count_transversal_factors",
    "coupled_complex_sample",
    "decode_colored_expansion",
    "degree_inheritance_check",
    "end_to_end_robustness",
    "enumerate_factors",
    "expand",
    "f_complex",
    "find_factor_in_expansion",
    "find_transversal_factor",
    "format_hypergraph",
    "format_system",
    "is_strictly_one_balanced",
    "location_spread_audit",
    "m_one",
    "min_d_degree",
    "one_density",
    "parse_config",
    "parse_hypergraph",
    "parse_system",
    "partite_degree",
    "pikhurko_glue",
    "random_bipartite_with_degree_sum_floor",
    "random_k_graph",
    "random_system_with_degree_floor",
    "reference_scale_d1",
    "reference_scale_m1",
    "run_general_sweep_m1",
    "run_threshold_sweep",
    "sample_bipartite_clusters",
    "sample_pms",
    "sample_system_clusters",
    "serialize_config",
    "sparsify",
    "sparsify_system",
    "spread_audit",
    "standard_patterns",
    "system_min_degree",
    "thin_to_degree_floor",
    "uniform_pm_complete",
    "uniform_pm_dense",
    "uniform_random_factor",
    "validate_embedding",
    "verify_expansion_claims",
    "vertex_spread_audit",
    "wilson_interval",
]
