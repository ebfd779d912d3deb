"""Graph comparison via walk-neighborhood count profiles.

Builds per-vertex and graph-averaged profiles of walk-neighborhood sizes,
turns them into a correspondence-free graph distance, and ships a seeded
random-graph clustering experiment plus a brute-force cut-distance baseline.
"""

from .distance import (
    CUT_BRUTEFORCE_LIMIT,
    DistanceMatrix,
    DistanceOptions,
    cut_distance_bruteforce,
    cut_weight,
    distance_matrix,
    profile_distance,
    scalar_summary,
)
from .experiment import (
    ClusterSpec,
    ExperimentConfig,
    ExperimentResult,
    GraphRecord,
    cluster_accuracy,
    derive_seed,
    generate_population,
    kmeans_1d,
    run_experiment,
    write_experiment_outputs,
)
from .graph import (
    Graph,
    GraphDataError,
    generate_er_gnp,
    read_edge_list,
    write_edge_list,
)
from .profiles import (
    DEFAULT_DEPTH,
    GraphProfile,
    all_vertex_profiles,
    graph_profile,
    k_neighborhood,
    profile_sum,
    vertex_profile,
    walk_reachability_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "CUT_BRUTEFORCE_LIMIT",
    "ClusterSpec",
    "DEFAULT_DEPTH",
    "DistanceMatrix",
    "DistanceOptions",
    "ExperimentConfig",
    "ExperimentResult",
    "Graph",
    "GraphDataError",
    "GraphProfile",
    "GraphRecord",
    "all_vertex_profiles",
    "cluster_accuracy",
    "cut_distance_bruteforce",
    "cut_weight",
    "derive_seed",
    "distance_matrix",
    "generate_er_gnp",
    "generate_population",
    "graph_profile",
    "k_neighborhood",
    "kmeans_1d",
    "profile_distance",
    "profile_sum",
    "read_edge_list",
    "run_experiment",
    "scalar_summary",
    "vertex_profile",
    "walk_reachability_oracle",
    "write_edge_list",
    "write_experiment_outputs",
    "__version__",
]
