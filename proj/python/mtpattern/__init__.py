"""Frequent visiting-behavior pattern mining over binary interval sequences.

The heavy lifting lives in the compiled ``_core`` module; this package just
re-exports it.
"""

from ._core import (
    Bis,
    ClusteringResult,
    DiscoverOutcome,
    DistanceMatrix,
    InputError,
    InvariantError,
    IntervalSequence,
    MinCoverResult,
    ModeSpec,
    OmegaCovering,
    Pattern,
    PlantedDataset,
    PointSequence,
    PreferenceMode,
    SegmentTree,
    SimilarityGraph,
    TdistValue,
    build_matrix,
    cluster,
    coverings,
    default_modes,
    discover,
    discretize,
    dtw,
    estimate_delta,
    euclidean,
    f_measure,
    generate,
    hc_baseline,
    kmeans_baseline,
    median_preference,
    min_cover_oracle,
    minimizing_preference,
    net_similarity,
    prune,
    purity,
    rand_index,
    sessionize,
    similarity_from_matrix,
    tdist,
)

__all__ = [
    "Bis",
    "ClusteringResult",
    "DiscoverOutcome",
    "DistanceMatrix",
    "InputError",
    "InvariantError",
    "IntervalSequence",
    "MinCoverResult",
    "ModeSpec",
    "OmegaCovering",
    "Pattern",
    "PlantedDataset",
    "PointSequence",
    "PreferenceMode",
    "SegmentTree",
    "SimilarityGraph",
    "TdistValue",
    "build_matrix",
    "cluster",
    "coverings",
    "default_modes",
    "discover",
    "discretize",
    "dtw",
    "estimate_delta",
    "euclidean",
    "f_measure",
    "generate",
    "hc_baseline",
    "kmeans_baseline",
    "median_preference",
    "min_cover_oracle",
    "minimizing_preference",
    "net_similarity",
    "prune",
    "purity",
    "rand_index",
    "sessionize",
    "similarity_from_matrix",
    "tdist",
]

__version__ = "0.1.0"
