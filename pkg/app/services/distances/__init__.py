"""Jaccard distance engine: per-pair distances, all-pairs samples, exports."""

from app.services.distances.jaccard import (
    JaccardKernel,
    all_pairs_distances,
    distance_matrix,
    jaccard_distance,
    jaccard_distance_directed,
    jaccard_distance_undirected,
)
from app.services.distances.sample import DistanceSample

__all__ = [
    "DistanceSample",
    "JaccardKernel",
    "all_pairs_distances",
    "distance_matrix",
    "jaccard_distance",
    "jaccard_distance_directed",
    "jaccard_distance_undirected",
]
