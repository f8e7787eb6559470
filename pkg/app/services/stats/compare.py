"""Graph-level comparisons built on the K-S distance of Jaccard samples.

Covers the uses the distance is meant for: comparing two graphs, ranking a
graph against references ("is G3 more like G1 or G2?") and screening a
sequence of snapshots for change points.
"""

import logging
from collections.abc import Mapping, Sequence

import pandas as pd

from app.services.distances.jaccard import all_pairs_distances
from app.services.distances.sample import DistanceSample
from app.services.graph.core import Graph
from app.services.stats.ks import KsResult, ks_distance

logger = logging.getLogger(__name__)

# Consecutive-snapshot distances above this are flagged as candidate change points
DEFAULT_DRIFT_THRESHOLD = 0.01


def compare_graphs(g1: Graph, g2: Graph, threads: int | None = None) -> KsResult:
    return ks_distance(all_pairs_distances(g1, threads), all_pairs_distances(g2, threads))


def _samples(graphs: Mapping[str, Graph], threads: int | None) -> dict[str, DistanceSample]:
    return {name: all_pairs_distances(g, threads) for name, g in graphs.items()}


def pairwise_distance_table(graphs: Mapping[str, Graph], threads: int | None = None) -> pd.DataFrame:
    """Symmetric table of K-S distances between every pair of named graphs."""
    samples = _samples(graphs, threads)
    names = list(samples)
    table = pd.DataFrame(0.0, index=names, columns=names)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            d = ks_distance(samples[a], samples[b]).d_statistic
            table.loc[a, b] = table.loc[b, a] = d
    return table


def closest_graph(
    target: Graph,
    references: Mapping[str, Graph],
    threads: int | None = None,
) -> tuple[str, KsResult]:
    """Reference graph with the smallest K-S distance to target (first wins ties)."""
    if not references:
        raise ValueError("closest_graph needs at least one reference graph")
    target_sample = all_pairs_distances(target, threads)
    results = {
        name: ks_distance(target_sample, sample)
        for name, sample in _samples(references, threads).items()
    }
    best = min(results, key=lambda name: results[name].d_statistic)
    return best, results[best]


def snapshot_drift(
    snapshots: Sequence[tuple[str, Graph]],
    threshold: float = DEFAULT_DRIFT_THRESHOLD,
    threads: int | None = None,
) -> pd.DataFrame:
    """K-S distance between each snapshot and the one before it."""
    if len(snapshots) < 2:
        raise ValueError("Drift needs at least two snapshots")
    samples = [(name, all_pairs_distances(g, threads)) for name, g in snapshots]
    rows = []
    for step, ((prev_name, prev), (name, cur)) in enumerate(zip(samples, samples[1:]), start=1):
        result = ks_distance(prev, cur)
        flagged = result.d_statistic > threshold
        if flagged:
            logger.warning("Snapshot %s differs from %s: D=%.4f", name, prev_name, result.d_statistic)
        rows.append({
            "step": step,
            "from": prev_name,
            "to": name,
            "d_statistic": result.d_statistic,
            "p_value": result.p_value,
            "flagged": flagged,
        })
    return pd.DataFrame(rows)
