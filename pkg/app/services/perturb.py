"""Structural perturbation: uniform random removal of nodes or edges.

Every graph in a sensitivity run is compared to a copy of itself with a
percentage of randomly chosen nodes (plus incident edges) or edges removed.
Removal is seed-deterministic and independent of the generation seed.
"""

import logging
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.services.graph.core import Graph

logger = logging.getLogger(__name__)

# Removal percentages of the sensitivity tables
DEFAULT_FRACTIONS = (0.0, 0.005, 0.01, 0.05, 0.10, 0.25)


class PerturbationSpec(BaseModel):
    """Which elements to remove, how many (as a fraction) and the RNG seed."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["node", "edge"]
    fraction: float = Field(..., ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, lt=2**64)


def removal_count(fraction: float, total: int) -> int:
    """round(fraction * total), halves rounded up."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"Removal fraction must be in [0, 1], got {fraction}")
    return min(int(math.floor(fraction * total + 0.5)), total)


def _rng(spec: PerturbationSpec) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(spec.seed))


def remove_nodes(g: Graph, spec: PerturbationSpec) -> Graph:
    if spec.kind != "node":
        raise ValueError(f"remove_nodes needs a node perturbation, got kind={spec.kind}")
    k = removal_count(spec.fraction, g.n)
    if k == g.n:
        raise ValueError(f"Removing {k} of {g.n} nodes would leave an empty graph")
    if k == 0:
        return g

    dropped = _rng(spec).choice(g.n, size=k, replace=False)
    keep = np.setdiff1d(np.arange(g.n), dropped, assume_unique=True)
    result = g.subgraph(keep)
    result.metadata.update(perturbation=spec.model_dump(), removed=k)
    logger.debug("Removed %d of %d nodes (seed=%d)", k, g.n, spec.seed)
    return result


def remove_edges(g: Graph, spec: PerturbationSpec) -> Graph:
    """Drop round(fraction·|E|) edges; the node set is unchanged and isolated nodes stay."""
    if spec.kind != "edge":
        raise ValueError(f"remove_edges needs an edge perturbation, got kind={spec.kind}")
    m = g.number_of_edges
    k = removal_count(spec.fraction, m)
    if k == 0:
        return g

    edges = g.edges()
    dropped = _rng(spec).choice(m, size=k, replace=False)
    mask = np.ones(m, dtype=bool)
    mask[dropped] = False

    metadata = {"perturbation": spec.model_dump(), "removed": k, "all_edges_removed": k == m}
    if k == m:
        logger.warning("Perturbation removed all %d edges of %r", m, g)
    return Graph.from_edges(g.n, edges[mask], directed=g.directed, labels=g.labels, metadata=metadata)


def perturb(g: Graph, spec: PerturbationSpec) -> Graph:
    if spec.kind == "node":
        return remove_nodes(g, spec)
    return remove_edges(g, spec)
