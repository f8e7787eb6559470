"""All-pairs Jaccard distances over open neighborhoods.

Undirected:  ζ_ij = 1 - |a_i ∩ a_j| / |a_i ∪ a_j|
Directed:    ζ_ij = 1 - (|p_i ∩ p_j| + |s_i ∩ s_j|) / (|p_i ∪ p_j| + |s_i ∪ s_j|)

When the denominator is 0 (both nodes have empty neighborhoods) the distance
is 0. The all-pairs kernel gets every intersection count of a row block from
one adjacency product (A[rows] @ A.T, plus the predecessor product when
directed): sparse CSR products for sparse graphs, dense float32 BLAS products
above settings.dense_threshold. Counts are exact integers either way, so the
output is bit-identical to the per-pair functions and independent of the
thread count.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import sparse

from app.config import settings
from app.services.distances.sample import DistanceSample
from app.services.graph.core import Graph, density

logger = logging.getLogger(__name__)


def _ratio_distance(intersection: int, union: int) -> float:
    if union == 0:
        return 0.0
    return 1.0 - intersection / union


def _check_pair(g: Graph, i: int, j: int) -> None:
    if i == j:
        raise ValueError(f"Jaccard distance of node {i} with itself is excluded (hollow matrix)")
    for node in (i, j):
        if not 0 <= node < g.n:
            raise IndexError(f"Node id {node} out of range [0, {g.n})")


def _overlap(a: np.ndarray, b: np.ndarray) -> tuple[int, int]:
    """(|a ∩ b|, |a ∪ b|) of two sorted unique id arrays."""
    inter = np.intersect1d(a, b, assume_unique=True).size
    return inter, a.size + b.size - inter


def jaccard_distance_undirected(g: Graph, i: int, j: int) -> float:
    if g.directed:
        raise ValueError("jaccard_distance_undirected needs an undirected graph")
    _check_pair(g, i, j)
    inter, union = _overlap(g.neighbors(i), g.neighbors(j))
    return _ratio_distance(inter, union)


def jaccard_distance_directed(g: Graph, i: int, j: int) -> float:
    if not g.directed:
        raise ValueError("jaccard_distance_directed needs a directed graph")
    _check_pair(g, i, j)
    p_inter, p_union = _overlap(g.predecessors(i), g.predecessors(j))
    s_inter, s_union = _overlap(g.successors(i), g.successors(j))
    return _ratio_distance(p_inter + s_inter, p_union + s_union)


def jaccard_distance(g: Graph, i: int, j: int) -> float:
    if g.directed:
        return jaccard_distance_directed(g, i, j)
    return jaccard_distance_undirected(g, i, j)


class JaccardKernel:
    """Row-block distance evaluator over a fixed graph."""

    def __init__(self, g: Graph, dense_threshold: float | None = None) -> None:
        threshold = settings.dense_threshold if dense_threshold is None else dense_threshold
        self.n = g.n
        self.dense = g.n >= 2 and density(g) > threshold

        mats = [g.adjacency()]
        if g.directed:
            mats.append(g.predecessor_adjacency())
        if self.dense:
            self._factors = [(m.toarray().astype(np.float32),) * 2 for m in mats]
        else:
            self._factors = [(m.tocsr(), m.T.tocsr()) for m in mats]
        self._sizes = g.degrees().astype(np.float64)

    def intersections(self, lo: int, hi: int) -> np.ndarray:
        """|neighborhood(i) ∩ neighborhood(j)| for i in [lo, hi) and all j."""
        inter = np.zeros((hi - lo, self.n), dtype=np.float64)
        for left, right in self._factors:
            if self.dense:
                inter += left[lo:hi] @ right.T
            else:
                block = left[lo:hi] @ right
                inter += block.toarray() if sparse.issparse(block) else block
        return inter

    def block(self, lo: int, hi: int) -> np.ndarray:
        """Distances from every node in [lo, hi) to every node."""
        inter = self.intersections(lo, hi)
        union = self._sizes[lo:hi, None] + self._sizes[None, :] - inter
        similarity = np.ones_like(inter)
        np.divide(inter, union, out=similarity, where=union > 0)
        return 1.0 - similarity


def _row_offset(i: int, n: int) -> int:
    """Start of row i's pairs (i, i+1..n-1) in the flattened upper triangle."""
    return i * n - i * (i + 1) // 2


def _blocks(n: int, block_rows: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + block_rows, n)) for lo in range(0, n, block_rows)]


def all_pairs_distances(g: Graph, threads: int | None = None, block_rows: int | None = None) -> DistanceSample:
    """Sorted distances over all N(N-1)/2 unordered pairs."""
    n = g.n
    if n < 2:
        raise ValueError(f"All-pairs distances need at least 2 nodes, graph has {n}")
    workers = max(1, threads or settings.threads)
    block_rows = block_rows or settings.row_block

    kernel = JaccardKernel(g)
    out = np.empty(DistanceSample.expected_count(n), dtype=np.float64)

    def fill(bounds: tuple[int, int]) -> None:
        lo, hi = bounds
        dist = kernel.block(lo, hi)
        for r, i in enumerate(range(lo, hi)):
            start = _row_offset(i, n)
            out[start : start + n - 1 - i] = dist[r, i + 1 :]

    t0 = time.perf_counter()
    blocks = _blocks(n, block_rows)
    if workers == 1:
        for bounds in blocks:
            fill(bounds)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, blocks))
    out.sort()
    out.flags.writeable = False

    logger.info(
        "All-pairs distances: %d pairs (%s, %s path, %d threads) in %.2fs",
        out.size, "directed" if g.directed else "undirected",
        "dense" if kernel.dense else "sparse", workers, time.perf_counter() - t0,
    )
    source = {
        "nodes": n,
        "edges": g.number_of_edges,
        "spec": g.metadata.get("spec"),
        "path": g.metadata.get("source"),
    }
    return DistanceSample(out, directed=g.directed, source=source)


def distance_matrix(g: Graph, threads: int | None = None, block_rows: int | None = None) -> np.ndarray:
    """Full hollow, symmetric N x N matrix Z of pairwise distances."""
    workers = max(1, threads or settings.threads)
    kernel = JaccardKernel(g)
    z = np.empty((g.n, g.n), dtype=np.float64)

    def fill(bounds: tuple[int, int]) -> None:
        lo, hi = bounds
        z[lo:hi] = kernel.block(lo, hi)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(fill, _blocks(g.n, block_rows or settings.row_block)))
    np.fill_diagonal(z, 0.0)
    return z
