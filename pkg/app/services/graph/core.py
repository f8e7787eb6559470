"""Simple-graph representation shared by every other service.

Nodes are dense integer ids 0..N-1. Adjacency is held as scipy CSR matrices
with sorted column indices, so a row slice is the sorted neighbor array of a
node. Graphs are immutable after construction and safe to share across threads.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from app.exceptions import EmptyGraphError

logger = logging.getLogger(__name__)


def label_sort_key(label: str) -> tuple[int, int | str]:
    """Integers order numerically and before any non-integer label."""
    try:
        return (0, int(label))
    except ValueError:
        return (1, label)


@dataclass(frozen=True)
class GraphLabelTable:
    """Bijection between external node labels and internal dense ids."""

    labels: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {label: i for i, label in enumerate(self.labels)}
        if len(index) != len(self.labels):
            raise ValueError("Node labels must be unique")
        object.__setattr__(self, "_index", index)

    @classmethod
    def identity(cls, n: int) -> "GraphLabelTable":
        return cls(tuple(str(i) for i in range(n)))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def id_of(self, label: str) -> int:
        return self._index[label]

    def label_of(self, node: int) -> str:
        return self.labels[node]

    def subset(self, node_ids: np.ndarray) -> "GraphLabelTable":
        return GraphLabelTable(tuple(self.labels[int(i)] for i in node_ids))


def _csr(n: int, rows: np.ndarray, cols: np.ndarray) -> sparse.csr_matrix:
    data = np.ones(len(rows), dtype=np.int32)
    matrix = sparse.csr_matrix((data, (rows, cols)), shape=(n, n), dtype=np.int32)
    matrix.sum_duplicates()
    return matrix


class Graph:
    """Simple directed or undirected graph.

    Invariants enforced at construction:
    - no self-loops, no duplicate edges
    - undirected: j in a_i <=> i in a_j
    - directed: j in s_i <=> i in p_j
    - at least one node
    """

    __slots__ = ("directed", "labels", "metadata", "_n", "_edges", "_succ", "_pred")

    def __init__(
        self,
        n: int,
        edges: np.ndarray,
        directed: bool,
        labels: GraphLabelTable,
        metadata: dict,
        succ: sparse.csr_matrix,
        pred: sparse.csr_matrix,
    ) -> None:
        self._n = n
        self._edges = edges
        self.directed = directed
        self.labels = labels
        self.metadata = metadata
        self._succ = succ
        self._pred = pred

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: np.ndarray | list[tuple[int, int]],
        directed: bool = False,
        labels: GraphLabelTable | None = None,
        metadata: dict | None = None,
    ) -> "Graph":
        """Build a simple graph from (u, v) id pairs.

        Self-loops are dropped and duplicate edges collapsed (for undirected
        graphs (u, v) and (v, u) are the same edge). Both counts are recorded
        in metadata.
        """
        if n < 1:
            raise EmptyGraphError("A graph needs at least one node")
        if labels is None:
            labels = GraphLabelTable.identity(n)
        if len(labels) != n:
            raise ValueError(f"Label table has {len(labels)} labels for {n} nodes")

        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"Edge endpoints must be node ids in [0, {n})")

        loops = arr[:, 0] == arr[:, 1]
        self_loops = int(loops.sum())
        arr = arr[~loops]
        if not directed:
            arr = np.sort(arr, axis=1)
        unique = np.unique(arr, axis=0) if len(arr) else np.empty((0, 2), dtype=np.int64)
        unique.flags.writeable = False

        meta = dict(metadata or {})
        meta.setdefault("self_loops_dropped", self_loops)
        meta.setdefault("duplicates_collapsed", len(arr) - len(unique))

        u, v = unique[:, 0], unique[:, 1]
        if directed:
            succ = _csr(n, u, v)
            pred = _csr(n, v, u)
        else:
            succ = _csr(n, np.concatenate([u, v]), np.concatenate([v, u]))
            pred = succ
        return cls(n, unique, directed, labels, meta, succ, pred)

    # ---------- size ----------

    @property
    def n(self) -> int:
        return self._n

    @property
    def number_of_edges(self) -> int:
        return len(self._edges)

    def edges(self) -> np.ndarray:
        """Canonical (m, 2) edge array, lexicographically sorted; u < v when undirected."""
        return self._edges

    # ---------- adjacency ----------

    def adjacency(self) -> sparse.csr_matrix:
        """Row i holds the successors of i (the neighbors of i when undirected)."""
        return self._succ

    def predecessor_adjacency(self) -> sparse.csr_matrix:
        """Row i holds the predecessors of i (same matrix as adjacency() when undirected)."""
        return self._pred

    def neighbors(self, node: int) -> np.ndarray:
        """Sorted open neighborhood a_i of an undirected graph."""
        if self.directed:
            raise ValueError("neighbors() is undefined on a directed graph; use successors/predecessors")
        return self._row(self._succ, node)

    def successors(self, node: int) -> np.ndarray:
        return self._row(self._succ, node)

    def predecessors(self, node: int) -> np.ndarray:
        return self._row(self._pred, node)

    def out_degrees(self) -> np.ndarray:
        return np.diff(self._succ.indptr)

    def in_degrees(self) -> np.ndarray:
        return np.diff(self._pred.indptr)

    def degrees(self) -> np.ndarray:
        """Neighborhood sizes; in + out degree for directed graphs."""
        if self.directed:
            return self.out_degrees() + self.in_degrees()
        return self.out_degrees()

    def _row(self, matrix: sparse.csr_matrix, node: int) -> np.ndarray:
        if not 0 <= node < self._n:
            raise IndexError(f"Node id {node} out of range [0, {self._n})")
        return matrix.indices[matrix.indptr[node] : matrix.indptr[node + 1]]

    # ---------- derived graphs ----------

    def subgraph(self, node_ids: np.ndarray | list[int]) -> "Graph":
        """Induced subgraph on node_ids, re-densified in ascending id order."""
        keep = np.unique(np.asarray(node_ids, dtype=np.int64))
        if keep.size == 0:
            raise EmptyGraphError("Cannot take a subgraph on zero nodes")
        remap = np.full(self._n, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.size)
        mapped = remap[self._edges] if len(self._edges) else np.empty((0, 2), dtype=np.int64)
        mapped = mapped[(mapped >= 0).all(axis=1)]
        return Graph.from_edges(
            keep.size,
            mapped,
            directed=self.directed,
            labels=self.labels.subset(keep),
            metadata={"parent_nodes": self._n},
        )

    def weak_component_labels(self) -> tuple[int, np.ndarray]:
        """Component count and per-node component index, ignoring edge direction."""
        return connected_components(self._succ, directed=self.directed, connection="weak")

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, n={self._n}, m={self.number_of_edges})"


def density(g: Graph) -> float:
    """Edge density: 2|E|/(N(N-1)) undirected, |E|/(N(N-1)) directed."""
    if g.n < 2:
        raise ValueError(f"Density needs at least 2 nodes, graph has {g.n}")
    pairs = g.n * (g.n - 1)
    if g.directed:
        return g.number_of_edges / pairs
    return 2 * g.number_of_edges / pairs


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest (weakly) connected component.

    Ties between equal-size components go to the component holding the
    smallest original label (integers compared numerically).
    """
    count, membership = g.weak_component_labels()
    if count == 1:
        return g

    sizes = np.bincount(membership, minlength=count)
    largest = sizes.max()
    best: dict[int, tuple[int, int | str]] = {}
    for node in np.flatnonzero(sizes[membership] == largest):
        comp = int(membership[node])
        key = label_sort_key(g.labels.label_of(int(node)))
        if comp not in best or key < best[comp]:
            best[comp] = key
    winner = min(best, key=best.__getitem__)

    lcc = g.subgraph(np.flatnonzero(membership == winner))
    logger.info(
        "Largest component: %d of %d nodes (%d components)", lcc.n, g.n, count,
    )
    return lcc
