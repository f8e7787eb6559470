"""Edge-list ingestion and export (SNAP text format).

One edge per line, two whitespace-separated labels, '#' lines are comments.
A SNAP header comment "# Nodes: N ..." is honoured when every label is an
integer in [0, N): the missing integers are added as isolated nodes, so graphs
written by write_edge_list round-trip with their isolated nodes.
"""

import logging
import re
from pathlib import Path

import numpy as np

from app.exceptions import EdgeListParseError, EmptyGraphError
from app.services.graph.core import Graph, GraphLabelTable, label_sort_key

logger = logging.getLogger(__name__)

_NODES_HEADER = re.compile(r"Nodes:\s*(\d+)")


def load_edge_list(path: str | Path, directed: bool) -> Graph:
    """Parse an edge-list file into a simple Graph.

    Duplicate edges collapse (including reversed pairs when undirected),
    self-loops are dropped; both counts land in graph.metadata. Integer labels
    are assigned dense ids in numeric order, other labels in order of first
    appearance.

    Raises:
        EdgeListParseError: a non-comment line does not hold exactly two tokens.
        EmptyGraphError: the file defines no nodes.
    """
    path = Path(path)
    declared_nodes: int | None = None
    pairs: list[tuple[str, str]] = []

    with path.open("r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                match = _NODES_HEADER.search(stripped)
                if match and declared_nodes is None:
                    declared_nodes = int(match.group(1))
                continue
            tokens = stripped.split()
            if len(tokens) != 2:
                raise EdgeListParseError(str(path), line_number, line)
            pairs.append((tokens[0], tokens[1]))

    labels = _label_table(pairs, declared_nodes)
    if len(labels) == 0:
        raise EmptyGraphError(f"{path}: no nodes found")

    index = labels.id_of
    edges = np.array([(index(a), index(b)) for a, b in pairs], dtype=np.int64).reshape(-1, 2)
    g = Graph.from_edges(
        len(labels), edges, directed=directed, labels=labels, metadata={"source": str(path)},
    )
    logger.info(
        "Loaded %s: %d nodes, %d edges (%s), %d self-loops dropped, %d duplicates collapsed",
        path.name, g.n, g.number_of_edges, "directed" if directed else "undirected",
        g.metadata["self_loops_dropped"], g.metadata["duplicates_collapsed"],
    )
    return g


def _label_table(pairs: list[tuple[str, str]], declared_nodes: int | None) -> GraphLabelTable:
    seen: dict[str, None] = {}
    for a, b in pairs:
        seen.setdefault(a)
        seen.setdefault(b)
    labels = list(seen)

    keys = [label_sort_key(label) for label in labels]
    # "07" and "7" are distinct labels; only canonical integers get numeric ids
    if all(kind == 0 and str(value) == label for label, (kind, value) in zip(labels, keys)):
        values = sorted(int(label) for label in labels)
        if declared_nodes is not None and (not values or (values[0] >= 0 and values[-1] < declared_nodes)):
            values = list(range(declared_nodes))
        labels = [str(v) for v in values]
    return GraphLabelTable(tuple(labels))


def write_edge_list(g: Graph, path: str | Path) -> Path:
    """Write g in the edge-list format, one edge per line, by label."""
    path = Path(path)
    label = g.labels.label_of
    lines = [f"# Nodes: {g.n} Edges: {g.number_of_edges}"]
    lines.extend(f"{label(int(u))} {label(int(v))}" for u, v in g.edges())
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Wrote %d edges to %s", g.number_of_edges, path)
    return path
