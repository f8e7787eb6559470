"""Shared test fixtures."""

from pathlib import Path

import numpy as np
import pytest

from app.services.graph.core import Graph


@pytest.fixture
def triangle() -> Graph:
    """Undirected K3."""
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3() -> Graph:
    """Undirected path 0-1-2."""
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def k5() -> Graph:
    return Graph.from_edges(5, [(i, j) for i in range(5) for j in range(i + 1, 5)])


@pytest.fixture
def small_directed() -> Graph:
    """Edges 0->1, 0->2, 1->2."""
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)], directed=True)


@pytest.fixture
def write_edges(tmp_path: Path):
    """Write edge-list text to a temp file and return its path."""

    def _write(text: str, name: str = "graph.txt") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def make_random_graph(n: int, p: float, directed: bool, seed: int) -> Graph:
    """Small Bernoulli graph built without the generators, for oracle tests."""
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    if not directed:
        mask = np.triu(mask, 1)
    rows, cols = np.nonzero(mask)
    return Graph.from_edges(n, np.column_stack([rows, cols]), directed=directed)
