"""Seeded Erdős–Rényi and stochastic block model generators.

Randomness is drawn per adjacency row from SeedSequence([seed, row]), so the
edge set depends only on the spec, never on how rows are spread over threads.
"""

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from app.config import settings
from app.services.generators.specs import ErSpec, SbmSpec
from app.services.graph.core import Graph

logger = logging.getLogger(__name__)

# Below this edge probability ER rows are drawn by geometric skipping
SKIP_SAMPLING_MAX_P = 0.1

RowSampler = Callable[[int], np.ndarray]


def row_rng(seed: int, row: int) -> np.random.Generator:
    """Independent, counter-style stream for one adjacency row."""
    return np.random.default_rng(np.random.SeedSequence([seed, row]))


def _sweep_rows(n: int, sample_row: RowSampler, threads: int | None) -> np.ndarray:
    """Run sample_row over all rows and stack the edges in row order."""
    workers = max(1, min(threads or settings.threads, n))
    if workers == 1:
        parts = [sample_row(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(sample_row, range(n)))
    if not parts:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(parts)


def _skip_positions(rng: np.random.Generator, length: int, p: float) -> np.ndarray:
    """Indices in [0, length) that succeed with probability p, via geometric gaps."""
    found = []
    last = -1
    while True:
        batch = max(16, int(length * p * 1.2) + 16)
        candidates = last + np.cumsum(rng.geometric(p, size=batch))
        found.append(candidates[candidates < length])
        if candidates[-1] >= length:
            break
        last = int(candidates[-1])
    return np.concatenate(found)


def _bernoulli_positions(rng: np.random.Generator, probs: np.ndarray | float, length: int) -> np.ndarray:
    return np.flatnonzero(rng.random(length) < probs)


def _row_edges(i: int, n: int, positions: np.ndarray, directed: bool) -> np.ndarray:
    """Map candidate positions of row i to (i, j) edges."""
    if directed:
        cols = positions + (positions >= i)  # skip the diagonal
    else:
        cols = positions + i + 1  # upper triangle only
    return np.column_stack([np.full(cols.size, i, dtype=np.int64), cols.astype(np.int64)])


def generate_er(spec: ErSpec, threads: int | None = None) -> Graph:
    """G(n, p): every unordered (ordered, if directed) pair is an edge w.p. p.

    Uses geometric skip sampling below p=0.1, a dense Bernoulli sweep otherwise.
    """
    n, p, directed = spec.n, spec.p, spec.directed

    def sample_row(i: int) -> np.ndarray:
        length = n - 1 if directed else n - 1 - i
        if length <= 0 or p == 0.0:
            positions = np.empty(0, dtype=np.int64)
        elif p == 1.0:
            positions = np.arange(length)
        elif p < SKIP_SAMPLING_MAX_P:
            positions = _skip_positions(row_rng(spec.seed, i), length, p)
        else:
            positions = _bernoulli_positions(row_rng(spec.seed, i), p, length)
        return _row_edges(i, n, positions, directed)

    edges = _sweep_rows(n, sample_row, threads)
    g = Graph.from_edges(
        n, edges, directed=directed, metadata={"generator": "er", "spec": spec.model_dump()},
    )
    logger.info("Generated %s: n=%d, %d edges (seed=%d)", spec.label(), n, g.number_of_edges, spec.seed)
    return g


def block_membership(block_sizes: tuple[int, ...] | list[int]) -> np.ndarray:
    """Block index of every node; blocks occupy consecutive id ranges."""
    return np.repeat(np.arange(len(block_sizes)), block_sizes)


def generate_sbm(spec: SbmSpec, threads: int | None = None) -> Graph:
    """Planted partition: within-block pairs w.p. p_in, between-block w.p. p_out."""
    n, directed = spec.n, spec.directed
    blocks = block_membership(spec.block_sizes)

    def sample_row(i: int) -> np.ndarray:
        cols = np.arange(n) if directed else np.arange(i + 1, n)
        if directed:
            cols = cols[cols != i]
        if cols.size == 0:
            return np.empty((0, 2), dtype=np.int64)
        probs = np.where(blocks[cols] == blocks[i], spec.p_in, spec.p_out)
        hits = cols[row_rng(spec.seed, i).random(cols.size) < probs]
        return np.column_stack([np.full(hits.size, i, dtype=np.int64), hits])

    edges = _sweep_rows(n, sample_row, threads)
    g = Graph.from_edges(
        n,
        edges,
        directed=directed,
        metadata={
            "generator": "sbm",
            "spec": spec.model_dump(),
            "blocks": list(spec.block_sizes),
        },
    )
    logger.info(
        "Generated %s: n=%d, %d blocks, %d edges (seed=%d)",
        spec.label(), n, len(spec.block_sizes), g.number_of_edges, spec.seed,
    )
    return g


def expected_sbm_density(block_sizes: tuple[int, ...] | list[int], p_in: float, p_out: float) -> float:
    """Expected density: p_in over within-block pairs plus p_out over between-block pairs."""
    n = sum(block_sizes)
    total_pairs = n * (n - 1) / 2
    within = sum(b * (b - 1) / 2 for b in block_sizes)
    return (p_in * within + p_out * (total_pairs - within)) / total_pairs


def sample_block_sizes(
    count: int = 45,
    low: int = 50,
    high: int = 99,
    total: int = 3400,
    seed: int = 0,
) -> list[int]:
    """Draw `count` block sizes in [low, high] that sum exactly to `total`.

    Sizes are uniform draws repaired by round-robin +/-1 steps that never
    leave [low, high].
    """
    if count < 1 or low < 1 or low > high:
        raise ValueError(f"Invalid block bounds: count={count}, low={low}, high={high}")
    if not count * low <= total <= count * high:
        raise ValueError(
            f"Infeasible block sizes: {count} blocks in [{low}, {high}] "
            f"cannot sum to {total}"
        )

    rng = np.random.default_rng(np.random.SeedSequence([seed, count, low, high, total]))
    sizes = rng.integers(low, high + 1, size=count).tolist()
    gap = total - sum(sizes)
    i = 0
    while gap != 0:
        if gap > 0 and sizes[i] < high:
            sizes[i] += 1
            gap -= 1
        elif gap < 0 and sizes[i] > low:
            sizes[i] -= 1
            gap += 1
        i = (i + 1) % count
    return sizes
