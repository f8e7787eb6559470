"""Erased configuration model on discrete power-law degree sequences.

Degrees are drawn by inverse CDF from P(k) ∝ k^(-exponent), k in [1, n-1].
Stubs are matched uniformly at random; self-loops and parallel edges produced
by the matching are erased and the erasure rate is recorded in metadata.
"""

import logging

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from app.services.generators.specs import CmSpec
from app.services.graph.core import Graph

logger = logging.getLogger(__name__)

MAX_PARITY_DRAWS = 1000


def power_law_degrees(
    n: int,
    exponent: float,
    rng: np.random.Generator,
    k_max: int | None = None,
    k_min: int = 1,
) -> np.ndarray:
    """Draw n degrees from the truncated discrete power law."""
    k_max = n - 1 if k_max is None else k_max
    if k_max < k_min:
        raise ValueError(f"k_max ({k_max}) must be >= k_min ({k_min})")
    k = np.arange(k_min, k_max + 1, dtype=np.float64)
    cdf = np.cumsum(k ** -exponent)
    cdf /= cdf[-1]
    return np.searchsorted(cdf, rng.random(n), side="right").astype(np.int64) + k_min


def fit_power_law_exponent(degrees: np.ndarray, k_min: int = 1) -> float:
    """Discrete maximum-likelihood exponent over degrees >= k_min (Hurwitz zeta normaliser)."""
    tail = np.asarray(degrees, dtype=np.float64)
    tail = tail[tail >= k_min]
    if tail.size == 0:
        raise ValueError(f"No degrees >= {k_min} to fit")
    log_sum = np.log(tail).sum()
    m = tail.size

    def neg_log_likelihood(alpha: float) -> float:
        return alpha * log_sum + m * np.log(zeta(alpha, k_min))

    result = minimize_scalar(neg_log_likelihood, bounds=(1.01, 10.0), method="bounded")
    return float(result.x)


def configuration_graph(
    out_degrees: np.ndarray | list[int],
    in_degrees: np.ndarray | list[int] | None = None,
    seed: int | np.random.Generator = 0,
    metadata: dict | None = None,
) -> Graph:
    """Wire a degree sequence by uniform stub matching and erase collisions.

    With in_degrees the graph is directed (out-stubs matched to in-stubs);
    otherwise undirected and the degree sum must be even.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out_deg = np.asarray(out_degrees, dtype=np.int64)
    n = out_deg.size
    if n < 1 or (out_deg < 0).any():
        raise ValueError("Degree sequence must be non-empty and non-negative")

    nodes = np.arange(n, dtype=np.int64)
    if in_degrees is None:
        if out_deg.sum() % 2:
            raise ValueError(f"Undirected degree sum must be even, got {out_deg.sum()}")
        stubs = np.repeat(nodes, out_deg)
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        directed = False
    else:
        in_deg = np.asarray(in_degrees, dtype=np.int64)
        if in_deg.size != n or in_deg.sum() != out_deg.sum():
            raise ValueError("In- and out-degree sequences must have equal length and sum")
        targets = np.repeat(nodes, in_deg)
        rng.shuffle(targets)
        pairs = np.column_stack([np.repeat(nodes, out_deg), targets])
        directed = True

    g = Graph.from_edges(n, pairs, directed=directed, metadata=metadata)
    wired = len(pairs)
    erased = g.metadata["self_loops_dropped"] + g.metadata["duplicates_collapsed"]
    g.metadata["stub_pairs"] = wired
    g.metadata["erased_edges"] = erased
    g.metadata["erased_fraction"] = erased / wired if wired else 0.0
    return g


def _reconciled_in_out(
    n: int, exponent: float, rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw out/in sequences and make their sums match.

    The shorter-sum sequence's largest entry absorbs the difference; if that
    would exceed n-1 both sequences are redrawn (at most 10n times).
    """
    k_max = n - 1
    for _ in range(10 * n):
        out_deg = power_law_degrees(n, exponent, rng)
        in_deg = power_law_degrees(n, exponent, rng)
        gap = int(out_deg.sum() - in_deg.sum())
        if gap == 0:
            return out_deg, in_deg
        shorter = in_deg if gap > 0 else out_deg
        top = int(np.argmax(shorter))
        if shorter[top] + abs(gap) <= k_max:
            shorter[top] += abs(gap)
            return out_deg, in_deg
    raise RuntimeError(f"Could not reconcile in/out degree sums for n={n} after {10 * n} draws")


def generate_cm(spec: CmSpec) -> Graph:
    """Erased configuration model with power-law degrees (in and out when directed)."""
    degree_ss, wiring_ss = np.random.SeedSequence(spec.seed).spawn(2)
    degree_rng = np.random.default_rng(degree_ss)
    metadata = {"generator": "cm", "spec": spec.model_dump()}

    if spec.directed:
        out_deg, in_deg = _reconciled_in_out(spec.n, spec.exponent, degree_rng)
        metadata["exponent_fit"] = fit_power_law_exponent(np.concatenate([out_deg, in_deg]))
        g = configuration_graph(out_deg, in_deg, seed=np.random.default_rng(wiring_ss), metadata=metadata)
    else:
        for _ in range(MAX_PARITY_DRAWS):
            degrees = power_law_degrees(spec.n, spec.exponent, degree_rng)
            if degrees.sum() % 2 == 0:
                break
        else:
            raise RuntimeError(f"No even degree sum after {MAX_PARITY_DRAWS} draws")
        metadata["exponent_fit"] = fit_power_law_exponent(degrees)
        g = configuration_graph(degrees, seed=np.random.default_rng(wiring_ss), metadata=metadata)

    logger.info(
        "Generated %s: %d edges, erased %.2f%% of stub pairs (seed=%d)",
        spec.label(), g.number_of_edges, 100 * g.metadata["erased_fraction"], spec.seed,
    )
    return g
