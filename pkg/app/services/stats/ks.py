"""Empirical CDFs and the two-sample Kolmogorov-Smirnov distance.

D = sup_x |F1(x) - F2(x)| is evaluated exactly at the jump points of both
step functions; the p-value comes from the asymptotic Kolmogorov distribution
with the Stephens small-sample correction. p-values are indicative only:
within-sample distances are not independent observations.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.signal import find_peaks

from app.config import settings
from app.services.distances.sample import DistanceSample

logger = logging.getLogger(__name__)

SampleLike = DistanceSample | np.ndarray


def _sorted_values(sample: SampleLike) -> np.ndarray:
    if isinstance(sample, DistanceSample):
        return sample.values
    values = np.asarray(sample, dtype=np.float64)
    if values.size > 1 and (np.diff(values) < 0).any():
        raise ValueError("Sample must be sorted ascending")
    return values


@dataclass(frozen=True)
class EcdfView:
    """F(x) = #(values <= x) / count over a sorted sample."""

    values: np.ndarray

    @classmethod
    def of(cls, sample: SampleLike) -> "EcdfView":
        values = _sorted_values(sample)
        if values.size == 0:
            raise ValueError("ECDF of an empty sample is undefined")
        return cls(values)

    @property
    def count(self) -> int:
        return int(self.values.size)

    def __call__(self, x: float | np.ndarray) -> float | np.ndarray:
        result = np.searchsorted(self.values, x, side="right") / self.count
        return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class KsResult:
    """Two-sample K-S comparison: D, p-value, sample sizes and a sup location."""

    d_statistic: float
    p_value: float
    n1: int
    n2: int
    x_star: float
    log10_p: float = 0.0

    def to_dict(self) -> dict:
        return {
            "d": self.d_statistic,
            "p": self.p_value,
            "n1": self.n1,
            "n2": self.n2,
            "x_star": self.x_star,
            "log10_p": self.log10_p,
        }


def check_ks_invariants(d: float, p: float) -> list[str]:
    """Violations of 0 <= D <= 1, 0 <= p <= 1 and D = 0 => p = 1."""
    problems = []
    if not 0.0 <= d <= 1.0:
        problems.append(f"D={d} outside [0, 1]")
    if not 0.0 <= p <= 1.0:
        problems.append(f"p={p} outside [0, 1]")
    if d == 0.0 and p != 1.0:
        problems.append(f"D=0 requires p=1, got p={p}")
    return problems


def ks_distance(s1: SampleLike, s2: SampleLike) -> KsResult:
    """Exact two-sample K-S statistic by merging the two sorted samples.

    Both ECDFs are evaluated at every merged sample point after advancing
    through all tied values, and compared in integer arithmetic
    |c1*n2 - c2*n1| / (n1*n2), so identical samples give exactly D = 0.
    """
    a, b = _sorted_values(s1), _sorted_values(s2)
    n1, n2 = int(a.size), int(b.size)
    if n1 == 0 or n2 == 0:
        raise ValueError("K-S distance needs two non-empty samples")

    points = np.concatenate([a, b])
    points.sort(kind="stable")  # two presorted runs: a linear merge
    c1 = np.searchsorted(a, points, side="right").astype(np.int64)
    c2 = np.searchsorted(b, points, side="right").astype(np.int64)
    gap = np.abs(c1 * n2 - c2 * n1)
    k = int(np.argmax(gap))
    d = int(gap[k]) / (n1 * n2)

    return KsResult(
        d_statistic=d,
        p_value=ks_p_value(d, n1, n2),
        n1=n1,
        n2=n2,
        x_star=float(points[k]),
        log10_p=ks_log10_p_value(d, n1, n2),
    )


def _lambda(d: float, n1: int, n2: int) -> float:
    n_e = n1 * n2 / (n1 + n2)
    root = math.sqrt(n_e)
    return (root + 0.12 + 0.11 / root) * d


def _check_p_args(d: float, n1: int, n2: int) -> None:
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"K-S statistic must be in [0, 1], got {d}")
    if n1 < 1 or n2 < 1:
        raise ValueError(f"Sample sizes must be positive, got n1={n1}, n2={n2}")


def ks_p_value(
    d: float,
    n1: int,
    n2: int,
    max_terms: int | None = None,
    tol: float | None = None,
) -> float:
    """Asymptotic two-sided p-value Q(λ) = 2 Σ (-1)^(k-1) exp(-2 k² λ²).

    λ = (√n_e + 0.12 + 0.11/√n_e)·d with n_e = n1·n2/(n1+n2). The series stops
    once a term drops below tol (or after max_terms); the result is clamped to
    [0, 1]. Underflow yields exactly 0.
    """
    _check_p_args(d, n1, n2)
    if d == 0.0:
        return 1.0
    max_terms = max_terms or settings.ks_series_terms
    tol = tol or settings.ks_series_tol

    lam_sq = _lambda(d, n1, n2) ** 2
    total = 0.0
    for k in range(1, max_terms + 1):
        term = math.exp(-2.0 * k * k * lam_sq)
        total += term if k % 2 else -term
        if term < tol:
            break
    return min(max(2.0 * total, 0.0), 1.0)


def ks_log10_p_value(d: float, n1: int, n2: int) -> float:
    """log10 of the p-value, finite even where the p-value underflows to 0.

    Past underflow the series is dominated by its first term 2·exp(-2λ²).
    """
    p = ks_p_value(d, n1, n2)
    if p > 0.0:
        return math.log10(p)
    return math.log10(2.0) - 2.0 * _lambda(d, n1, n2) ** 2 / math.log(10.0)


def format_p_value(p: float) -> str:
    """Table convention: underflowed p-values print as 0."""
    return "0" if p == 0.0 else f"{p:.3g}"


def ecdf_export(sample: SampleLike, grid: int) -> pd.DataFrame:
    """F evaluated on `grid` evenly spaced points over [0, 1]."""
    if grid < 2:
        raise ValueError(f"ECDF grid needs at least 2 points, got {grid}")
    ecdf = EcdfView.of(sample)
    x = np.linspace(0.0, 1.0, grid)
    return pd.DataFrame({"x": x, "F": ecdf(x)})


def histogram_table(sample: SampleLike, bins: int) -> pd.DataFrame:
    """Counts per equal-width bin over [0, 1]."""
    counts, edges = np.histogram(_sorted_values(sample), bins=bins, range=(0.0, 1.0))
    return pd.DataFrame({"bin_left": edges[:-1], "bin_right": edges[1:], "count": counts})


def histogram_peaks(sample: SampleLike, bins: int = 100, min_prominence: float = 0.001) -> np.ndarray:
    """Left edges of histogram modes whose prominence exceeds min_prominence of the sample."""
    table = histogram_table(sample, bins)
    counts = table["count"].to_numpy()
    # zero-pad so a mode in the first or last bin still counts as a peak
    padded = np.concatenate([[0], counts, [0]])
    peaks, _ = find_peaks(padded, prominence=min_prominence * counts.sum())
    return table["bin_left"].to_numpy()[peaks - 1]
