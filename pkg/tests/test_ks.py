"""Tests for empirical CDFs, the two-sample K-S distance and graph comparisons."""

import logging
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import special, stats

from app.services.distances.jaccard import all_pairs_distances
from app.services.distances.sample import DistanceSample
from app.services.generators import generate
from app.services.generators.specs import ErSpec
from app.services.stats.compare import (
    closest_graph,
    compare_graphs,
    pairwise_distance_table,
    snapshot_drift,
)
from app.services.stats.ks import (
    EcdfView,
    _lambda,
    check_ks_invariants,
    ecdf_export,
    format_p_value,
    histogram_peaks,
    histogram_table,
    ks_distance,
    ks_log10_p_value,
    ks_p_value,
)


def _brute_force_d(a: list[float], b: list[float]) -> Fraction:
    """sup |F1 - F2| over every sample point, in exact rational arithmetic."""
    best = Fraction(0)
    for x in a + b:
        f1 = Fraction(sum(v <= x for v in a), len(a))
        f2 = Fraction(sum(v <= x for v in b), len(b))
        best = max(best, abs(f1 - f2))
    return best


def _random_sorted(rng: np.random.Generator, size: int, levels: int = 7) -> np.ndarray:
    """Values on a coarse grid so ties are common."""
    return np.sort(rng.integers(0, levels, size=size) / (levels - 1))


# ---------- ECDF ----------


class TestEcdf:
    def test_step_values(self):
        ecdf = EcdfView.of(np.array([0.2, 0.5, 0.5, 0.9]))
        assert ecdf(0.1) == 0.0
        assert ecdf(0.5) == 0.75
        assert ecdf(1.0) == 1.0

    def test_empty_sample_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            EcdfView.of(np.array([]))

    def test_unsorted_array_rejected(self):
        with pytest.raises(ValueError, match="sorted"):
            EcdfView.of(np.array([0.4, 0.1]))

    def test_export_grid(self):
        df = ecdf_export(np.array([0.5]), grid=3)
        assert df["x"].tolist() == [0.0, 0.5, 1.0]
        assert df["F"].tolist() == [0.0, 1.0, 1.0]

    def test_export_needs_two_points(self):
        with pytest.raises(ValueError):
            ecdf_export(np.array([0.5]), grid=1)


class TestHistogram:
    def test_counts_include_right_edge(self):
        df = histogram_table(np.array([0.1, 0.3, 0.3, 1.0]), bins=4)
        assert df["count"].tolist() == [1, 2, 0, 1]
        assert df["bin_left"].iloc[0] == 0.0
        assert df["bin_right"].iloc[-1] == 1.0

    def test_bimodal_peaks(self):
        rng = np.random.default_rng(0)
        values = np.concatenate([rng.normal(0.2, 0.02, 5000), rng.normal(0.8, 0.02, 5000)])
        sample = np.sort(np.clip(values, 0.0, 1.0))
        peaks = histogram_peaks(sample, bins=100, min_prominence=0.05)
        assert len(peaks) == 2
        assert peaks[0] == pytest.approx(0.2, abs=0.03)
        assert peaks[1] == pytest.approx(0.8, abs=0.03)

    def test_peak_in_last_bin(self):
        peaks = histogram_peaks(np.ones(50), bins=10)
        assert peaks.tolist() == [pytest.approx(0.9)]


# ---------- K-S statistic ----------


class TestKsDistance:
    def test_one_third_example(self):
        result = ks_distance(np.array([0.1, 0.2, 0.3]), np.array([0.2, 0.3, 0.4]))
        assert result.d_statistic == pytest.approx(1 / 3)
        assert result.x_star == 0.1
        assert (result.n1, result.n2) == (3, 3)

    def test_disjoint_supports(self):
        result = ks_distance(np.zeros(2), np.ones(3))
        assert result.d_statistic == 1.0

    def test_identical_samples(self):
        sample = DistanceSample.from_unsorted([0.3, 0.1, 0.7, 0.7])
        result = ks_distance(sample, sample)
        assert result.d_statistic == 0.0
        assert result.p_value == 1.0
        assert result.log10_p == 0.0

    def test_empty_sample_rejected(self):
        with pytest.raises(ValueError):
            ks_distance(np.array([]), np.array([0.5]))

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_rational_brute_force_with_ties(self, seed):
        rng = np.random.default_rng(seed)
        a = _random_sorted(rng, int(rng.integers(1, 30)))
        b = _random_sorted(rng, int(rng.integers(1, 30)))
        expected = _brute_force_d(a.tolist(), b.tolist())
        assert ks_distance(a, b).d_statistic == float(expected)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_scipy_statistic(self, seed):
        rng = np.random.default_rng(seed)
        a, b = np.sort(rng.random(400)), np.sort(rng.beta(2, 3, 300))
        assert ks_distance(a, b).d_statistic == pytest.approx(stats.ks_2samp(a, b).statistic, abs=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(3)
        a, b = _random_sorted(rng, 40), _random_sorted(rng, 25)
        assert ks_distance(a, b).d_statistic == ks_distance(b, a).d_statistic

    def test_duplication_invariance(self):
        rng = np.random.default_rng(4)
        a, b = _random_sorted(rng, 30), _random_sorted(rng, 17)
        doubled = np.sort(np.concatenate([a, a]))
        assert ks_distance(doubled, b).d_statistic == ks_distance(a, b).d_statistic

    def test_triangle_inequality(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            a, b, c = (_random_sorted(rng, int(rng.integers(1, 20))) for _ in range(3))
            ab = ks_distance(a, b).d_statistic
            bc = ks_distance(b, c).d_statistic
            ac = ks_distance(a, c).d_statistic
            assert ac <= ab + bc + 1e-12

    def test_result_invariants(self):
        rng = np.random.default_rng(6)
        result = ks_distance(np.sort(rng.random(50)), np.sort(rng.random(70)))
        assert check_ks_invariants(result.d_statistic, result.p_value) == []

    def test_to_dict_keys(self):
        result = ks_distance(np.array([0.1]), np.array([0.2]))
        assert set(result.to_dict()) == {"d", "p", "n1", "n2", "x_star", "log10_p"}


# ---------- p-value ----------


class TestPValue:
    @pytest.mark.parametrize("d", [0.01, 0.05, 0.1])
    @pytest.mark.parametrize("n", [1_000, 1_000_000])
    def test_matches_kolmogorov_survival(self, d, n):
        expected = special.kolmogorov(_lambda(d, n, n))
        assert ks_p_value(d, n, n) == pytest.approx(expected, rel=1e-6, abs=1e-300)

    def test_zero_distance_is_one(self):
        assert ks_p_value(0.0, 10, 10) == 1.0

    def test_underflow_gives_zero_with_finite_log(self):
        assert ks_p_value(1.0, 1000, 1000) == 0.0
        log10_p = ks_log10_p_value(1.0, 1000, 1000)
        assert math.isfinite(log10_p)
        assert log10_p < -300

    def test_log10_matches_when_representable(self):
        p = ks_p_value(0.05, 1000, 1000)
        assert ks_log10_p_value(0.05, 1000, 1000) == pytest.approx(math.log10(p))

    def test_monotone_in_d(self):
        ps = [ks_p_value(d, 500, 700) for d in np.linspace(0.0, 0.3, 31)]
        assert all(later <= earlier for earlier, later in zip(ps, ps[1:]))

    def test_always_in_unit_interval(self):
        for d in np.linspace(0.0, 1.0, 51):
            for n in (1, 5, 100):
                assert 0.0 <= ks_p_value(float(d), n, n) <= 1.0

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            ks_p_value(1.5, 10, 10)
        with pytest.raises(ValueError):
            ks_p_value(0.5, 0, 10)

    def test_format(self):
        assert format_p_value(0.0) == "0"
        assert format_p_value(0.0123456) == "0.0123"

    def test_invariant_check_flags_zero_d_with_p_below_one(self):
        assert check_ks_invariants(0.0, 0.5)
        assert check_ks_invariants(1.2, 0.0)


# ---------- graph comparisons ----------


@pytest.fixture(scope="module")
def er_graphs():
    return {
        "sparse": generate(ErSpec(n=80, p=0.05, seed=1)),
        "dense": generate(ErSpec(n=80, p=0.3, seed=2)),
        "dense_again": generate(ErSpec(n=80, p=0.3, seed=3)),
    }


class TestCompare:
    def test_compare_graphs(self, er_graphs):
        dense, again = er_graphs["dense"], er_graphs["dense_again"]
        assert compare_graphs(dense, dense).d_statistic == 0.0
        result = compare_graphs(dense, er_graphs["sparse"], threads=2)
        expected = ks_distance(all_pairs_distances(dense), all_pairs_distances(er_graphs["sparse"]))
        assert result.d_statistic == expected.d_statistic
        assert result.n1 == result.n2 == 80 * 79 // 2
        assert compare_graphs(dense, again).d_statistic < result.d_statistic

    def test_closest_graph(self, er_graphs):
        references = {"sparse": er_graphs["sparse"], "dense": er_graphs["dense"]}
        name, result = closest_graph(er_graphs["dense_again"], references)
        assert name == "dense"
        assert result.d_statistic < 0.5

    def test_closest_needs_references(self, er_graphs):
        with pytest.raises(ValueError):
            closest_graph(er_graphs["dense"], {})

    def test_pairwise_table(self, er_graphs):
        table = pairwise_distance_table(er_graphs)
        assert list(table.index) == list(er_graphs)
        assert (np.diag(table.to_numpy()) == 0.0).all()
        assert np.array_equal(table.to_numpy(), table.to_numpy().T)
        assert table.loc["dense", "dense_again"] < table.loc["dense", "sparse"]

    def test_snapshot_drift_flags_change(self, er_graphs, caplog):
        snapshots = [
            ("t0", er_graphs["dense"]),
            ("t1", er_graphs["dense"]),
            ("t2", er_graphs["sparse"]),
        ]
        with caplog.at_level(logging.WARNING):
            drift = snapshot_drift(snapshots, threshold=0.01)
        assert drift["flagged"].tolist() == [False, True]
        assert drift["d_statistic"].iloc[0] == 0.0
        assert drift["p_value"].iloc[0] == 1.0
        assert "t2" in caplog.text

    def test_drift_needs_two_snapshots(self, er_graphs):
        with pytest.raises(ValueError):
            snapshot_drift([("t0", er_graphs["dense"])])
