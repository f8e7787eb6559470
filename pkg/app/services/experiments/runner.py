"""Experiment runner: pair comparisons and sensitivity grids into ExperimentReports.

Each unit of work (one table row at one repetition) owns its graphs and runs
generate -> perturb -> distances -> K-S. Units run concurrently on a thread
pool; within a unit only the all-pairs kernel is parallel. Results are
collected in submission order, so reports are deterministic for a given
master seed regardless of `jobs` or `threads`.
"""

import logging
import time
import zlib
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd

from app.config import settings
from app.exceptions import DatasetMissingError
from app.services.distances.jaccard import all_pairs_distances
from app.services.distances.sample import DistanceSample
from app.services.experiments.result import (
    ExperimentReport,
    ExperimentRow,
    file_descriptor,
    spec_descriptor,
)
from app.services.experiments.tables import (
    DATASETS,
    REFERENCE_N,
    GraphRecipe,
    PairRow,
    SensitivityRow,
    TableDefinition,
    band_check,
    get_table,
    scaled_block_bounds,
    sensitivity_band,
)
from app.services.generators import generate
from app.services.generators.random_graphs import sample_block_sizes
from app.services.generators.specs import CmSpec, ErSpec, GraphSpec, SbmSpec
from app.services.graph.core import Graph, density, largest_connected_component
from app.services.graph.io import load_edge_list
from app.services.perturb import PerturbationSpec, perturb
from app.services.stats.ks import format_p_value, ks_distance

logger = logging.getLogger(__name__)


def derive_seed(master: int, *keys: str | int | float) -> int:
    """Independent 64-bit seed for one graph or perturbation of a run."""
    entropy = [master, *(zlib.crc32(str(k).encode("utf-8")) for k in keys)]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0])


def build_spec(recipe: GraphRecipe, n: int, seed: int, partner_density: float | None = None) -> GraphSpec:
    if recipe.model == "er":
        p = recipe.p if recipe.p is not None else partner_density
        if p is None:
            raise ValueError("Density-matched ER recipe needs the partner graph's density")
        return ErSpec(n=n, p=p, directed=recipe.directed, seed=seed)
    if recipe.model == "sbm":
        count, low, high = scaled_block_bounds(n)
        sizes = sample_block_sizes(count, low, high, n, seed=seed)
        return SbmSpec(
            block_sizes=tuple(sizes), p_in=recipe.p_in, p_out=recipe.p_out,
            directed=recipe.directed, seed=seed,
        )
    if recipe.model == "cm":
        return CmSpec(n=n, exponent=recipe.exponent, directed=recipe.directed, seed=seed)
    raise ValueError(f"Recipe {recipe.label!r} is a dataset, not a generator")


def load_dataset(name: str, path: str | Path) -> Graph:
    """Load a real-world dataset with its directedness and component preprocessing."""
    info = DATASETS[name]
    g = load_edge_list(path, directed=info.directed)
    if info.largest_component:
        g = largest_connected_component(g)
    logger.info("Dataset %s: %r", name, g)
    return g


def _elapsed_ms(start: float) -> int:
    return int(round((time.perf_counter() - start) * 1000))


def _log_row(row: ExperimentRow) -> None:
    where = f" at {row.kind} {row.fraction:g}" if row.kind else ""
    logger.info(
        "[%s] %s%s rep=%d: D=%.5f p=%s (%s, %d ms)",
        row.table_id, row.row, where, row.rep, row.d_statistic, format_p_value(row.p_value), row.check, row.runtime_ms,
    )
    if row.check == "fail":
        logger.warning(
            "[%s] %s%s: D=%.5f outside band [%s, %s] (published %s)",
            row.table_id, row.row, where, row.d_statistic, row.band_low, row.band_high, row.published_value,
        )


# ---------- pair tables ----------


def _run_pair(table_id: str, row: PairRow, rep: int, master: int, n: int, threads: int | None) -> ExperimentRow:
    start = time.perf_counter()
    seed1 = derive_seed(master, table_id, row.label, "graph1", rep)
    seed2 = derive_seed(master, table_id, row.label, "graph2", rep)

    # graph2 first: a density-matched graph1 takes its p from graph2
    spec2 = build_spec(row.graph2, n, seed2)
    g2 = generate(spec2, threads)
    spec1 = build_spec(row.graph1, n, seed1, partner_density=density(g2))
    g1 = generate(spec1, threads)

    result = ks_distance(all_pairs_distances(g1, threads), all_pairs_distances(g2, threads))
    out = ExperimentRow(
        table_id=table_id,
        row=row.label,
        graph1=spec_descriptor(spec1),
        graph2=spec_descriptor(spec2),
        d_statistic=result.d_statistic,
        p_value=result.p_value,
        log10_p=result.log10_p,
        n1=result.n1,
        n2=result.n2,
        rep=rep,
        generation_seed=seed1,
        generation_seed2=seed2,
        published_value=row.published_value,
        band_low=row.band[0],
        band_high=row.band[1],
        check=band_check(result.d_statistic, row.band),
        runtime_ms=_elapsed_ms(start),
    )
    _log_row(out)
    return out


# ---------- sensitivity grids ----------


def _sensitivity_rows(
    g: Graph,
    base: DistanceSample,
    *,
    table_id: str,
    label: str,
    descriptor: str,
    kind: str,
    fractions: Sequence[float],
    perturbation_seeds: Sequence[int],
    rep: int,
    generation_seed: int | None,
    published_values: Sequence[float] | None,
    check_bands: bool,
    threads: int | None,
) -> list[ExperimentRow]:
    rows = []
    for i, fraction in enumerate(fractions):
        start = time.perf_counter()
        spec = PerturbationSpec(kind=kind, fraction=fraction, seed=perturbation_seeds[i])
        perturbed = perturb(g, spec)
        sample = base if perturbed is g else all_pairs_distances(perturbed, threads)
        result = ks_distance(base, sample)

        published = published_values[i] if published_values is not None else None
        band: tuple[float, float] | None = None
        if fraction == 0.0:
            band = (0.0, 0.0)
        elif check_bands and published is not None:
            band = sensitivity_band(published, kind)
        check = band_check(result.d_statistic, band)
        if fraction == 0.0 and result.p_value != 1.0:
            check = "fail"

        row = ExperimentRow(
            table_id=table_id,
            row=label,
            graph1=descriptor,
            graph2=descriptor,
            d_statistic=result.d_statistic,
            p_value=result.p_value,
            log10_p=result.log10_p,
            n1=result.n1,
            n2=result.n2,
            kind=kind,
            fraction=fraction,
            rep=rep,
            generation_seed=generation_seed,
            perturbation_seed=spec.seed,
            published_value=published,
            band_low=band[0] if band else None,
            band_high=band[1] if band else None,
            check=check,
            runtime_ms=_elapsed_ms(start),
        )
        _log_row(row)
        rows.append(row)
    return rows


def run_sensitivity(
    g: Graph,
    descriptor: str,
    kind: str,
    fractions: Sequence[float],
    seeds: Sequence[int] = (0,),
    label: str = "",
    table_id: str = "sensitivity",
    threads: int | None = None,
) -> ExperimentReport:
    """Compare g with perturbed copies of itself, one row per (seed, fraction).

    The seed is the perturbation seed; g's distance sample is computed once.
    """
    if not fractions:
        raise ValueError("Sensitivity run needs at least one removal fraction")
    base = all_pairs_distances(g, threads)
    report = ExperimentReport(table_id=table_id)
    for rep, seed in enumerate(seeds):
        report.rows.extend(
            _sensitivity_rows(
                g, base,
                table_id=table_id,
                label=label or descriptor,
                descriptor=descriptor,
                kind=kind,
                fractions=fractions,
                perturbation_seeds=[seed] * len(fractions),
                rep=rep,
                generation_seed=None,
                published_values=None,
                check_bands=False,
                threads=threads,
            )
        )
    return report


def _run_sensitivity_unit(
    table: TableDefinition,
    row: SensitivityRow,
    rep: int,
    master: int,
    n: int,
    datasets: Mapping[str, tuple[Graph, Path]],
    threads: int | None,
) -> list[ExperimentRow]:
    recipe = row.graph
    if recipe.model == "dataset":
        g, path = datasets[recipe.dataset]
        descriptor, generation_seed = file_descriptor(path), None
    else:
        generation_seed = derive_seed(master, table.table_id, row.label, rep)
        spec = build_spec(recipe, n, generation_seed)
        g = generate(spec, threads)
        descriptor = spec_descriptor(spec)

    kind = table.perturbation or "node"
    return _sensitivity_rows(
        g, all_pairs_distances(g, threads),
        table_id=table.table_id,
        label=row.label,
        descriptor=descriptor,
        kind=kind,
        fractions=table.fractions,
        perturbation_seeds=[
            derive_seed(master, table.table_id, row.label, kind, f, rep) for f in table.fractions
        ],
        rep=rep,
        generation_seed=generation_seed,
        published_values=row.published_values,
        check_bands=table.check_bands,
        threads=threads,
    )


# ---------- tables ----------


def reproduce_table(
    table_id: str,
    seed: int = 0,
    datasets: Mapping[str, str | Path] | None = None,
    n: int | None = None,
    seeds: int = 1,
    threads: int | None = None,
    jobs: int | None = None,
) -> ExperimentReport:
    """Regenerate every row of a catalogued table.

    Args:
        seed: master seed; every graph and perturbation seed derives from it.
        datasets: dataset name -> edge-list path, required by real-world tables.
        n: node count for generated graphs (defaults to the published size).
        seeds: repetitions per row, each with fresh derived seeds.
        jobs: rows run concurrently (settings.jobs when None).

    Raises:
        DatasetMissingError: a real-world table lacks one of its dataset paths.
    """
    table = get_table(table_id)
    if seeds < 1:
        raise ValueError(f"Need at least one repetition, got seeds={seeds}")
    n = n or REFERENCE_N
    jobs = jobs or settings.jobs

    loaded: dict[str, tuple[Graph, Path]] = {}
    for name in table.datasets:
        if not datasets or name not in datasets:
            raise DatasetMissingError(name)
        path = Path(datasets[name])
        loaded[name] = (load_dataset(name, path), path)

    units: list = []
    if table.is_pair_table:
        for row in table.pair_rows:
            units.extend((_run_pair, (table.table_id, row, rep, seed, n, threads)) for rep in range(seeds))
    else:
        for srow in table.sensitivity_rows:
            units.extend(
                (_run_sensitivity_unit, (table, srow, rep, seed, n, loaded, threads)) for rep in range(seeds)
            )

    logger.info("Reproducing %s (%s): %d units, jobs=%d", table.table_id, table.title, len(units), jobs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(lambda unit: unit[0](*unit[1]), units))

    report = ExperimentReport(table_id=table.table_id)
    for result in results:
        if isinstance(result, ExperimentRow):
            report.rows.append(result)
        else:
            report.rows.extend(result)
    if report.failures:
        logger.warning("%s: %d of %d rows outside tolerance", table.table_id, len(report.failures), len(report.rows))
    return report


def summarize_report(report: ExperimentReport) -> pd.DataFrame:
    """Median D (with its range) and median p across repetitions per (row, kind, fraction), checked against the band."""
    df = report.to_dataframe()
    if df.empty:
        return pd.DataFrame(columns=["row", "kind", "fraction", "reps", "d_median", "d_min", "d_max", "p_median", "published_value", "check"])

    keys = ["row", "kind", "fraction"]
    grouped = df.groupby(keys, sort=False, dropna=False)
    summary = grouped.agg(
        reps=("d_statistic", "size"),
        d_median=("d_statistic", "median"),
        d_min=("d_statistic", "min"),
        d_max=("d_statistic", "max"),
        p_median=("p_value", "median"),
        published_value=("published_value", "first"),
        band_low=("band_low", "first"),
        band_high=("band_high", "first"),
    ).reset_index()

    def check(r: pd.Series) -> str:
        if pd.isna(r["band_low"]) or pd.isna(r["band_high"]):
            return "n/a"
        return band_check(r["d_median"], (r["band_low"], r["band_high"]))

    summary["check"] = summary.apply(check, axis=1)
    return summary.drop(columns=["band_low", "band_high"])
