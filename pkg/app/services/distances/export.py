"""File exports for distance samples: values CSV, JSON sidecar, histogram and ECDF CSVs."""

import json
import logging
from pathlib import Path

import pandas as pd

from app.config import settings
from app.services.distances.sample import DistanceSample
from app.services.stats.ks import ecdf_export, histogram_table

logger = logging.getLogger(__name__)


def write_sample_csv(sample: DistanceSample, path: str | Path) -> Path:
    """Single-column CSV of the sorted distances."""
    path = Path(path)
    pd.DataFrame({"distance": sample.values}).to_csv(path, index=False)
    write_sample_sidecar(sample, path.with_suffix(".json"))
    logger.info("Wrote %d distances to %s", sample.count, path)
    return path


def sample_summary(sample: DistanceSample) -> dict:
    return {
        "count": sample.count,
        "mean": sample.mean(),
        "directed": sample.directed,
        "source": sample.source,
    }


def write_sample_sidecar(sample: DistanceSample, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(sample_summary(sample), indent=2, default=str), encoding="utf-8")
    return path


def write_histogram_csv(sample: DistanceSample, path: str | Path, bins: int | None = None) -> Path:
    """(bin_left, bin_right, count) rows over [0, 1]."""
    path = Path(path)
    histogram_table(sample, bins or settings.hist_bins).to_csv(path, index=False)
    return path


def write_ecdf_csv(sample: DistanceSample, path: str | Path, grid: int | None = None) -> Path:
    """(x, F) rows on a uniform grid over [0, 1], for CDF overlays."""
    path = Path(path)
    ecdf_export(sample, grid or settings.ecdf_grid).to_csv(path, index=False)
    return path
