"""Two-sample K-S statistics over distance samples, and graph-level comparisons."""

from app.services.stats.ks import (
    EcdfView,
    KsResult,
    ecdf_export,
    histogram_peaks,
    histogram_table,
    ks_distance,
    ks_log10_p_value,
    ks_p_value,
)

__all__ = [
    "EcdfView",
    "KsResult",
    "ecdf_export",
    "histogram_peaks",
    "histogram_table",
    "ks_distance",
    "ks_log10_p_value",
    "ks_p_value",
]
