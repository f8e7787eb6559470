"""Experiment runner reproducing the pair-comparison and sensitivity tables."""

from app.services.experiments.result import ExperimentReport, ExperimentRow
from app.services.experiments.runner import reproduce_table, run_sensitivity, summarize_report
from app.services.experiments.tables import TABLES, get_table

__all__ = [
    "ExperimentReport",
    "ExperimentRow",
    "TABLES",
    "get_table",
    "reproduce_table",
    "run_sensitivity",
    "summarize_report",
]
