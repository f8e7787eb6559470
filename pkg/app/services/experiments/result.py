"""Experiment report data structures.

A report holds one row per comparison. Graphs are named by descriptors that
round-trip: "spec:kind=er;n=3400;..." for generated graphs, "file:PATH" for
loaded ones. Perturbed graphs keep their source descriptor; the perturbation
lives in the kind/fraction/perturbation_seed columns.
"""

from dataclasses import asdict, dataclass, field
from pathlib import Path

import pandas as pd

from app.exceptions import GraphDataError, ReportValidationError
from app.services.generators.specs import GraphSpec, spec_from_text, spec_to_text
from app.services.stats.ks import check_ks_invariants

# Column order of the CSV; runtime_ms last since it is the only nondeterministic column
REPORT_COLUMNS = [
    "table_id",
    "row",
    "graph1",
    "graph2",
    "kind",
    "fraction",
    "rep",
    "generation_seed",
    "generation_seed2",
    "perturbation_seed",
    "d_statistic",
    "p_value",
    "log10_p",
    "n1",
    "n2",
    "published_value",
    "band_low",
    "band_high",
    "check",
    "runtime_ms",
]


def spec_descriptor(spec: GraphSpec) -> str:
    return "spec:" + ";".join(spec_to_text(spec).splitlines())


def file_descriptor(path: str | Path) -> str:
    return f"file:{path}"


def parse_descriptor(descriptor: str) -> GraphSpec | Path:
    """Inverse of spec_descriptor / file_descriptor."""
    scheme, sep, body = descriptor.partition(":")
    if sep and scheme == "spec":
        return spec_from_text(body.replace(";", "\n"))
    if sep and scheme == "file":
        return Path(body)
    raise GraphDataError(f"Unrecognised graph descriptor: {descriptor!r}")


@dataclass
class ExperimentRow:
    """One two-sample comparison in a report."""

    table_id: str
    row: str
    graph1: str
    graph2: str
    d_statistic: float
    p_value: float
    log10_p: float
    n1: int
    n2: int
    kind: str = ""  # "", "node", "edge"
    fraction: float | None = None
    rep: int = 0
    generation_seed: int | None = None
    generation_seed2: int | None = None  # graph2 of a pair comparison
    perturbation_seed: int | None = None
    published_value: float | None = None
    band_low: float | None = None
    band_high: float | None = None
    check: str = "n/a"  # "pass", "fail", "n/a"
    runtime_ms: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExperimentReport:
    """Rows reproducing one table (or one ad-hoc sensitivity run)."""

    table_id: str
    rows: list[ExperimentRow] = field(default_factory=list)

    def validate(self) -> None:
        """Raise ReportValidationError when any row breaks the K-S result invariants."""
        for i, r in enumerate(self.rows):
            problems = check_ks_invariants(r.d_statistic, r.p_value)
            if r.n1 < 1 or r.n2 < 1:
                problems.append(f"sample sizes n1={r.n1}, n2={r.n2}")
            if problems:
                raise ReportValidationError(f"Row {i} ({r.row}): " + "; ".join(problems))

    def to_dataframe(self) -> pd.DataFrame:
        self.validate()
        records = [r.to_dict() for r in self.rows]
        # 64-bit seeds do not survive a float column; keep them as exact text
        for rec in records:
            for key in ("generation_seed", "generation_seed2", "perturbation_seed"):
                rec[key] = "" if rec[key] is None else str(rec[key])
        return pd.DataFrame(records, columns=REPORT_COLUMNS)

    def to_csv(self, path: str | Path | None = None) -> str | None:
        """CSV text, or write to path when given."""
        df = self.to_dataframe()
        if path is None:
            return df.to_csv(index=False, float_format="%.10g")
        df.to_csv(path, index=False, float_format="%.10g")
        return None

    @property
    def failures(self) -> list[ExperimentRow]:
        return [r for r in self.rows if r.check == "fail"]
