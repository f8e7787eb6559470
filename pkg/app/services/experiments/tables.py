"""Catalogue of reproducible tables: graph recipes, published values and tolerance bands.

Two shapes of table exist:
- pair tables (t1, t2): two graphs generated side by side and compared
- sensitivity tables (t3-t6, rw-*): one graph compared with node- or
  edge-removed copies of itself across REMOVAL_FRACTIONS

Published values come from single unseeded runs, so checks use bands rather
than digits. The 0% column must always be exactly D=0, p=1.
"""

import math
from dataclasses import dataclass, field
from typing import Literal

from app.services.perturb import DEFAULT_FRACTIONS

REFERENCE_N = 3400
REMOVAL_FRACTIONS = DEFAULT_FRACTIONS

# Node removal barely moves D; edge removal moves it a lot, so its bands are tighter
NODE_BAND = (0.3, 3.0)
EDGE_BAND = (0.5, 2.0)

Model = Literal["er", "sbm", "cm", "dataset"]


@dataclass(frozen=True)
class GraphRecipe:
    """How to obtain one graph of a table row.

    An ER recipe with p=None takes the realized density of the other graph in
    its row (the hard-case ER graphs match their SBM partner's density).
    """

    model: Model
    directed: bool = False
    p: float | None = None
    p_in: float = 0.0
    p_out: float = 0.0
    exponent: float = 3.5
    dataset: str = ""
    display: str = ""

    @property
    def label(self) -> str:
        if self.display:
            base = self.display
        elif self.model == "er":
            base = f"ER {self.p:g}"
        elif self.model == "sbm":
            base = f"SBM {self.p_in:g}/{self.p_out:g}"
        elif self.model == "cm":
            base = f"CM{REFERENCE_N}"
        else:
            base = self.dataset
        return base + (" (Directed)" if self.directed else "")


@dataclass(frozen=True)
class PairRow:
    graph1: GraphRecipe
    graph2: GraphRecipe
    published_value: float
    band: tuple[float, float]

    @property
    def label(self) -> str:
        return f"{self.graph1.label} / {self.graph2.label}"


@dataclass(frozen=True)
class SensitivityRow:
    graph: GraphRecipe
    published_values: tuple[float, ...]

    @property
    def label(self) -> str:
        return self.graph.label


@dataclass(frozen=True)
class TableDefinition:
    table_id: str
    title: str
    pair_rows: tuple[PairRow, ...] = ()
    sensitivity_rows: tuple[SensitivityRow, ...] = ()
    perturbation: Literal["node", "edge"] | None = None
    fractions: tuple[float, ...] = REMOVAL_FRACTIONS
    # Real-world magnitudes depend on dataset snapshots: only the 0% column is checked
    check_bands: bool = True
    datasets: tuple[str, ...] = field(default=())

    @property
    def is_pair_table(self) -> bool:
        return bool(self.pair_rows)


@dataclass(frozen=True)
class DatasetInfo:
    name: str
    display: str
    directed: bool
    largest_component: bool
    url: str


DATASETS: dict[str, DatasetInfo] = {
    d.name: d
    for d in (
        DatasetInfo("email-eu-core", "email-Eu-Core", True, False,
                    "https://snap.stanford.edu/data/email-Eu-core.html"),
        DatasetInfo("wiki-vote", "Wikipedia", True, True,
                    "https://snap.stanford.edu/data/wiki-Vote.html"),
        DatasetInfo("power-grid", "W & S power grid", False, False,
                    "https://toreopsahl.com/datasets/#uspowergrid"),
        DatasetInfo("karate", "Karate club", False, False,
                    "http://konect.cc/networks/ucidata-zachary/"),
        DatasetInfo("facebook", "Facebook egonets", False, False,
                    "https://snap.stanford.edu/data/ego-Facebook.html"),
    )
}


def sensitivity_band(published_value: float, kind: str) -> tuple[float, float]:
    """Tolerance band around a published sensitivity cell, capped at D=1."""
    low, high = NODE_BAND if kind == "node" else EDGE_BAND
    return published_value * low, min(published_value * high, 1.0)


def band_check(d: float, band: tuple[float, float] | None) -> str:
    if band is None:
        return "n/a"
    low, high = band
    return "pass" if low <= d <= high else "fail"


def _er(p: float | None, directed: bool = False, display: str = "") -> GraphRecipe:
    return GraphRecipe("er", directed=directed, p=p, display=display)


def _sbm(p_in: float, p_out: float, directed: bool = False) -> GraphRecipe:
    return GraphRecipe("sbm", directed=directed, p_in=p_in, p_out=p_out)


def _cm(directed: bool = False) -> GraphRecipe:
    return GraphRecipe("cm", directed=directed)


def _dataset(name: str) -> GraphRecipe:
    info = DATASETS[name]
    return GraphRecipe("dataset", directed=info.directed, dataset=name, display=info.display)


def _hard_case(er_label: str, p_in: float, p_out: float, directed: bool, published: float, band: tuple[float, float]) -> PairRow:
    return PairRow(_er(None, directed, display=f"ER {er_label}"), _sbm(p_in, p_out, directed), published, band)


T1 = TableDefinition(
    table_id="t1",
    title="Pairwise comparisons of ER and SBM graphs (hard cases)",
    pair_rows=(
        _hard_case("0.309", 0.7, 0.3, False, 0.004, (0.001, 0.012)),
        _hard_case("0.309", 0.7, 0.3, True, 0.005, (0.001, 0.012)),
        _hard_case("0.213", 0.8, 0.2, False, 0.013, (0.005, 0.035)),
        _hard_case("0.213", 0.8, 0.2, True, 0.018, (0.005, 0.035)),
        _hard_case("0.118", 0.9, 0.1, False, 0.061, (0.03, 0.12)),
        _hard_case("0.118", 0.9, 0.1, True, 0.086, (0.03, 0.12)),
    ),
)

_EASY = (0.97, 1.0)

T2 = TableDefinition(
    table_id="t2",
    title="Pairwise comparisons of CM, ER and SBM graphs (easier cases)",
    pair_rows=(
        PairRow(_cm(), _er(0.213), 0.9988, _EASY),
        PairRow(_cm(True), _er(0.213, True), 0.9982, _EASY),
        PairRow(_cm(), _sbm(0.9, 0.1), 0.9988, _EASY),
        PairRow(_cm(True), _sbm(0.9, 0.1, True), 0.9977, _EASY),
        PairRow(_sbm(0.9, 0.1), _er(0.213), 0.9762, _EASY),
        PairRow(_sbm(0.9, 0.1, True), _er(0.213, True), 0.9774, _EASY),
    ),
)

_ER_GRAPHS = (_er(0.5), _er(0.5, True), _er(0.333), _er(0.333, True))
_SBM_GRAPHS = (_sbm(0.7, 0.3), _sbm(0.7, 0.3, True), _sbm(0.9, 0.1), _sbm(0.9, 0.1, True))

T3 = TableDefinition(
    table_id="t3",
    title="Node removal experiment for four ER graphs",
    perturbation="node",
    sensitivity_rows=tuple(
        SensitivityRow(g, values)
        for g, values in zip(_ER_GRAPHS, (
            (0, 0.0011, 0.0029, 0.0084, 0.0134, 0.0382),
            (0, 0.0013, 0.0023, 0.0073, 0.0180, 0.0387),
            (0, 0.00085, 0.0030, 0.0080, 0.0158, 0.0383),
            (0, 0.00077, 0.0019, 0.0070, 0.0135, 0.0408),
        ))
    ),
)

T4 = TableDefinition(
    table_id="t4",
    title="Edge removal experiment for four ER graphs",
    perturbation="edge",
    sensitivity_rows=tuple(
        SensitivityRow(g, values)
        for g, values in zip(_ER_GRAPHS, (
            (0, 0.0953, 0.1886, 0.7586, 0.9788, 1.0),
            (0, 0.1337, 0.2629, 0.9022, 0.9989, 1.0),
            (0, 0.0522, 0.1037, 0.4810, 0.7987, 0.998),
            (0, 0.0732, 0.1457, 0.6376, 0.9290, 1.0),
        ))
    ),
)

T5 = TableDefinition(
    table_id="t5",
    title="Node removal experiment for four SBM graphs",
    perturbation="node",
    sensitivity_rows=tuple(
        SensitivityRow(g, values)
        for g, values in zip(_SBM_GRAPHS, (
            (0, 0.002, 0.003, 0.006, 0.014, 0.041),
            (0, 0.001, 0.002, 0.007, 0.013, 0.042),
            (0, 0.0009, 0.002, 0.007, 0.016, 0.036),
            (0, 0.0009, 0.001, 0.008, 0.014, 0.035),
        ))
    ),
)

T6 = TableDefinition(
    table_id="t6",
    title="Edge removal experiment for four SBM graphs",
    perturbation="edge",
    sensitivity_rows=tuple(
        SensitivityRow(g, values)
        for g, values in zip(_SBM_GRAPHS, (
            (0, 0.047, 0.093, 0.438, 0.751, 0.995),
            (0, 0.065, 0.13, 0.584, 0.893, 1.0),
            (0, 0.015, 0.029, 0.146, 0.284, 0.628),
            (0, 0.02, 0.041, 0.202, 0.389, 0.785),
        ))
    ),
)

_RW_NAMES = ("email-eu-core", "wiki-vote", "power-grid", "karate", "facebook")

RW_NODES = TableDefinition(
    table_id="rw-nodes",
    title="Node removal experiment for five real-world graphs",
    perturbation="node",
    check_bands=False,
    datasets=_RW_NAMES,
    sensitivity_rows=tuple(
        SensitivityRow(_dataset(name), values)
        for name, values in zip(_RW_NAMES, (
            (0, 1e-4, 0.002, 0.010, 0.011, 0.044),
            (0, 0.00016, 0.00023, 0.0018, 0.0067, 0.0116),
            (0, 1e-5, 1e-6, 1e-5, 1e-4, 1e-4),
            (0, 0, 0, 0.026, 0.026, 0.123),
            (0, 1e-4, 1e-4, 0.003, 0.007, 0.027),
        ))
    ),
)

RW_EDGES = TableDefinition(
    table_id="rw-edges",
    title="Edge removal experiment for five real-world graphs",
    perturbation="edge",
    check_bands=False,
    datasets=_RW_NAMES,
    sensitivity_rows=tuple(
        SensitivityRow(_dataset(name), values)
        for name, values in zip(_RW_NAMES, (
            (0, 0.001, 0.004, 0.016, 0.033, 0.089),
            (0, 0.00047, 0.0009, 0.0048, 0.0099, 0.0256),
            (0, 1e-5, 1e-5, 1e-4, 1e-4, 1e-4),
            (0, 0, 0.010, 0.021, 0.087, 0.226),
            (0, 0.001, 0.003, 0.012, 0.023, 0.057),
        ))
    ),
)

TABLES: dict[str, TableDefinition] = {
    t.table_id: t for t in (T1, T2, T3, T4, T5, T6, RW_NODES, RW_EDGES)
}


def get_table(table_id: str) -> TableDefinition:
    try:
        return TABLES[table_id]
    except KeyError:
        raise ValueError(f"Unknown table '{table_id}'. Choose from: {', '.join(TABLES)}") from None


def scaled_block_bounds(n: int) -> tuple[int, int, int]:
    """(count, low, high) for SBM block sizes: 45 blocks in [50, 99] at the reference size."""
    if n == REFERENCE_N:
        return 45, 50, 99
    count = max(1, round(n * 45 / REFERENCE_N))
    mean = n / count
    low = max(1, math.floor(mean * 0.66))
    high = max(low, math.ceil(mean * 1.31))
    return count, low, high
