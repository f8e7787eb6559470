"""graphdist command line.

Usage:
    graphdist generate er --n 3400 --p 0.213 --seed 7 --out er.txt
    graphdist generate sbm --blocks-file blocks.txt --pin 0.9 --pout 0.1 --directed --seed 7 --out sbm.txt
    graphdist generate cm --n 3400 --exponent 3.5 --seed 7 --out cm.txt
    graphdist compare er.txt sbm.txt --emit-cdf plots/er_vs_sbm
    graphdist sensitivity er.txt --kind node --fractions 0,0.005,0.01,0.05,0.1,0.25 --seeds 1,2,3
    graphdist reproduce t3 --seed 7 --out t3.csv
    graphdist reproduce rw-edges --dataset karate=karate.txt --dataset facebook=fb.txt ...
    graphdist lcc wiki-Vote.txt --directed --out wiki-lcc.txt
    graphdist dist sbm.txt --out sbm_dist.csv --hist sbm_hist.csv
    graphdist drift day1.txt day2.txt day3.txt --undirected --threshold 0.02

Exit codes: 0 success, 1 usage error, 2 data error. Logs go to stderr so
stdout carries only JSON/CSV.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from app.config import settings
from app.exceptions import GraphDataError
from app.services.distances.export import (
    sample_summary,
    write_ecdf_csv,
    write_histogram_csv,
    write_sample_csv,
)
from app.services.distances.jaccard import all_pairs_distances
from app.services.experiments.result import ExperimentReport, file_descriptor
from app.services.experiments.runner import reproduce_table, run_sensitivity, summarize_report
from app.services.experiments.tables import DATASETS, TABLES
from app.services.generators import generate
from app.services.generators.random_graphs import sample_block_sizes
from app.services.generators.specs import (
    CmSpec,
    ErSpec,
    GraphSpec,
    SbmSpec,
    read_spec_sidecar,
    write_spec_sidecar,
)
from app.services.graph.core import Graph, largest_connected_component
from app.services.graph.io import load_edge_list, write_edge_list
from app.services.perturb import DEFAULT_FRACTIONS
from app.services.stats.compare import DEFAULT_DRIFT_THRESHOLD, snapshot_drift
from app.services.stats.ks import ks_distance

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """Invalid combination of command-line arguments."""


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad arguments; usage errors here exit 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


# ---------- argument types ----------


def _fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"fraction must be in [0, 1], got {value}")
    return value


def _fraction_list(text: str) -> list[float]:
    return [_fraction(part) for part in text.split(",") if part.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _dataset_arg(text: str) -> tuple[str, str]:
    name, sep, path = text.partition("=")
    if not sep or not path:
        raise argparse.ArgumentTypeError(f"expected NAME=PATH, got {text!r}")
    if name not in DATASETS:
        raise argparse.ArgumentTypeError(f"unknown dataset {name!r}; choose from {', '.join(DATASETS)}")
    return name, path


def _add_direction_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--directed", dest="directed", action="store_const", const=True, default=None)
    group.add_argument("--undirected", dest="directed", action="store_const", const=False)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


# ---------- helpers ----------


def _resolve_directed(flag: bool | None, paths: list[str]) -> bool:
    """Explicit flag, else the spec sidecars of the inputs, else a usage error."""
    if flag is not None:
        return flag
    specs = {p: read_spec_sidecar(p) for p in paths}
    found = {spec.directed for spec in specs.values() if spec is not None}
    missing = [p for p, spec in specs.items() if spec is None]
    if len(found) > 1:
        raise UsageError("inputs disagree on directedness; pass --directed or --undirected")
    if missing:
        raise UsageError(
            f"cannot infer directedness of {', '.join(missing)} (no .spec sidecar); "
            "pass --directed or --undirected"
        )
    return found.pop()


def _load(path: str, directed: bool) -> Graph:
    g = load_edge_list(path, directed=directed)
    spec = read_spec_sidecar(path)
    if spec is not None:
        g.metadata.setdefault("spec", spec.model_dump())
    return g


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, default=str))


def _emit_report(report: ExperimentReport, out: str | None, summary_out: str | None) -> None:
    if out:
        report.to_csv(out)
    else:
        sys.stdout.write(report.to_csv() or "")
    if summary_out:
        summarize_report(report).to_csv(summary_out, index=False, float_format="%.10g")


# ---------- commands ----------


def _block_sizes(args: argparse.Namespace) -> tuple[int, ...]:
    if args.blocks_file:
        text = Path(args.blocks_file).read_text(encoding="utf-8")
        try:
            sizes = [int(tok) for tok in text.replace(",", " ").split()]
        except ValueError as e:
            raise GraphDataError(f"{args.blocks_file}: block sizes must be integers ({e})") from e
    elif args.blocks:
        sizes = args.blocks
    else:
        sizes = sample_block_sizes(args.block_count, args.block_min, args.block_max, args.n, seed=args.seed)
    if not sizes:
        raise GraphDataError("no block sizes given")
    return tuple(sizes)


def _generator_spec(args: argparse.Namespace) -> GraphSpec:
    try:
        if args.model == "er":
            return ErSpec(n=args.n, p=args.p, directed=args.directed, seed=args.seed)
        if args.model == "sbm":
            return SbmSpec(
                block_sizes=_block_sizes(args), p_in=args.pin, p_out=args.pout,
                directed=args.directed, seed=args.seed,
            )
        return CmSpec(n=args.n, exponent=args.exponent, directed=args.directed, seed=args.seed)
    except GraphDataError:
        raise
    except ValueError as e:  # pydantic ValidationError or infeasible block bounds
        raise UsageError(f"invalid {args.model} parameters: {e}") from e


def cmd_generate(args: argparse.Namespace) -> int:
    spec = _generator_spec(args)

    g = generate(spec, threads=args.threads)
    write_edge_list(g, args.out)
    sidecar = write_spec_sidecar(spec, args.out)
    _print_json({
        "path": args.out,
        "spec_path": str(sidecar),
        "label": spec.label(),
        "nodes": g.n,
        "edges": g.number_of_edges,
        "spec": spec.model_dump(),
    })
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    directed = _resolve_directed(args.directed, [args.graph1, args.graph2])
    samples = [all_pairs_distances(_load(p, directed), args.threads) for p in (args.graph1, args.graph2)]
    result = ks_distance(*samples)

    for i, sample in enumerate(samples, start=1):
        if args.emit_cdf:
            write_ecdf_csv(sample, f"{args.emit_cdf}.g{i}.cdf.csv", args.grid)
        if args.emit_hist:
            write_histogram_csv(sample, f"{args.emit_hist}.g{i}.hist.csv", args.bins)

    _print_json(result.to_dict())
    return EXIT_OK


def cmd_sensitivity(args: argparse.Namespace) -> int:
    directed = _resolve_directed(args.directed, [args.graph])
    g = _load(args.graph, directed)
    report = run_sensitivity(
        g,
        descriptor=file_descriptor(args.graph),
        kind=args.kind,
        fractions=args.fractions,
        seeds=args.seeds,
        label=Path(args.graph).stem,
        threads=args.threads,
    )
    _emit_report(report, args.out, args.summary_out)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    report = reproduce_table(
        args.table_id,
        seed=args.seed,
        datasets=dict(args.dataset or []),
        n=args.n,
        seeds=args.seeds,
        threads=args.threads,
        jobs=args.jobs,
    )
    _emit_report(report, args.out, args.summary_out)
    return EXIT_OK


def cmd_lcc(args: argparse.Namespace) -> int:
    directed = _resolve_directed(args.directed, [args.graph])
    g = _load(args.graph, directed)
    lcc = largest_connected_component(g)
    write_edge_list(lcc, args.out)
    _print_json({"path": args.out, "nodes": lcc.n, "edges": lcc.number_of_edges, "source_nodes": g.n})
    return EXIT_OK


def cmd_dist(args: argparse.Namespace) -> int:
    directed = _resolve_directed(args.directed, [args.graph])
    sample = all_pairs_distances(_load(args.graph, directed), args.threads)
    if args.out:
        write_sample_csv(sample, args.out)
    if args.hist:
        write_histogram_csv(sample, args.hist, args.bins)
    if args.cdf:
        write_ecdf_csv(sample, args.cdf, args.grid)
    _print_json(sample_summary(sample))
    return EXIT_OK


def cmd_drift(args: argparse.Namespace) -> int:
    if len(args.graphs) < 2:
        raise UsageError("drift needs at least two snapshots")
    directed = _resolve_directed(args.directed, args.graphs)
    snapshots = [(Path(p).stem, _load(p, directed)) for p in args.graphs]
    table = snapshot_drift(snapshots, threshold=args.threshold, threads=args.threads)
    sys.stdout.write(table.to_csv(index=False, float_format="%.10g"))
    return EXIT_OK


# ---------- parser ----------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphdist", description="Graph similarity via Jaccard distance distributions and K-S")
    parser.add_argument("--threads", type=_positive_int, default=None,
                        help="kernel worker threads (default: GRAPHDIST_THREADS or all cores)")
    parser.add_argument("--log-level", type=str.upper, default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="logging level (default: GRAPHDIST_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="generate a random graph edge list plus .spec sidecar")
    models = gen.add_subparsers(dest="model", required=True, parser_class=_Parser)

    er = models.add_parser("er", help="Erdős–Rényi G(n, p)")
    er.add_argument("--n", type=_positive_int, required=True)
    er.add_argument("--p", type=_fraction, required=True)

    sbm = models.add_parser("sbm", help="stochastic block model (planted partition)")
    sbm.add_argument("--pin", type=_fraction, required=True)
    sbm.add_argument("--pout", type=_fraction, required=True)
    blocks = sbm.add_mutually_exclusive_group()
    blocks.add_argument("--blocks-file", help="file of whitespace/comma separated block sizes")
    blocks.add_argument("--blocks", type=_int_list, help="comma separated block sizes")
    sbm.add_argument("--n", type=_positive_int, default=3400, help="total nodes when sampling block sizes")
    sbm.add_argument("--block-count", type=_positive_int, default=45)
    sbm.add_argument("--block-min", type=_positive_int, default=50)
    sbm.add_argument("--block-max", type=_positive_int, default=99)

    cm = models.add_parser("cm", help="erased configuration model, power-law degrees")
    cm.add_argument("--n", type=_positive_int, required=True)
    cm.add_argument("--exponent", type=float, default=3.5)

    for model_parser in (er, sbm, cm):
        model_parser.add_argument("--directed", action="store_true")
        model_parser.add_argument("--seed", type=int, default=0)
        model_parser.add_argument("--out", required=True)
    gen.set_defaults(handler=cmd_generate)

    compare = sub.add_parser("compare", help="K-S distance between two graphs' distance samples")
    compare.add_argument("graph1")
    compare.add_argument("graph2")
    _add_direction_flags(compare)
    compare.add_argument("--emit-cdf", metavar="PREFIX", help="write PREFIX.g1.cdf.csv and PREFIX.g2.cdf.csv")
    compare.add_argument("--emit-hist", metavar="PREFIX", help="write PREFIX.g1.hist.csv and PREFIX.g2.hist.csv")
    compare.add_argument("--bins", type=_positive_int, default=None)
    compare.add_argument("--grid", type=_positive_int, default=None)
    compare.set_defaults(handler=cmd_compare)

    sens = sub.add_parser("sensitivity", help="compare a graph with node/edge-removed copies of itself")
    sens.add_argument("graph")
    _add_direction_flags(sens)
    sens.add_argument("--kind", choices=["node", "edge"], required=True)
    sens.add_argument("--fractions", type=_fraction_list, default=list(DEFAULT_FRACTIONS))
    sens.add_argument("--seeds", type=_int_list, default=[0], help="comma separated perturbation seeds")
    sens.add_argument("--out", help="report CSV (default: stdout)")
    sens.add_argument("--summary-out", help="median-over-seeds summary CSV")
    sens.set_defaults(handler=cmd_sensitivity)

    rep = sub.add_parser("reproduce", help="regenerate one of the catalogued tables")
    rep.add_argument("table_id", choices=list(TABLES))
    rep.add_argument("--seed", type=int, default=0, help="master seed")
    rep.add_argument("--dataset", type=_dataset_arg, action="append", metavar="NAME=PATH")
    rep.add_argument("--n", type=_positive_int, default=None, help="nodes per generated graph (default 3400)")
    rep.add_argument("--seeds", type=_positive_int, default=1, help="repetitions per row")
    rep.add_argument("--jobs", type=_positive_int, default=None, help="rows run concurrently")
    rep.add_argument("--out", help="report CSV (default: stdout)")
    rep.add_argument("--summary-out", help="median-over-seeds summary CSV")
    rep.set_defaults(handler=cmd_reproduce)

    lcc = sub.add_parser("lcc", help="extract the largest (weakly) connected component")
    lcc.add_argument("graph")
    _add_direction_flags(lcc)
    lcc.add_argument("--out", required=True)
    lcc.set_defaults(handler=cmd_lcc)

    dist = sub.add_parser("dist", help="emit a graph's distance sample, histogram and ECDF")
    dist.add_argument("graph")
    _add_direction_flags(dist)
    dist.add_argument("--out", help="sorted distances CSV (plus .json sidecar)")
    dist.add_argument("--hist", help="histogram CSV")
    dist.add_argument("--cdf", help="ECDF CSV")
    dist.add_argument("--bins", type=_positive_int, default=None)
    dist.add_argument("--grid", type=_positive_int, default=None)
    dist.set_defaults(handler=cmd_dist)

    drift = sub.add_parser("drift", help="K-S distance between consecutive graph snapshots")
    drift.add_argument("graphs", nargs="+")
    _add_direction_flags(drift)
    drift.add_argument("--threshold", type=float, default=DEFAULT_DRIFT_THRESHOLD)
    drift.set_defaults(handler=cmd_drift)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphDataError, OSError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
