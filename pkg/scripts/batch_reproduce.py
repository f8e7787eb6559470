"""Batch reproduction: regenerate every synthetic table (and real-world ones when datasets are given).

Usage:
    python scripts/batch_reproduce.py --seed 7 --label run1
    python scripts/batch_reproduce.py --tables t1,t2 --seeds 5 --label hard-cases
    python scripts/batch_reproduce.py --n 400 --label smoke
    python scripts/batch_reproduce.py --tables rw-nodes,rw-edges \
        --dataset email-eu-core=email-Eu-core.txt --dataset wiki-vote=wiki-Vote.txt ...
"""

import argparse
import json
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from app.config import settings
from app.exceptions import GraphDistError
from app.services.experiments.runner import reproduce_table, summarize_report
from app.services.experiments.tables import TABLES
from app.services.stats.ks import format_p_value

logger = logging.getLogger(__name__)

SYNTHETIC_TABLES = ["t1", "t2", "t3", "t4", "t5", "t6"]


def format_summary_table(summaries: dict[str, list[dict]], errors: dict[str, str]) -> str:
    """Markdown table of median D per table row, next to the published value."""
    lines = []
    lines.append("# Batch Reproduction Results")
    lines.append("")
    lines.append(f"Generated: {datetime.now(timezone.utc).strftime('%Y-%m-%d %H:%M UTC')}")
    lines.append("")
    lines.append("| Table | Row | Kind | Fraction | Reps | Median D | Median p | Published | Check |")
    lines.append("|-------|-----|------|----------|------|----------|----------|-----------|-------|")

    passed = failed = unchecked = 0
    for table_id, rows in summaries.items():
        for r in rows:
            fraction = "" if r["fraction"] is None else f"{r['fraction']:g}"
            published = "" if r["published_value"] is None else f"{r['published_value']:g}"
            lines.append(
                f"| {table_id} | {r['row']} | {r['kind'] or '-'} | {fraction} | "
                f"{r['reps']} | {r['d_median']:.4f} | {format_p_value(r['p_median'])} | {published} | {r['check']} |"
            )
            if r["check"] == "pass":
                passed += 1
            elif r["check"] == "fail":
                failed += 1
            else:
                unchecked += 1
    for table_id, message in errors.items():
        lines.append(f"| {table_id} | ERROR: {message} | - | - | - | - | - | - | - |")

    lines.append("")
    lines.append("## Summary")
    lines.append("")
    lines.append(f"- **Tables**: {len(summaries)} reproduced, {len(errors)} errors")
    lines.append(f"- **Checks**: {passed} pass, {failed} fail, {unchecked} unchecked")
    return "\n".join(lines)


def _records(df) -> list[dict]:
    """DataFrame rows as JSON-safe dicts (NaN -> None)."""
    return json.loads(df.to_json(orient="records"))


def run_batch(args: argparse.Namespace) -> None:
    table_ids = [t for t in args.tables.split(",") if t] if args.tables else SYNTHETIC_TABLES
    unknown = [t for t in table_ids if t not in TABLES]
    if unknown:
        print(f"Unknown tables: {', '.join(unknown)}", file=sys.stderr)
        sys.exit(1)
    datasets = dict(item.split("=", 1) for item in args.dataset or [])

    timestamp = datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S")
    label = args.label or f"batch_seed{args.seed}"
    results_dir = Path(args.results_dir or settings.results_dir)
    results_dir.mkdir(parents=True, exist_ok=True)

    print(f"Batch reproduction: {len(table_ids)} tables, seed={args.seed}, reps={args.seeds}")
    summaries: dict[str, list[dict]] = {}
    errors: dict[str, str] = {}
    batch_start = time.time()

    for i, table_id in enumerate(table_ids, start=1):
        t0 = time.time()
        prefix = f"[{i}/{len(table_ids)}] {table_id}"
        try:
            report = reproduce_table(
                table_id, seed=args.seed, datasets=datasets, n=args.n,
                seeds=args.seeds, threads=args.threads, jobs=args.jobs,
            )
        except GraphDistError as e:
            print(f"{prefix} ... ERROR: {e} ({time.time() - t0:.1f}s)")
            errors[table_id] = str(e)
            continue

        report.to_csv(results_dir / f"{label}_{table_id}_{timestamp}.csv")
        summaries[table_id] = _records(summarize_report(report))
        print(
            f"{prefix} ... {len(report.rows)} rows, {len(report.failures)} outside tolerance "
            f"({time.time() - t0:.1f}s)"
        )

    print(f"\nBatch complete: {len(summaries)} tables in {time.time() - batch_start:.1f}s")

    json_path = results_dir / f"{label}_{timestamp}.json"
    md_path = results_dir / f"{label}_{timestamp}.md"
    with open(json_path, "w") as f:
        json.dump({
            "label": label,
            "seed": args.seed,
            "seeds": args.seeds,
            "n": args.n,
            "timestamp": timestamp,
            "summaries": summaries,
            "errors": errors,
        }, f, indent=2)
    with open(md_path, "w") as f:
        f.write(format_summary_table(summaries, errors))

    print(f"JSON: {json_path}")
    print(f"Summary: {md_path}")


def main() -> None:
    logging.basicConfig(
        level=logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    parser = argparse.ArgumentParser(description="Reproduce the comparison and sensitivity tables in one run")
    parser.add_argument("--tables", help=f"comma separated table ids (default: {','.join(SYNTHETIC_TABLES)})")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--seeds", type=int, default=1, help="repetitions per row")
    parser.add_argument("--n", type=int, default=None, help="nodes per generated graph (default 3400)")
    parser.add_argument("--dataset", action="append", metavar="NAME=PATH")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--jobs", type=int, default=None)
    parser.add_argument("--label", help="prefix for result files")
    parser.add_argument("--results-dir", help="output directory (default: GRAPHDIST_RESULTS_DIR or results)")
    run_batch(parser.parse_args())


if __name__ == "__main__":
    main()
