"""Turn stored run records into the delimited table, the CSV, and the figure."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..scoring import RunScore, aggregate, render_csv, render_figure, render_report
from .store import RunStore


class ReportError(Exception):
    pass


@dataclass(frozen=True)
class ReportResult:
    text: str
    table_path: Path
    csv_path: Path
    figure_path: Path


def build_report(store: RunStore, benchmark: str | None = None) -> ReportResult:
    """Aggregate every stored run, one row per benchmark, and write all three outputs."""
    records = store.list_runs(benchmark)
    if not records:
        which = f" for benchmark {benchmark!r}" if benchmark else ""
        raise ReportError(f"no runs{which} in {store.root}")
    by_benchmark: dict[str, list[RunScore]] = {}
    for record in records:
        by_benchmark.setdefault(record["benchmark"], []).append(
            RunScore.from_json(record["score"])
        )
    rows = [(name, aggregate(scores)) for name, scores in sorted(by_benchmark.items())]
    store.ensure_layout()
    text = render_report(rows)
    table_path = store.reports_dir / "report.txt"
    csv_path = store.reports_dir / "report.csv"
    table_path.write_text(text, encoding="utf-8")
    csv_path.write_text(render_csv(rows), encoding="utf-8")
    figure_path = render_figure(rows, store.reports_dir / "report.png")
    return ReportResult(text=text, table_path=table_path, csv_path=csv_path, figure_path=figure_path)
