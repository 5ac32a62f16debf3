"""Batch result tables.

One row per benchmark: averages and spreads as percent with two
decimals, flags as plain counts.  The plain-text table pads only the
benchmark column and separates the value columns with two spaces, so a
row is easy to grep and easy to diff; the CSV carries the exact same
formatted values.
"""

from __future__ import annotations

import csv
import io

from .metrics import Aggregate

COLUMNS = ("benchmark", "CN(avg)", "CN-SD", "AUC(avg)", "AUC-SD", "HDE", "FD", "VAL")

Row = tuple[str, Aggregate]


def _values(agg: Aggregate) -> list[str]:
    return [
        f"{agg.cn_avg:.2f}",
        f"{agg.cn_sd:.2f}",
        f"{agg.auc_avg:.2f}",
        f"{agg.auc_sd:.2f}",
        str(agg.hde_count),
        str(agg.fd_count),
        str(agg.val_count),
    ]


def render_report(rows: list[Row]) -> str:
    width = max(len(COLUMNS[0]), *(len(name) for name, _ in rows)) if rows else len(COLUMNS[0])
    lines = ["  ".join([COLUMNS[0].ljust(width), *COLUMNS[1:]])]
    for name, agg in rows:
        lines.append("  ".join([name.ljust(width), *_values(agg)]))
    return "\n".join(lines) + "\n"


def render_csv(rows: list[Row]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    for name, agg in rows:
        writer.writerow([name, *_values(agg)])
    return out.getvalue()
