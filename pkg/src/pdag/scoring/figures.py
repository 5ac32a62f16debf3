"""Result figure: grouped bars with spread whiskers, written to a file."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .report import Row


def render_figure(rows: list[Row], path: Path) -> Path:
    """Bar chart of per-benchmark averages, one PNG on disk."""
    names = [name for name, _ in rows]
    positions = range(len(rows))
    bar_width = 0.38
    fig, ax = plt.subplots(figsize=(max(6.0, 1.6 * len(rows) + 2.0), 4.0))
    ax.bar(
        [p - bar_width / 2 for p in positions],
        [agg.cn_avg for _, agg in rows],
        bar_width,
        yerr=[agg.cn_sd for _, agg in rows],
        capsize=3,
        label="CN(avg)",
    )
    ax.bar(
        [p + bar_width / 2 for p in positions],
        [agg.auc_avg for _, agg in rows],
        bar_width,
        yerr=[agg.auc_sd for _, agg in rows],
        capsize=3,
        label="AUC(avg)",
    )
    ax.set_xticks(list(positions))
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylim(0, 105)
    ax.set_ylabel("percent")
    ax.legend(loc="lower right")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="png", dpi=120)
    plt.close(fig)
    return path
