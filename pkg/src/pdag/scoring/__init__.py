"""Rubric-based judging of generated abstractions and batch metrics."""

from .checker import (
    FAIL,
    NEEDS_HUMAN,
    PASS,
    Verdict,
    check_rubric,
    failed_verdicts,
    type_correspondence,
)
from .figures import render_figure
from .metrics import Aggregate, RunScore, aggregate, score
from .report import COLUMNS, render_csv, render_report
from .rubric import (
    CHANGE_KINDS,
    RETAIN_KINDS,
    Rubric,
    RubricError,
    RubricItem,
    load_rubric,
    validate_rubric,
)

__all__ = [
    "Aggregate",
    "CHANGE_KINDS",
    "COLUMNS",
    "FAIL",
    "NEEDS_HUMAN",
    "PASS",
    "RETAIN_KINDS",
    "Rubric",
    "RubricError",
    "RubricItem",
    "RunScore",
    "Verdict",
    "aggregate",
    "check_rubric",
    "failed_verdicts",
    "load_rubric",
    "render_csv",
    "render_figure",
    "render_report",
    "score",
    "type_correspondence",
    "validate_rubric",
]
