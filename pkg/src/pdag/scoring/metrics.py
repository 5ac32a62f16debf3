"""Per-run scores and batch aggregates.

cn counts the change side of the rubric, auc the retain side; both are
pass fractions in [0, 1].  An item waiting on a human reviewer counts
as failed until someone resolves it, so automatic scores are lower
bounds.  The three flags are per-run booleans that aggregate to counts:
hde marks output a human had to repair before it parsed, fd marks runs
where no plan was found for the abstract instance, val marks output
that never became a valid domain and problem at all.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .checker import PASS, Verdict
from .rubric import Rubric


@dataclass(frozen=True)
class RunScore:
    cn: float
    auc: float
    hde: bool
    fd: bool
    val: bool

    def to_json(self) -> dict:
        return {
            "cn": self.cn,
            "auc": self.auc,
            "hde": self.hde,
            "fd": self.fd,
            "val": self.val,
        }

    @classmethod
    def from_json(cls, raw: dict) -> "RunScore":
        return cls(
            cn=raw["cn"], auc=raw["auc"], hde=raw["hde"], fd=raw["fd"], val=raw["val"]
        )


def score(
    rubric: Rubric,
    verdicts: list[Verdict],
    *,
    parse_ok: bool,
    plan_found: bool,
    human_syntax_flag: bool = False,
) -> RunScore:
    by_id = {verdict.item_id: verdict for verdict in verdicts}

    def fraction(side: str) -> float:
        items = [item for item in rubric.items if item.side == side]
        passed = sum(
            1
            for item in items
            if item.id in by_id and by_id[item.id].outcome == PASS
        )
        return passed / len(items)

    return RunScore(
        cn=fraction("change"),
        auc=fraction("retain"),
        hde=human_syntax_flag,
        fd=not plan_found,
        val=not parse_ok,
    )


@dataclass(frozen=True)
class Aggregate:
    cn_avg: float
    cn_sd: float
    auc_avg: float
    auc_sd: float
    hde_count: int
    fd_count: int
    val_count: int

    def to_json(self) -> dict:
        return {
            "cn_avg": self.cn_avg,
            "cn_sd": self.cn_sd,
            "auc_avg": self.auc_avg,
            "auc_sd": self.auc_sd,
            "hde_count": self.hde_count,
            "fd_count": self.fd_count,
            "val_count": self.val_count,
        }


def aggregate(runs: list[RunScore]) -> Aggregate:
    """Percent means and population standard deviations over a batch."""
    if not runs:
        raise ValueError("nothing to aggregate")
    cns = [run.cn for run in runs]
    aucs = [run.auc for run in runs]
    return Aggregate(
        cn_avg=statistics.fmean(cns) * 100.0,
        cn_sd=statistics.pstdev(cns) * 100.0,
        auc_avg=statistics.fmean(aucs) * 100.0,
        auc_sd=statistics.pstdev(aucs) * 100.0,
        hde_count=sum(run.hde for run in runs),
        fd_count=sum(run.fd for run in runs),
        val_count=sum(run.val for run in runs),
    )
