"""Plan validation and the line-per-step plan text format."""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..pddl import GroundAtom, Ident
from .ground import GroundAction, GroundTask
from .search import NotApplicable, apply_action


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class FailsAtStep:
    """Step ``index`` (0-based) is inapplicable; ``missing`` is the first
    absent precondition in declared order."""

    index: int
    missing: GroundAtom


@dataclass(frozen=True)
class GoalUnsatisfied:
    missing: frozenset[GroundAtom]


def validate_plan(task: GroundTask, steps: list[GroundAction]):
    state = task.init
    for index, action in enumerate(steps):
        nxt = apply_action(state, action)
        if isinstance(nxt, NotApplicable):
            return FailsAtStep(index, nxt.missing)
        state = nxt
    unmet = task.goal - state
    if unmet:
        return GoalUnsatisfied(frozenset(unmet))
    return Valid()


def format_plan(steps: list[GroundAction]) -> str:
    return "\n".join(a.signature for a in steps) + ("\n" if steps else "")


class PlanFormatError(Exception):
    pass


def parse_plan(text: str, task: GroundTask) -> list[GroundAction]:
    """Read one ``(action obj ...)`` per line, matching case-insensitively
    against the task's ground actions."""
    index: dict[tuple[Ident, tuple[Ident, ...]], GroundAction] = {
        (a.name, a.args): a for a in task.actions
    }
    steps: list[GroundAction] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise PlanFormatError(f"line {lineno}: expected '(action obj ...)', got {raw!r}")
        parts = line[1:-1].split()
        if not parts:
            raise PlanFormatError(f"line {lineno}: empty step")
        key = (Ident(parts[0]), tuple(Ident(p) for p in parts[1:]))
        action = index.get(key)
        if action is None:
            raise PlanFormatError(f"line {lineno}: no ground action matches {line}")
        steps.append(action)
    return steps


def verdict_to_json(verdict) -> str:
    if isinstance(verdict, Valid):
        doc = {"verdict": "valid"}
    elif isinstance(verdict, FailsAtStep):
        doc = {
            "verdict": "fails-at-step",
            "step": verdict.index,
            "missing": str(verdict.missing),
        }
    elif isinstance(verdict, GoalUnsatisfied):
        doc = {
            "verdict": "goal-unsatisfied",
            "missing": sorted(str(a) for a in verdict.missing),
        }
    else:
        raise TypeError(f"not a validation verdict: {verdict!r}")
    return json.dumps(doc, indent=2, sort_keys=True)
