"""Grounding, forward search, plan validation, and reachable transition systems."""

from .ground import (
    GroundAction,
    GroundTask,
    GroundingLimitExceeded,
    ground,
    static_predicates,
)
from .lts import Lts, LtsLimitExceeded, reachable_lts
from .search import LimitExceeded, NotApplicable, Plan, Unsolvable, apply_action, solve
from .validate import (
    FailsAtStep,
    GoalUnsatisfied,
    PlanFormatError,
    Valid,
    format_plan,
    parse_plan,
    validate_plan,
)

__all__ = [
    "FailsAtStep",
    "GoalUnsatisfied",
    "GroundAction",
    "GroundTask",
    "GroundingLimitExceeded",
    "LimitExceeded",
    "Lts",
    "LtsLimitExceeded",
    "NotApplicable",
    "Plan",
    "PlanFormatError",
    "Unsolvable",
    "Valid",
    "apply_action",
    "format_plan",
    "ground",
    "parse_plan",
    "reachable_lts",
    "solve",
    "static_predicates",
    "validate_plan",
]
