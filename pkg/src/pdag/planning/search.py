"""Forward state-space search: breadth-first and greedy best-first."""

from __future__ import annotations

import heapq
import time
from collections import deque
from dataclasses import dataclass
from math import inf

from ..pddl import GroundAtom
from .ground import GroundAction, GroundTask

SOLVE_TIMEOUT = 10.0

State = frozenset


@dataclass(frozen=True)
class NotApplicable:
    """First precondition fact (in declared order) absent from the state."""

    missing: GroundAtom


def apply_action(state: frozenset[GroundAtom], action: GroundAction):
    """Apply with delete-before-add semantics, or report why not."""
    for pre in action.precondition:
        if pre not in state:
            return NotApplicable(pre)
    return (state - action.del_effects) | action.add_effects


@dataclass
class Plan:
    steps: list[GroundAction]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class Unsolvable:
    pass


@dataclass
class LimitExceeded:
    reason: str


def _extract(parents, state) -> list[GroundAction]:
    steps = []
    while True:
        prev = parents[state]
        if prev is None:
            steps.reverse()
            return steps
        state, action = prev
        steps.append(action)


def _bfs(task: GroundTask, deadline: float):
    init = task.init
    if task.goal <= init:
        return Plan([])
    parents = {init: None}
    queue = deque([init])
    while queue:
        if time.monotonic() > deadline:
            return LimitExceeded("timeout")
        state = queue.popleft()
        for action in task.actions:
            nxt = apply_action(state, action)
            if isinstance(nxt, NotApplicable) or nxt in parents:
                continue
            parents[nxt] = (state, action)
            if task.goal <= nxt:
                return Plan(_extract(parents, nxt))
            queue.append(nxt)
    return Unsolvable()


def _relaxed_costs(task: GroundTask, state: frozenset[GroundAtom]) -> dict[GroundAtom, int]:
    cost: dict[GroundAtom, int] = {atom: 0 for atom in state}
    changed = True
    while changed:
        changed = False
        for action in task.actions:
            total = 0
            for pre in action.precondition:
                pre_cost = cost.get(pre)
                if pre_cost is None:
                    break
                total += pre_cost
            else:
                for added in action.add_effects:
                    candidate = total + 1
                    if cost.get(added, inf) > candidate:
                        cost[added] = candidate
                        changed = True
    return cost


def _h_add(task: GroundTask, state: frozenset[GroundAtom]) -> float:
    cost = _relaxed_costs(task, state)
    total = 0
    for goal_atom in task.goal:
        atom_cost = cost.get(goal_atom)
        if atom_cost is None:
            return inf
        total += atom_cost
    return total


def _greedy(task: GroundTask, deadline: float):
    init = task.init
    if task.goal <= init:
        return Plan([])
    h0 = _h_add(task, init)
    if h0 == inf:
        return Unsolvable()
    parents = {init: None}
    counter = 0
    # ties resolve FIFO, so successors pushed earlier (lower action index) win
    frontier = [(h0, counter, init)]
    while frontier:
        if time.monotonic() > deadline:
            return LimitExceeded("timeout")
        _, _, state = heapq.heappop(frontier)
        if task.goal <= state:
            return Plan(_extract(parents, state))
        for action in task.actions:
            nxt = apply_action(state, action)
            if isinstance(nxt, NotApplicable) or nxt in parents:
                continue
            parents[nxt] = (state, action)
            h = _h_add(task, nxt)
            if h == inf:
                continue
            counter += 1
            heapq.heappush(frontier, (h, counter, nxt))
    return Unsolvable()


def solve(task: GroundTask, strategy: str = "bfs", timeout: float = SOLVE_TIMEOUT):
    """Search for a plan; bfs answers are shortest, greedy answers are checked.

    Returns Plan, Unsolvable, or LimitExceeded.
    """
    deadline = time.monotonic() + timeout
    if strategy == "bfs":
        return _bfs(task, deadline)
    if strategy == "greedy":
        result = _greedy(task, deadline)
        if isinstance(result, Plan):
            from .validate import Valid, validate_plan

            verdict = validate_plan(task, result.steps)
            assert isinstance(verdict, Valid), verdict
        return result
    raise ValueError(f"unknown strategy {strategy!r}")
