"""Reachable labeled transition system of a ground task."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..pddl import GroundAtom
from .ground import GroundAction, GroundTask
from .search import NotApplicable, apply_action

LTS_STATE_LIMIT = 50_000


class LtsLimitExceeded(Exception):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"reachable state space exceeds {limit} states")


@dataclass
class Lts:
    """States in discovery order (index 0 is the initial state); ``out[i]``
    lists (action_index, successor_index) pairs in action order. Self-loops
    are kept: an applicable action that changes nothing is still a step."""

    task: GroundTask
    states: list[frozenset[GroundAtom]]
    out: list[list[tuple[int, int]]]
    index: dict[frozenset[GroundAtom], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {s: i for i, s in enumerate(self.states)}

    @property
    def actions(self) -> list[GroundAction]:
        return self.task.actions

    def __len__(self) -> int:
        return len(self.states)

    def successors(self, state_index: int, action_index: int) -> list[int]:
        return [dst for ai, dst in self.out[state_index] if ai == action_index]


def reachable_lts(task: GroundTask, max_states: int = LTS_STATE_LIMIT) -> Lts:
    """Breadth-first exploration from the initial state.

    Deterministic: states are numbered in discovery order and edges listed
    in ground-action order. Raises LtsLimitExceeded past ``max_states``.
    """
    init = task.init
    states = [init]
    index = {init: 0}
    out: list[list[tuple[int, int]]] = [[]]
    queue = deque([0])
    while queue:
        src = queue.popleft()
        state = states[src]
        edges = out[src]
        for action_idx, action in enumerate(task.actions):
            nxt = apply_action(state, action)
            if isinstance(nxt, NotApplicable):
                continue
            dst = index.get(nxt)
            if dst is None:
                if len(states) >= max_states:
                    raise LtsLimitExceeded(max_states)
                dst = len(states)
                index[nxt] = dst
                states.append(nxt)
                out.append([])
                queue.append(dst)
            edges.append((action_idx, dst))
    return Lts(task=task, states=states, out=out, index=index)
