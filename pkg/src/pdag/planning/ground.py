"""Type-consistent instantiation of action schemas over problem objects."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod

from ..pddl import Atom, DomainAst, GroundAtom, Ident, ProblemAst, Var

GROUND_LIMIT = 10**6


class GroundingLimitExceeded(Exception):
    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f"grounding would produce {count} actions (limit {limit})")


@dataclass(frozen=True)
class GroundAction:
    """One instantiated action. Preconditions keep their declared order so
    applicability failures can name the first missing fact."""

    name: Ident
    args: tuple[Ident, ...]
    precondition: tuple[GroundAtom, ...]
    add_effects: frozenset[GroundAtom]
    del_effects: frozenset[GroundAtom]
    pre_set: frozenset[GroundAtom] = field(compare=False, hash=False, default=frozenset())

    def __post_init__(self) -> None:
        object.__setattr__(self, "pre_set", frozenset(self.precondition))

    @property
    def signature(self) -> str:
        return "(" + " ".join([self.name.spelling] + [a.spelling for a in self.args]) + ")"

    def __str__(self) -> str:
        return self.signature


@dataclass
class GroundTask:
    domain: DomainAst
    problem: ProblemAst
    actions: list[GroundAction]
    init: frozenset[GroundAtom]
    goal: frozenset[GroundAtom]

    def atom_universe(self) -> list[GroundAtom]:
        """Every well-typed ground atom, in predicate declaration order."""
        out: list[GroundAtom] = []
        for schema in self.domain.predicates:
            pools = [
                self.problem.objects_of_types([want], self.domain.types)
                for _, want in schema.params
            ]
            for combo in itertools.product(*pools):
                out.append(GroundAtom(schema.name, tuple(combo)))
        return out


def _substitute(atom: Atom, binding: dict[Ident, Ident]) -> GroundAtom:
    args = []
    for term in atom.terms:
        assert isinstance(term, Var)
        args.append(binding[term.name])
    return GroundAtom(atom.predicate, tuple(args))


def ground(domain: DomainAst, problem: ProblemAst, limit: int = GROUND_LIMIT) -> GroundTask:
    """Instantiate every schema over type-compatible objects.

    Candidate objects keep problem declaration order, so the resulting
    action list is deterministic. Bindings under which an action would
    both add and delete the same atom are skipped. Raises
    GroundingLimitExceeded before instantiating if the combination
    count would exceed ``limit``.
    """
    pools_per_schema = []
    total = 0
    for schema in domain.actions:
        pools = [
            problem.objects_of_types([want], domain.types)
            for _, want in schema.params
        ]
        pools_per_schema.append(pools)
        total += prod(len(pool) for pool in pools)
    if total > limit:
        raise GroundingLimitExceeded(total, limit)

    actions: list[GroundAction] = []
    for schema, pools in zip(domain.actions, pools_per_schema):
        names = [v for v, _ in schema.params]
        for combo in itertools.product(*pools):
            binding = dict(zip(names, combo))
            pre = tuple(_substitute(a, binding) for a in schema.precondition)
            adds = frozenset(_substitute(a, binding) for a in schema.add_effects)
            dels = frozenset(_substitute(a, binding) for a in schema.del_effects)
            if adds & dels:
                # delete-before-add would leave the atom true; bindings that
                # collide add and delete are excluded so ordering never matters
                continue
            actions.append(
                GroundAction(
                    name=schema.name,
                    args=tuple(combo),
                    precondition=pre,
                    add_effects=adds,
                    del_effects=dels,
                )
            )
    return GroundTask(
        domain=domain,
        problem=problem,
        actions=actions,
        init=frozenset(problem.init),
        goal=frozenset(problem.goal),
    )


def static_predicates(domain: DomainAst) -> set[Ident]:
    """Predicates no action ever adds or deletes."""
    touched: set[Ident] = set()
    for action in domain.actions:
        for atom in action.add_effects + action.del_effects:
            touched.add(atom.predicate)
    return {p.name for p in domain.predicates} - touched
