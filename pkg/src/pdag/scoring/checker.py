"""Automatic rubric judging.

The judge never relies on abstract names matching concrete ones on the
change side: a model is free to call a merged action anything it likes.
Instead it builds a type correspondence from the shared objects (both
listings describe the same instance, so an object that survives tells
us which abstract type its concrete type became) and compares parameter
signatures through that correspondence.  Retain-side items do hold the
model to names: keeping something means keeping it recognizable.
"""

from __future__ import annotations

import functools
import operator
from collections import Counter
from dataclasses import dataclass, field

from ..pddl import DomainAst, Ident, ProblemAst
from ..planning import GroundingLimitExceeded, Plan, Unsolvable, ground, solve
from .rubric import Rubric, RubricItem

PASS = "pass"
FAIL = "fail"
NEEDS_HUMAN = "needs-human"


@dataclass
class Verdict:
    item_id: str
    outcome: str
    evidence: str
    resolved_by: str = "auto"

    def to_json(self) -> dict:
        return {
            "item": self.item_id,
            "outcome": self.outcome,
            "evidence": self.evidence,
            "resolved_by": self.resolved_by,
        }

    @classmethod
    def from_json(cls, raw: dict) -> "Verdict":
        return cls(
            item_id=raw["item"],
            outcome=raw["outcome"],
            evidence=raw.get("evidence", ""),
            resolved_by=raw.get("resolved_by", "auto"),
        )


class _NoEvidence(Exception):
    """No object of the type exists, so the instance cannot tell us
    what the type became."""

    def __init__(self, ll_type: Ident):
        self.ll_type = ll_type
        super().__init__(str(ll_type))


class _Ambiguous(Exception):
    """Objects of one concrete type landed in several abstract types."""

    def __init__(self, ll_type: Ident, images: set[Ident]):
        self.ll_type = ll_type
        self.images = images
        super().__init__(str(ll_type))


def type_correspondence(
    hl_problem: ProblemAst, ll_problem: ProblemAst
) -> dict[Ident, set[Ident]]:
    """For each concrete type with objects, the set of abstract types
    its objects were given.  Objects absent from the abstract listing
    contribute nothing, so a fully dropped type maps to the empty set.
    """
    corr: dict[Ident, set[Ident]] = {}
    for obj, ll_type in ll_problem.objects:
        images = corr.setdefault(ll_type, set())
        hl_type = hl_problem.type_of(obj)
        if hl_type is not None:
            images.add(hl_type)
    return corr


def _image(ll_type: Ident, corr: dict[Ident, set[Ident]]) -> Ident | None:
    """Single abstract image of a concrete type, None when dropped."""
    if ll_type not in corr:
        raise _NoEvidence(ll_type)
    images = corr[ll_type]
    if len(images) > 1:
        raise _Ambiguous(ll_type, images)
    return next(iter(images)) if images else None


def _mapped_counter(
    param_types: tuple[Ident, ...], corr: dict[Ident, set[Ident]]
) -> Counter:
    """Parameter signature pushed through the correspondence.  Dropped
    types vanish, so the counter is what the signature should look like
    abstractly."""
    counter: Counter = Counter()
    for ll_type in param_types:
        image = _image(ll_type, corr)
        if image is not None:
            counter[image] += 1
    return counter


def _signature(counter: Counter) -> str:
    if not counter:
        return "()"
    parts = []
    for name in sorted(counter, key=str):
        count = counter[name]
        parts.append(f"{name}" if count == 1 else f"{name} x{count}")
    return "(" + ", ".join(parts) + ")"


def _names(idents) -> str:
    return ", ".join(sorted(str(i) for i in idents))


@dataclass
class _Judge:
    hl_domain: DomainAst
    hl_problem: ProblemAst
    ll_domain: DomainAst
    ll_problem: ProblemAst
    corr: dict[Ident, set[Ident]] = field(init=False)

    def __post_init__(self):
        self.corr = type_correspondence(self.hl_problem, self.ll_problem)

    # -- change side -------------------------------------------------

    def _merge_schemas(self, item: RubricItem, schemas, pool, what: str) -> Verdict:
        # one signature per source, plus their union: a merge of
        # alternatives keeps the shared signature, a merge of a sequence
        # aggregates the parameters of all its steps
        signatures = [_mapped_counter(s.param_types, self.corr) for s in schemas]
        signatures.append(functools.reduce(operator.or_, signatures, Counter()))
        wanted = []
        for signature in signatures:
            if signature not in wanted:
                wanted.append(signature)
        candidates = []
        for signature in wanted:
            matches = [s for s in pool if Counter(s.param_types) == signature]
            if len(matches) > 1:
                return Verdict(
                    item.id,
                    NEEDS_HUMAN,
                    f"{len(matches)} {what}s share the signature "
                    f"{_signature(signature)}: {_names(m.name for m in matches)}",
                )
            for match in matches:
                if match not in candidates:
                    candidates.append(match)
        names = _names(s.name for s in candidates)
        if len(candidates) == item.expected:
            return Verdict(item.id, PASS, f"merged into {what} {names}")
        if candidates:
            return Verdict(
                item.id,
                FAIL,
                f"{len(candidates)} {what}s match the source signatures "
                f"({names}), expected {item.expected}",
            )
        return Verdict(
            item.id,
            FAIL,
            f"no {what} matches any merge signature (expected {item.expected})",
        )

    def merge_actions(self, item: RubricItem) -> Verdict:
        schemas = [self.ll_domain.action(Ident(s)) for s in item.sources]
        return self._merge_schemas(item, schemas, self.hl_domain.actions, "action")

    def merge_predicates(self, item: RubricItem) -> Verdict:
        schemas = [self.ll_domain.predicate(Ident(s)) for s in item.sources]
        return self._merge_schemas(item, schemas, self.hl_domain.predicates, "predicate")

    def merge_types(self, item: RubricItem) -> Verdict:
        witnesses = [
            obj
            for obj, ll_type in self.ll_problem.objects
            if any(ll_type == Ident(s) for s in item.sources)
        ]
        if not witnesses:
            raise _NoEvidence(Ident(item.sources[0]))
        missing = [obj for obj in witnesses if self.hl_problem.type_of(obj) is None]
        if missing:
            return Verdict(
                item.id, FAIL, f"objects vanished instead of merging: {_names(missing)}"
            )
        images = {self.hl_problem.type_of(obj) for obj in witnesses}
        if len(images) == item.expected:
            return Verdict(item.id, PASS, f"objects now share type {_names(images)}")
        return Verdict(
            item.id,
            FAIL,
            f"objects span {len(images)} type(s) {_names(images)}, expected {item.expected}",
        )

    def remove_type(self, item: RubricItem) -> Verdict:
        witnesses = [
            obj for obj, ll_type in self.ll_problem.objects if ll_type == Ident(item.name)
        ]
        if not witnesses:
            raise _NoEvidence(Ident(item.name))
        survivors = [obj for obj in witnesses if self.hl_problem.type_of(obj) is not None]
        if survivors:
            return Verdict(
                item.id, FAIL, f"objects of the type survive: {_names(survivors)}"
            )
        return Verdict(item.id, PASS, f"all objects gone: {_names(witnesses)}")

    def _remove_schema(self, item: RubricItem, schema, pool, what: str) -> Verdict:
        mapped = _mapped_counter(schema.param_types, self.corr)
        alive = [s for s in pool if Counter(s.param_types) == mapped]
        if alive:
            return Verdict(
                item.id,
                FAIL,
                f"still present as {what} {_names(s.name for s in alive)} "
                f"{_signature(mapped)}",
            )
        return Verdict(item.id, PASS, f"no {what} has signature {_signature(mapped)}")

    def remove_action(self, item: RubricItem) -> Verdict:
        schema = self.ll_domain.action(Ident(item.name))
        return self._remove_schema(item, schema, self.hl_domain.actions, "action")

    def remove_predicate(self, item: RubricItem) -> Verdict:
        schema = self.ll_domain.predicate(Ident(item.name))
        return self._remove_schema(item, schema, self.hl_domain.predicates, "predicate")

    def drop_parameter(self, item: RubricItem) -> Verdict:
        schema = self.ll_domain.action(Ident(item.owner))
        image = _image(Ident(item.param_type), self.corr)
        full = _mapped_counter(schema.param_types, self.corr)
        reduced = full.copy()
        if image is not None:
            if any(Counter(s.param_types) == full for s in self.hl_domain.actions):
                return Verdict(
                    item.id,
                    FAIL,
                    f"an action still carries the full signature {_signature(full)}",
                )
            reduced[image] -= 1
            if reduced[image] == 0:
                del reduced[image]
        kept = [s for s in self.hl_domain.actions if Counter(s.param_types) == reduced]
        names = _names(s.name for s in kept)
        if len(kept) == 1:
            return Verdict(
                item.id, PASS, f"kept as {names} without the {item.param_type} parameter"
            )
        if len(kept) > 1:
            return Verdict(
                item.id,
                NEEDS_HUMAN,
                f"{len(kept)} actions match the reduced signature "
                f"{_signature(reduced)}: {names}",
            )
        return Verdict(
            item.id,
            FAIL,
            f"no action matches the reduced signature {_signature(reduced)}",
        )

    # -- retain side -------------------------------------------------

    def retain_type(self, item: RubricItem) -> Verdict:
        if self.hl_domain.types.is_declared(Ident(item.name)):
            return Verdict(item.id, PASS, "type declared")
        return Verdict(item.id, FAIL, f"type {item.name!r} is gone")

    def _retain_schema(self, item: RubricItem, ll_schema, hl_schema, what: str) -> Verdict:
        if hl_schema is None:
            return Verdict(item.id, FAIL, f"{what} {item.name!r} is gone")
        if hl_schema.param_types != ll_schema.param_types:
            return Verdict(
                item.id,
                FAIL,
                f"{what} {item.name!r} changed signature: "
                f"{_signature(Counter(hl_schema.param_types))} instead of "
                f"{_signature(Counter(ll_schema.param_types))}",
            )
        return Verdict(item.id, PASS, f"{what} kept with the same signature")

    def retain_action(self, item: RubricItem) -> Verdict:
        name = Ident(item.name)
        return self._retain_schema(
            item, self.ll_domain.action(name), self.hl_domain.action(name), "action"
        )

    def retain_predicate(self, item: RubricItem) -> Verdict:
        name = Ident(item.name)
        return self._retain_schema(
            item, self.ll_domain.predicate(name), self.hl_domain.predicate(name), "predicate"
        )

    def retain_objects(self, item: RubricItem) -> Verdict:
        problems = []
        for raw in item.objects:
            obj = Ident(raw)
            hl_type = self.hl_problem.type_of(obj)
            ll_type = self.ll_problem.type_of(obj)
            if hl_type is None:
                problems.append(f"{obj} is gone")
            elif hl_type != ll_type:
                problems.append(f"{obj} became {hl_type} (was {ll_type})")
        if problems:
            return Verdict(item.id, FAIL, "; ".join(problems))
        return Verdict(item.id, PASS, f"all {len(item.objects)} objects kept")

    def goal_consistent(self, item: RubricItem) -> Verdict:
        try:
            task = ground(self.hl_domain, self.hl_problem)
        except GroundingLimitExceeded as err:
            return Verdict(item.id, FAIL, f"does not ground: {err}")
        result = solve(task)
        if isinstance(result, Plan):
            return Verdict(item.id, PASS, f"goal reachable in {len(result)} step(s)")
        if isinstance(result, Unsolvable):
            return Verdict(item.id, FAIL, "goal unreachable")
        return Verdict(item.id, FAIL, f"search gave up: {result.reason}")


_HANDLERS = {
    "merge-actions": _Judge.merge_actions,
    "merge-predicates": _Judge.merge_predicates,
    "merge-types": _Judge.merge_types,
    "remove-type": _Judge.remove_type,
    "remove-action": _Judge.remove_action,
    "remove-predicate": _Judge.remove_predicate,
    "drop-parameter": _Judge.drop_parameter,
    "retain-type": _Judge.retain_type,
    "retain-action": _Judge.retain_action,
    "retain-predicate": _Judge.retain_predicate,
    "retain-objects": _Judge.retain_objects,
    "goal-consistent": _Judge.goal_consistent,
}


def check_rubric(
    hl_domain: DomainAst,
    hl_problem: ProblemAst,
    ll_domain: DomainAst,
    ll_problem: ProblemAst,
    rubric: Rubric,
) -> list[Verdict]:
    """Judge every rubric item against an abstract domain and problem."""
    judge = _Judge(hl_domain, hl_problem, ll_domain, ll_problem)
    verdicts = []
    for item in rubric.items:
        try:
            verdicts.append(_HANDLERS[item.kind](judge, item))
        except _NoEvidence as gap:
            verdicts.append(
                Verdict(
                    item.id,
                    NEEDS_HUMAN,
                    f"no object of type {gap.ll_type!r} to judge by",
                )
            )
        except _Ambiguous as gap:
            verdicts.append(
                Verdict(
                    item.id,
                    NEEDS_HUMAN,
                    f"objects of type {gap.ll_type!r} split across "
                    f"{_names(gap.images)}",
                )
            )
    return verdicts


def failed_verdicts(rubric: Rubric, reason: str) -> list[Verdict]:
    """Uniform all-fail verdicts, for output that never parsed."""
    return [Verdict(item.id, FAIL, reason) for item in rubric.items]
