"""Rubric files: the changes a correct abstraction must make and the
elements it must leave alone.

A rubric is a JSON document with a benchmark id and a list of items.
Change-side kinds (merge-actions, merge-predicates, merge-types,
remove-type, remove-action, remove-predicate, drop-parameter) describe
what must differ from the concrete domain; retain-side kinds
(retain-type, retain-action, retain-predicate, retain-objects,
goal-consistent) describe what must survive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..pddl import DomainAst, Ident, ProblemAst

SCHEMA_VERSION = 1

CHANGE_KINDS = frozenset(
    {
        "merge-actions",
        "merge-predicates",
        "merge-types",
        "remove-type",
        "remove-action",
        "remove-predicate",
        "drop-parameter",
    }
)
RETAIN_KINDS = frozenset(
    {"retain-type", "retain-action", "retain-predicate", "retain-objects", "goal-consistent"}
)


class RubricError(Exception):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("\n".join(problems))


@dataclass(frozen=True)
class RubricItem:
    id: str
    kind: str
    sources: tuple[str, ...] = ()
    expected: int = 0
    name: str = ""
    owner: str = ""
    param_type: str = ""
    objects: tuple[str, ...] = ()

    @property
    def side(self) -> str:
        return "change" if self.kind in CHANGE_KINDS else "retain"


@dataclass(frozen=True)
class Rubric:
    benchmark: str
    items: tuple[RubricItem, ...]

    def item(self, item_id: str) -> RubricItem | None:
        for item in self.items:
            if item.id == item_id:
                return item
        return None


def _item_from_json(raw: dict, where: str, problems: list[str]) -> RubricItem | None:
    item_id = raw.get("id")
    kind = raw.get("kind")
    if not isinstance(item_id, str) or not item_id:
        problems.append(f"{where}: item has no id")
        return None
    if kind not in CHANGE_KINDS | RETAIN_KINDS:
        problems.append(f"{where}: unknown kind {kind!r}")
        return None

    def need(field: str, typ) -> bool:
        value = raw.get(field)
        ok = isinstance(value, typ) and (typ is int or bool(value))
        if ok and typ is list:
            ok = all(isinstance(entry, str) and entry for entry in value)
        if not ok:
            problems.append(f"{where}: {kind} item {item_id!r} needs {field!r}")
            return False
        return True

    sources: tuple[str, ...] = ()
    expected = 0
    name = owner = param_type = ""
    objects: tuple[str, ...] = ()
    if kind.startswith("merge-"):
        if not (need("sources", list) and need("expected", int)):
            return None
        sources = tuple(raw["sources"])
        expected = raw["expected"]
        if len(sources) < 2:
            problems.append(f"{where}: item {item_id!r} merges fewer than two sources")
            return None
        if expected < 1:
            problems.append(f"{where}: item {item_id!r} expects fewer than one result")
            return None
    elif kind == "drop-parameter":
        if not (need("owner", str) and need("type", str)):
            return None
        owner = raw["owner"]
        param_type = raw["type"]
    elif kind == "retain-objects":
        if not need("objects", list):
            return None
        objects = tuple(raw["objects"])
    elif kind != "goal-consistent":
        if not need("name", str):
            return None
        name = raw["name"]
    return RubricItem(
        id=item_id,
        kind=kind,
        sources=sources,
        expected=expected,
        name=name,
        owner=owner,
        param_type=param_type,
        objects=objects,
    )


def load_rubric(text: str, where: str = "rubric") -> Rubric:
    """Parse and schema-check one rubric document."""
    problems: list[str] = []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise RubricError([f"{where}: not valid JSON: {err}"]) from err
    if not isinstance(doc, dict):
        raise RubricError([f"{where}: top level must be an object"])
    if doc.get("schema_version") != SCHEMA_VERSION:
        problems.append(f"{where}: schema_version must be {SCHEMA_VERSION}")
    benchmark = doc.get("benchmark")
    if not isinstance(benchmark, str) or not benchmark:
        problems.append(f"{where}: missing benchmark id")
        benchmark = ""
    raw_items = doc.get("items")
    items: list[RubricItem] = []
    if not isinstance(raw_items, list):
        problems.append(f"{where}: missing items list")
    else:
        for raw in raw_items:
            item = _item_from_json(raw, where, problems)
            if item is not None:
                items.append(item)
    ids = [item.id for item in items]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        problems.append(f"{where}: duplicate item id {dup!r}")
    if not problems:
        if not any(item.side == "change" for item in items):
            problems.append(f"{where}: no change-side items")
        if not any(item.side == "retain" for item in items):
            problems.append(f"{where}: no retain-side items")
    if problems:
        raise RubricError(problems)
    return Rubric(benchmark=benchmark, items=tuple(items))


def validate_rubric(rubric: Rubric, ll_domain: DomainAst, ll_problem: ProblemAst) -> list[str]:
    """Every name a rubric references must exist concretely."""
    problems: list[str] = []

    def check_type(name: str, item: RubricItem) -> None:
        if not ll_domain.types.is_declared(Ident(name)):
            problems.append(f"item {item.id!r}: unknown type {name!r}")

    def check_action(name: str, item: RubricItem) -> None:
        if ll_domain.action(Ident(name)) is None:
            problems.append(f"item {item.id!r}: unknown action {name!r}")

    def check_predicate(name: str, item: RubricItem) -> None:
        if ll_domain.predicate(Ident(name)) is None:
            problems.append(f"item {item.id!r}: unknown predicate {name!r}")

    for item in rubric.items:
        if item.kind == "merge-actions":
            for source in item.sources:
                check_action(source, item)
        elif item.kind == "merge-predicates":
            for source in item.sources:
                check_predicate(source, item)
        elif item.kind == "merge-types":
            for source in item.sources:
                check_type(source, item)
        elif item.kind in ("remove-type", "retain-type"):
            check_type(item.name, item)
        elif item.kind in ("remove-action", "retain-action"):
            check_action(item.name, item)
        elif item.kind in ("remove-predicate", "retain-predicate"):
            check_predicate(item.name, item)
        elif item.kind == "drop-parameter":
            check_type(item.param_type, item)
            schema = ll_domain.action(Ident(item.owner))
            if schema is None:
                problems.append(f"item {item.id!r}: unknown action {item.owner!r}")
            elif Ident(item.param_type) not in schema.param_types:
                problems.append(
                    f"item {item.id!r}: {item.owner!r} has no {item.param_type!r} parameter"
                )
        elif item.kind == "retain-objects":
            for obj in item.objects:
                if ll_problem.type_of(Ident(obj)) is None:
                    problems.append(f"item {item.id!r}: unknown object {obj!r}")
    return problems
