"""Syntax trees for the typed STRIPS fragment.

Identifiers compare case-insensitively but remember their original
spelling, because the benchmark corpus freely mixes capitalizations of
the same name (e.g. ``pendingWorkShopRequest`` vs
``pendingWorkshopRequest``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

OBJECT = "object"


@dataclass(frozen=True)
class Ident:
    """Case-preserving identifier; equality and hashing use the lowercase form."""

    spelling: str

    @property
    def canonical(self) -> str:
        return self.spelling.lower()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Ident):
            return self.canonical == other.canonical
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __str__(self) -> str:
        return self.spelling

    def __repr__(self) -> str:
        return f"Ident({self.spelling!r})"


OBJECT_IDENT = Ident(OBJECT)


class Term:
    """Either a variable or an object constant appearing in an atom."""

    __slots__ = ()


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: Ident

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True, eq=True)
class Const(Term):
    name: Ident

    def __str__(self) -> str:
        return str(self.name)


@dataclass(frozen=True)
class Atom:
    """Lifted atom: predicate applied to variables/constants."""

    predicate: Ident
    terms: tuple[Term, ...]

    def __str__(self) -> str:
        if not self.terms:
            return f"({self.predicate})"
        return f"({self.predicate} {' '.join(str(t) for t in self.terms)})"


@dataclass(frozen=True)
class GroundAtom:
    """Fully instantiated atom: predicate applied to object names."""

    predicate: Ident
    args: tuple[Ident, ...]

    def __str__(self) -> str:
        if not self.args:
            return f"({self.predicate})"
        return f"({self.predicate} {' '.join(str(a) for a in self.args)})"


class TypeHierarchy:
    """Type forest rooted at ``object``; subtype queries are transitive."""

    def __init__(self) -> None:
        self._parent: dict[Ident, Ident] = {}
        self._order: list[Ident] = []

    def declare(self, name: Ident, parent: Optional[Ident] = None) -> None:
        if name == OBJECT_IDENT:
            return
        if name not in self._parent:
            self._order.append(name)
        self._parent[name] = parent if parent is not None else OBJECT_IDENT

    @property
    def declared(self) -> list[Ident]:
        return list(self._order)

    def is_declared(self, name: Ident) -> bool:
        return name == OBJECT_IDENT or name in self._parent

    def parent_of(self, name: Ident) -> Optional[Ident]:
        if name == OBJECT_IDENT:
            return None
        return self._parent.get(name)

    def is_subtype(self, sub: Ident, sup: Ident) -> bool:
        if sup == OBJECT_IDENT:
            return self.is_declared(sub)
        cur: Optional[Ident] = sub
        seen: set[Ident] = set()
        while cur is not None and cur not in seen:
            if cur == sup:
                return True
            seen.add(cur)
            cur = self.parent_of(cur)
        return False

    def subtypes_of(self, sup: Ident) -> set[Ident]:
        """All declared types at or below ``sup`` (``object`` included for the root)."""
        result = {t for t in self._order if self.is_subtype(t, sup)}
        if sup == OBJECT_IDENT:
            result.add(OBJECT_IDENT)
        elif self.is_declared(sup):
            result.add(sup)
        return result

    def find_cycle(self) -> Optional[Ident]:
        for name in self._order:
            cur: Optional[Ident] = name
            seen: set[Ident] = set()
            while cur is not None and cur != OBJECT_IDENT:
                if cur in seen:
                    return name
                seen.add(cur)
                cur = self._parent.get(cur)
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TypeHierarchy):
            return NotImplemented
        return self._parent == other._parent and self._order == other._order

    def __repr__(self) -> str:
        pairs = ", ".join(f"{n}->{p}" for n, p in self._parent.items())
        return f"TypeHierarchy({pairs})"


@dataclass(frozen=True)
class PredicateSchema:
    name: Ident
    params: tuple[tuple[Ident, Ident], ...]  # (variable name, type name)

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def param_types(self) -> tuple[Ident, ...]:
        return tuple(t for _, t in self.params)


@dataclass(frozen=True)
class ActionSchema:
    name: Ident
    params: tuple[tuple[Ident, Ident], ...]
    precondition: tuple[Atom, ...]
    add_effects: tuple[Atom, ...]
    del_effects: tuple[Atom, ...]

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def param_types(self) -> tuple[Ident, ...]:
        return tuple(t for _, t in self.params)


@dataclass
class DomainAst:
    name: Ident
    requirements: frozenset[str]
    types: TypeHierarchy
    predicates: list[PredicateSchema]
    actions: list[ActionSchema]
    _pred_index: dict[Ident, PredicateSchema] = field(
        default_factory=dict, compare=False, repr=False
    )
    _action_index: dict[Ident, ActionSchema] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        self._pred_index = {p.name: p for p in self.predicates}
        self._action_index = {a.name: a for a in self.actions}

    def predicate(self, name: Ident) -> Optional[PredicateSchema]:
        return self._pred_index.get(name)

    def action(self, name: Ident) -> Optional[ActionSchema]:
        return self._action_index.get(name)


@dataclass
class ProblemAst:
    name: Ident
    domain_name: Ident
    objects: list[tuple[Ident, Ident]]  # (object name, type name) in declaration order
    init: list[GroundAtom]
    goal: list[GroundAtom]
    _object_index: dict[Ident, Ident] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        self._object_index = {name: typ for name, typ in self.objects}

    def type_of(self, obj: Ident) -> Optional[Ident]:
        return self._object_index.get(obj)

    def objects_of_types(self, types: Iterable[Ident], hierarchy: TypeHierarchy) -> list[Ident]:
        wanted = set(types)
        out = []
        for name, typ in self.objects:
            if any(hierarchy.is_subtype(typ, w) for w in wanted):
                out.append(name)
        return out
