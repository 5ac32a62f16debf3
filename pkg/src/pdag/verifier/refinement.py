"""Syntax trees for refinement programs and fluent formulas.

A refinement program says how one abstract action unfolds into concrete
ones: a single step (Act), steps in order (Seq), branching (Choice), or
binding a concrete-only object (Pick). Programs are loop-free. A fluent
formula gives the concrete truth condition of one abstract predicate.
Arguments are either bound parameters (ParamRef) or concrete problem
objects named outright (ObjRef).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..pddl import Ident


@dataclass(frozen=True)
class ParamRef:
    name: Ident

    def __str__(self) -> str:
        return f"?{self.name.spelling}"


@dataclass(frozen=True)
class ObjRef:
    name: Ident

    def __str__(self) -> str:
        return self.name.spelling


Arg = Union[ParamRef, ObjRef]


# -- formulas ---------------------------------------------------------


@dataclass(frozen=True)
class FAtom:
    predicate: Ident
    args: tuple[Arg, ...]

    def __str__(self) -> str:
        inner = ", ".join(str(a) for a in self.args)
        return f"{self.predicate.spelling}({inner})"


@dataclass(frozen=True)
class FAnd:
    items: tuple["Formula", ...]

    def __str__(self) -> str:
        return "(" + " and ".join(str(i) for i in self.items) + ")"


@dataclass(frozen=True)
class FOr:
    items: tuple["Formula", ...]

    def __str__(self) -> str:
        return "(" + " or ".join(str(i) for i in self.items) + ")"


@dataclass(frozen=True)
class FNot:
    item: "Formula"

    def __str__(self) -> str:
        return f"not {self.item}"


Formula = Union[FAtom, FAnd, FOr, FNot]


# -- programs ---------------------------------------------------------


@dataclass(frozen=True)
class Act:
    name: Ident
    args: tuple[Arg, ...]

    def __str__(self) -> str:
        inner = ", ".join(str(a) for a in self.args)
        return f"{self.name.spelling}({inner})"


@dataclass(frozen=True)
class Seq:
    items: tuple["Program", ...]

    def __str__(self) -> str:
        if not self.items:
            return "skip"
        return "(" + " ; ".join(str(i) for i in self.items) + ")"


@dataclass(frozen=True)
class Choice:
    items: tuple["Program", ...]

    def __str__(self) -> str:
        if not self.items:
            return "fail"
        return "(" + " | ".join(str(i) for i in self.items) + ")"


@dataclass(frozen=True)
class Pick:
    var: Ident
    ll_type: Ident
    body: "Program"

    def __str__(self) -> str:
        return f"pick ?{self.var.spelling}:{self.ll_type.spelling} . {self.body}"


Program = Union[Act, Seq, Choice, Pick]


def formula_atoms(formula: Formula) -> list[FAtom]:
    if isinstance(formula, FAtom):
        return [formula]
    if isinstance(formula, FNot):
        return formula_atoms(formula.item)
    out: list[FAtom] = []
    for item in formula.items:
        out.extend(formula_atoms(item))
    return out


def program_acts(program: Program) -> list[tuple[Act, tuple[tuple[Ident, Ident], ...]]]:
    """Every Act with the pick bindings (var, ll_type) in scope around it."""

    def walk(node: Program, scope: tuple[tuple[Ident, Ident], ...]):
        if isinstance(node, Act):
            yield node, scope
        elif isinstance(node, Pick):
            yield from walk(node.body, scope + ((node.var, node.ll_type),))
        else:
            for item in node.items:
                yield from walk(item, scope)

    return list(walk(program, ()))
