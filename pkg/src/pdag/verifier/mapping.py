"""The mapping language: how abstract types, fluents, and actions read
in concrete terms.

A mapping file has three sections::

    types:
      abstractType -> concreteType | otherConcreteType
    fluents:
      abstractPred(?x, ?y) -> concretePred(?x, ?y) or otherPred(?y)
    actions:
      abstractAct(?x) -> firstStep(?x) ; pick ?v:ctype . secondStep(?x, ?v)

``;`` sequences bind tighter than ``|`` choice; ``pick ?v:type . body``
extends to the end of the enclosing group; formulas use not/and/or with
the usual precedence. ``#`` starts a comment. Bare names in argument
positions refer to concrete problem objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from ..pddl import DomainAst, Ident, ProblemAst
from .refinement import (
    Act,
    Arg,
    Choice,
    FAnd,
    FAtom,
    FNot,
    FOr,
    Formula,
    ObjRef,
    ParamRef,
    Pick,
    Program,
    Seq,
    formula_atoms,
    program_acts,
)


class MappingError(Exception):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("\n".join(problems))


@dataclass(frozen=True)
class FluentDef:
    params: tuple[Ident, ...]
    formula: Formula


@dataclass(frozen=True)
class ActionDef:
    params: tuple[Ident, ...]
    program: Program


@dataclass
class Mapping:
    types: dict[Ident, tuple[Ident, ...]]
    fluents: dict[Ident, FluentDef]
    actions: dict[Ident, ActionDef]
    source: Optional[str] = None
    constants: list[Ident] = field(default_factory=list)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<var>\?[A-Za-z_][A-Za-z0-9_\-]*)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_\-]*)"
    r"|(?P<punct>[(),;|.:]))"
)


class _ExprParser:
    def __init__(self, text: str, where: str, problems: list[str]):
        self.tokens: list[str] = []
        pos = 0
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            if match is None or match.end() == pos:
                rest = text[pos:].strip()
                if rest:
                    problems.append(f"{where}: cannot read {rest[:20]!r}")
                break
            self.tokens.append(match.group(0).strip())
            pos = match.end()
        self.pos = 0
        self.where = where
        self.problems = problems

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Optional[str]:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def expect(self, tok: str) -> bool:
        if self.peek() == tok:
            self.advance()
            return True
        self.problems.append(f"{self.where}: expected {tok!r}, found {self.peek()!r}")
        return False

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    # -- shared ---------------------------------------------------------

    def parse_args(self) -> tuple[Arg, ...]:
        if not self.expect("("):
            return ()
        args: list[Arg] = []
        if self.peek() == ")":
            self.advance()
            return ()
        while True:
            tok = self.advance()
            if tok is None:
                self.problems.append(f"{self.where}: unterminated argument list")
                return tuple(args)
            if tok.startswith("?"):
                args.append(ParamRef(Ident(tok[1:])))
            elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_\-]*", tok):
                args.append(ObjRef(Ident(tok)))
            else:
                self.problems.append(f"{self.where}: bad argument {tok!r}")
            nxt = self.advance()
            if nxt == ")":
                return tuple(args)
            if nxt != ",":
                self.problems.append(f"{self.where}: expected ',' or ')', found {nxt!r}")
                return tuple(args)

    # -- formulas ---------------------------------------------------------

    def parse_formula(self) -> Formula:
        return self._parse_or()

    def _parse_or(self) -> Formula:
        items = [self._parse_and()]
        while self.peek() == "or":
            self.advance()
            items.append(self._parse_and())
        return items[0] if len(items) == 1 else FOr(tuple(items))

    def _parse_and(self) -> Formula:
        items = [self._parse_not()]
        while self.peek() == "and":
            self.advance()
            items.append(self._parse_not())
        return items[0] if len(items) == 1 else FAnd(tuple(items))

    def _parse_not(self) -> Formula:
        if self.peek() == "not":
            self.advance()
            return FNot(self._parse_not())
        return self._parse_formula_atom()

    def _parse_formula_atom(self) -> Formula:
        tok = self.peek()
        if tok == "(":
            self.advance()
            inner = self._parse_or()
            self.expect(")")
            return inner
        name = self.advance()
        if name is None or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_\-]*", name):
            self.problems.append(f"{self.where}: expected a predicate, found {name!r}")
            return FAnd(())
        return FAtom(Ident(name), self.parse_args())

    # -- programs ---------------------------------------------------------

    def parse_program(self) -> Program:
        return self._parse_choice()

    def _parse_choice(self) -> Program:
        items = [self._parse_seq()]
        while self.peek() == "|":
            self.advance()
            items.append(self._parse_seq())
        return items[0] if len(items) == 1 else Choice(tuple(items))

    def _parse_seq(self) -> Program:
        items = [self._parse_unit()]
        while self.peek() == ";":
            self.advance()
            items.append(self._parse_unit())
        return items[0] if len(items) == 1 else Seq(tuple(items))

    def _parse_unit(self) -> Program:
        tok = self.peek()
        if tok == "(":
            self.advance()
            inner = self._parse_choice()
            self.expect(")")
            return inner
        if tok == "pick":
            self.advance()
            var = self.advance()
            if var is None or not var.startswith("?"):
                self.problems.append(f"{self.where}: pick needs a ?variable, found {var!r}")
                var = "?_"
            self.expect(":")
            typ = self.advance()
            if typ is None:
                self.problems.append(f"{self.where}: pick needs a type")
                typ = "object"
            self.expect(".")
            # the body runs to the end of the enclosing group
            body = self._parse_choice()
            return Pick(Ident(var[1:]), Ident(typ), body)
        name = self.advance()
        if name is None or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_\-]*", name):
            self.problems.append(f"{self.where}: expected an action, found {name!r}")
            return Choice(())
        return Act(Ident(name), self.parse_args())


def _strip_comment(line: str) -> str:
    idx = line.find("#")
    return line if idx < 0 else line[:idx]


def _split_sections(text: str, problems: list[str]) -> dict[str, list[tuple[int, str]]]:
    sections: dict[str, list[tuple[int, str]]] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line in ("types:", "fluents:", "actions:"):
            current = line[:-1]
            if current in sections:
                problems.append(f"line {lineno}: section {line!r} repeats")
            sections.setdefault(current, [])
            continue
        if current is None:
            problems.append(f"line {lineno}: {line!r} before any section header")
            continue
        rules = sections[current]
        if "->" in line:
            rules.append((lineno, line))
        elif rules:
            old_no, old = rules[-1]
            rules[-1] = (old_no, old + " " + line)
        else:
            problems.append(f"line {lineno}: {line!r} is not a rule")
    return sections


def _parse_header(lhs: str, where: str, problems: list[str]) -> tuple[Optional[Ident], tuple[Ident, ...]]:
    match = re.fullmatch(
        r"\s*([A-Za-z_][A-Za-z0-9_\-]*)\s*\(([^)]*)\)\s*", lhs
    )
    if match is None:
        problems.append(f"{where}: left side must look like name(?a, ?b)")
        return None, ()
    params = []
    body = match.group(2).strip()
    if body:
        for piece in body.split(","):
            piece = piece.strip()
            if not piece.startswith("?"):
                problems.append(f"{where}: parameter {piece!r} must start with '?'")
                continue
            params.append(Ident(piece[1:]))
    return Ident(match.group(1)), tuple(params)


def _closure(domain: DomainAst, types: tuple[Ident, ...]) -> set[Ident]:
    out: set[Ident] = set()
    for t in types:
        out |= domain.types.subtypes_of(t)
    return out


def parse_mapping(text: str, hl_domain: DomainAst, ll_domain: DomainAst, source: Optional[str] = None) -> Mapping:
    """Parse and check a mapping against both domains.

    Every abstract type, predicate, and action must be covered, arities
    must line up, and each argument slot must admit at least one
    concrete object type. Violations raise MappingError listing all of
    them; object constants are only resolvable per instance and are
    checked in check_instance.
    """
    problems: list[str] = []
    sections = _split_sections(text, problems)
    for required in ("types", "fluents", "actions"):
        if required not in sections:
            problems.append(f"missing required section {required}:")
    if problems and not all(s in sections for s in ("types", "fluents", "actions")):
        raise MappingError(problems)

    type_map: dict[Ident, tuple[Ident, ...]] = {}
    for lineno, rule in sections["types"]:
        where = f"line {lineno}"
        lhs, _, rhs = rule.partition("->")
        name = lhs.strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_\-]*", name):
            problems.append(f"{where}: bad type name {name!r}")
            continue
        targets = []
        for piece in rhs.split("|"):
            piece = piece.strip()
            if not piece:
                problems.append(f"{where}: empty type alternative")
                continue
            ident = Ident(piece)
            if not ll_domain.types.is_declared(ident):
                problems.append(f"{where}: {piece!r} is not a concrete type")
                continue
            targets.append(ident)
        key = Ident(name)
        if key in type_map:
            problems.append(f"{where}: type {name!r} mapped twice")
            continue
        if not hl_domain.types.is_declared(key):
            problems.append(f"{where}: {name!r} is not an abstract type")
            continue
        type_map[key] = tuple(targets)
    for t in hl_domain.types.declared:
        if t not in type_map:
            problems.append(f"abstract type {t.spelling!r} is not mapped")

    def slot_compatible(hl_type: Ident, want: Ident) -> bool:
        mapped = type_map.get(hl_type)
        if mapped is None:
            return True  # already reported as unmapped
        return bool(_closure(ll_domain, mapped) & ll_domain.types.subtypes_of(want))

    constants: list[Ident] = []

    fluents: dict[Ident, FluentDef] = {}
    for lineno, rule in sections["fluents"]:
        where = f"line {lineno}"
        lhs, _, rhs = rule.partition("->")
        name, params = _parse_header(lhs, where, problems)
        if name is None:
            continue
        schema = hl_domain.predicate(name)
        if schema is None:
            problems.append(f"{where}: {name.spelling!r} is not an abstract predicate")
            continue
        if name in fluents:
            problems.append(f"{where}: fluent {name.spelling!r} mapped twice")
            continue
        if len(params) != schema.arity:
            problems.append(
                f"{where}: {name.spelling!r} takes {schema.arity} parameter(s), header has {len(params)}"
            )
            continue
        parser = _ExprParser(rhs, where, problems)
        formula = parser.parse_formula()
        if not parser.at_end():
            problems.append(f"{where}: trailing input after formula")
        param_types = dict(zip(params, schema.param_types))
        for atom in formula_atoms(formula):
            ll_schema = ll_domain.predicate(atom.predicate)
            if ll_schema is None:
                problems.append(
                    f"{where}: {atom.predicate.spelling!r} is not a concrete predicate"
                )
                continue
            if len(atom.args) != ll_schema.arity:
                problems.append(
                    f"{where}: {atom.predicate.spelling!r} expects {ll_schema.arity} argument(s)"
                )
                continue
            for arg, want in zip(atom.args, ll_schema.param_types):
                if isinstance(arg, ObjRef):
                    constants.append(arg.name)
                    continue
                hl_type = param_types.get(arg.name)
                if hl_type is None:
                    problems.append(f"{where}: unknown parameter ?{arg.name.spelling}")
                elif not slot_compatible(hl_type, want):
                    problems.append(
                        f"{where}: ?{arg.name.spelling} can never have type {want.spelling!r}"
                    )
        fluents[name] = FluentDef(params, formula)
    for pred in hl_domain.predicates:
        if pred.name not in fluents:
            problems.append(f"abstract predicate {pred.name.spelling!r} is not mapped")

    actions: dict[Ident, ActionDef] = {}
    for lineno, rule in sections["actions"]:
        where = f"line {lineno}"
        lhs, _, rhs = rule.partition("->")
        name, params = _parse_header(lhs, where, problems)
        if name is None:
            continue
        schema = hl_domain.action(name)
        if schema is None:
            problems.append(f"{where}: {name.spelling!r} is not an abstract action")
            continue
        if name in actions:
            problems.append(f"{where}: action {name.spelling!r} mapped twice")
            continue
        if len(params) != schema.arity:
            problems.append(
                f"{where}: {name.spelling!r} takes {schema.arity} parameter(s), header has {len(params)}"
            )
            continue
        parser = _ExprParser(rhs, where, problems)
        program = parser.parse_program()
        if not parser.at_end():
            problems.append(f"{where}: trailing input after program")
        param_types = dict(zip(params, schema.param_types))
        for act, scope in program_acts(program):
            ll_schema = ll_domain.action(act.name)
            if ll_schema is None:
                problems.append(f"{where}: {act.name.spelling!r} is not a concrete action")
                continue
            if len(act.args) != ll_schema.arity:
                problems.append(
                    f"{where}: {act.name.spelling!r} expects {ll_schema.arity} argument(s)"
                )
                continue
            scope_types = dict(scope)
            for var, ll_type in scope:
                if not ll_domain.types.is_declared(ll_type):
                    problems.append(
                        f"{where}: pick type {ll_type.spelling!r} is not a concrete type"
                    )
            for arg, want in zip(act.args, ll_schema.param_types):
                if isinstance(arg, ObjRef):
                    constants.append(arg.name)
                    continue
                if arg.name in scope_types:
                    picked = scope_types[arg.name]
                    if ll_domain.types.is_declared(picked) and not (
                        ll_domain.types.subtypes_of(picked)
                        & ll_domain.types.subtypes_of(want)
                    ):
                        problems.append(
                            f"{where}: ?{arg.name.spelling} picked as {picked.spelling!r} "
                            f"can never have type {want.spelling!r}"
                        )
                    continue
                hl_type = param_types.get(arg.name)
                if hl_type is None:
                    problems.append(f"{where}: unknown parameter ?{arg.name.spelling}")
                elif not slot_compatible(hl_type, want):
                    problems.append(
                        f"{where}: ?{arg.name.spelling} can never have type {want.spelling!r}"
                    )
        actions[name] = ActionDef(params, program)
    for schema in hl_domain.actions:
        if schema.name not in actions:
            problems.append(f"abstract action {schema.name.spelling!r} is not mapped")

    if problems:
        raise MappingError(problems)
    return Mapping(
        types=type_map,
        fluents=fluents,
        actions=actions,
        source=source,
        constants=sorted(set(constants), key=lambda i: i.canonical),
    )


def check_instance(
    mapping: Mapping,
    hl_domain: DomainAst,
    ll_domain: DomainAst,
    hl_problem: ProblemAst,
    ll_problem: ProblemAst,
) -> list[str]:
    """Instance-level obligations: every abstract object must name a
    concrete object of a mapped type, and every constant written in the
    mapping must exist concretely."""
    problems: list[str] = []
    for obj, hl_type in hl_problem.objects:
        ll_type = ll_problem.type_of(obj)
        if ll_type is None:
            problems.append(f"abstract object {obj.spelling!r} has no concrete counterpart")
            continue
        mapped = mapping.types.get(hl_type)
        if mapped is None:
            continue
        if ll_type not in _closure(ll_domain, mapped):
            problems.append(
                f"object {obj.spelling!r} is {ll_type.spelling!r}, which none of the "
                f"mapped type(s) for {hl_type.spelling!r} covers"
            )
    for const in mapping.constants:
        if ll_problem.type_of(const) is None:
            problems.append(f"mapping names unknown object {const.spelling!r}")
    return problems
