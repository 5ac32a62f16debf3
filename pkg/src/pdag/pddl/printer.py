"""Canonical PDDL layout.

One construct per line, two-space indent, preconditions and effects always
wrapped in ``(and ...)``. Identifier spellings are preserved exactly as
declared, so printing never changes how a name reads, only where it sits.
Reparsing printed output yields a structurally identical AST.
"""

from __future__ import annotations

from .ast import (
    OBJECT_IDENT,
    ActionSchema,
    Atom,
    DomainAst,
    GroundAtom,
    Ident,
    ProblemAst,
)


def _atom(atom: Atom) -> str:
    parts = [atom.predicate.spelling] + [str(t) for t in atom.terms]
    return "(" + " ".join(parts) + ")"


def _ground_atom(atom: GroundAtom) -> str:
    parts = [atom.predicate.spelling] + [a.spelling for a in atom.args]
    return "(" + " ".join(parts) + ")"


def _typed_groups(pairs: list[tuple[str, Ident]]) -> list[str]:
    """Render ``name - type`` pairs, merging consecutive same-type runs."""
    groups: list[str] = []
    run: list[str] = []
    run_type: Ident | None = None
    for name, typ in pairs:
        if run and typ != run_type:
            groups.append(" ".join(run) + " - " + run_type.spelling)
            run = []
        run.append(name)
        run_type = typ
    if run:
        groups.append(" ".join(run) + " - " + run_type.spelling)
    return groups


def _params(schema_params: tuple[tuple[Ident, Ident], ...]) -> str:
    pairs = [("?" + v.spelling, t) for v, t in schema_params]
    return "(" + " ".join(_typed_groups(pairs)) + ")"


def _action(action: ActionSchema) -> list[str]:
    lines = [f"  (:action {action.name.spelling}"]
    lines.append(f"    :parameters {_params(action.params)}")
    lines.append("    :precondition (and")
    for atom in action.precondition:
        lines.append(f"      {_atom(atom)}")
    lines[-1] += ")"
    lines.append("    :effect (and")
    for atom in action.add_effects:
        lines.append(f"      {_atom(atom)}")
    for atom in action.del_effects:
        lines.append(f"      (not {_atom(atom)})")
    lines[-1] += "))"
    return lines


def print_domain(domain: DomainAst) -> str:
    lines = [f"(define (domain {domain.name.spelling})"]
    if domain.requirements:
        reqs = " ".join(":" + r for r in sorted(domain.requirements))
        lines.append(f"  (:requirements {reqs})")
    declared = [t for t in domain.types.declared if t != OBJECT_IDENT]
    if declared:
        lines.append("  (:types")
        pairs = [
            (t.spelling, domain.types.parent_of(t) or OBJECT_IDENT) for t in declared
        ]
        for group in _typed_groups(pairs):
            lines.append(f"    {group}")
        lines[-1] += ")"
    lines.append("  (:predicates")
    for pred in domain.predicates:
        if pred.params:
            body = pred.name.spelling + " " + " ".join(
                _typed_groups([("?" + v.spelling, t) for v, t in pred.params])
            )
        else:
            body = pred.name.spelling
        lines.append(f"    ({body})")
    lines[-1] += ")"
    for action in domain.actions:
        lines.extend(_action(action))
    lines.append(")")
    return "\n".join(lines) + "\n"


def print_problem(problem: ProblemAst) -> str:
    lines = [f"(define (problem {problem.name.spelling})"]
    lines.append(f"  (:domain {problem.domain_name.spelling})")
    if problem.objects:
        lines.append("  (:objects")
        pairs = [(o.spelling, t) for o, t in problem.objects]
        for group in _typed_groups(pairs):
            lines.append(f"    {group}")
        lines[-1] += ")"
    else:
        lines.append("  (:objects)")
    lines.append("  (:init")
    for atom in problem.init:
        lines.append(f"    {_ground_atom(atom)}")
    lines[-1] += ")"
    lines.append("  (:goal (and")
    for atom in problem.goal:
        lines.append(f"    {_ground_atom(atom)}")
    lines[-1] += "))"
    lines.append(")")
    return "\n".join(lines) + "\n"
