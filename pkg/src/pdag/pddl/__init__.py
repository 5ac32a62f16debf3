"""Typed STRIPS fragment of PDDL: lexer, parser, checker, printer."""

from .ast import (
    ActionSchema,
    Atom,
    Const,
    DomainAst,
    GroundAtom,
    Ident,
    PredicateSchema,
    ProblemAst,
    Term,
    TypeHierarchy,
    Var,
)
from .diagnostics import Diagnostic, Severity, Span
from .parser import (
    ParseError,
    parse_domain,
    parse_domain_with_diagnostics,
    parse_problem,
    parse_problem_with_diagnostics,
)
from .printer import print_domain, print_problem

__all__ = [
    "ActionSchema",
    "Atom",
    "Const",
    "Diagnostic",
    "DomainAst",
    "GroundAtom",
    "Ident",
    "ParseError",
    "PredicateSchema",
    "ProblemAst",
    "Severity",
    "Span",
    "Term",
    "TypeHierarchy",
    "Var",
    "parse_domain",
    "parse_domain_with_diagnostics",
    "parse_problem",
    "parse_problem_with_diagnostics",
    "print_domain",
    "print_problem",
]
