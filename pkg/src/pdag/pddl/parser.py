"""Recursive-descent parser and semantic checker for the STRIPS fragment.

The accepted grammar is deliberately small: conjunctive positive
preconditions, add/delete effects, conjunctive ground goals, and a type
forest rooted at ``object``. Anything beyond that (``or``, ``when``,
``either``, quantifiers, negated preconditions or goals, extra
``:requirements``) is rejected with a targeted diagnostic instead of a
generic syntax error, because generated PDDL tends to smuggle exactly
those constructs in.

Recovery happens at top-level form boundaries: each ``(:...)`` section is
sliced out by paren matching and parsed independently, so one faulty
section does not mask diagnostics in the others.
"""

from __future__ import annotations

from typing import Optional

from .ast import (
    OBJECT_IDENT,
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
from .diagnostics import Diagnostic, Severity, Span, error
from .lexer import Token, TokenKind, tokenize

UNSUPPORTED_CONNECTIVES = {
    "or", "when", "either", "exists", "forall", "imply", "oneof",
}
UNSUPPORTED_SECTIONS = {
    "constants", "functions", "constraints", "derived", "metric",
    "durative-action", "axiom",
}


class ParseError(Exception):
    """Parsing or checking failed; carries every diagnostic collected."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics[:3]))


class _TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[min(self.pos, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return tok

    def at(self, kind: TokenKind) -> bool:
        return self.peek().kind == kind

    def at_eof(self) -> bool:
        return self.peek().kind == TokenKind.EOF


class _FormAbort(Exception):
    """Internal: abandon the current form after recording a diagnostic."""


class _Parser:
    def __init__(self, source: str):
        tokens, diagnostics = tokenize(source)
        self.ts = _TokenStream(tokens)
        self.diags: list[Diagnostic] = list(diagnostics)

    # -- primitives ---------------------------------------------------

    def fail(self, code: str, message: str, span: Optional[Span] = None) -> _FormAbort:
        self.diags.append(error(code, message, span or self.ts.peek().span))
        return _FormAbort()

    def expect(self, kind: TokenKind, what: str) -> Token:
        tok = self.ts.peek()
        if tok.kind != kind:
            if tok.kind == TokenKind.EOF:
                raise self.fail("unbalanced-paren", f"unexpected end of input, expected {what}")
            raise self.fail("syntax-error", f"expected {what}, found {tok.text!r}")
        return self.ts.advance()

    def expect_name(self, expected: Optional[str] = None, what: str = "name") -> Token:
        tok = self.expect(TokenKind.NAME, what)
        if expected is not None and tok.text.lower() != expected:
            raise self.fail("syntax-error", f"expected {expected!r}, found {tok.text!r}", tok.span)
        return tok

    def skip_form(self) -> None:
        """Consume tokens up to and including the RPAREN matching depth 0.

        Assumes the opening LPAREN of the form was already consumed.
        """
        depth = 1
        while depth > 0:
            tok = self.ts.peek()
            if tok.kind == TokenKind.EOF:
                self.diags.append(
                    error("unbalanced-paren", "unexpected end of input inside a form", tok.span)
                )
                return
            self.ts.advance()
            if tok.kind == TokenKind.LPAREN:
                depth += 1
            elif tok.kind == TokenKind.RPAREN:
                depth -= 1

    def close_form(self) -> None:
        tok = self.ts.peek()
        if tok.kind == TokenKind.RPAREN:
            self.ts.advance()
            return
        if tok.kind == TokenKind.EOF:
            raise self.fail("unbalanced-paren", "missing ')' before end of input", tok.span)
        raise self.fail("syntax-error", f"expected ')', found {tok.text!r}", tok.span)

    # -- shared pieces ------------------------------------------------

    def parse_typed_items(
        self, item_kind: TokenKind, what: str
    ) -> list[tuple[Token, Optional[Token]]]:
        """Parse ``item+ (- type)?`` groups until RPAREN; returns (item, type) pairs.

        The type token is None for items in a trailing untyped group.
        """
        out: list[tuple[Token, Optional[Token]]] = []
        pending: list[Token] = []
        while True:
            tok = self.ts.peek()
            if tok.kind == TokenKind.RPAREN:
                out.extend((item, None) for item in pending)
                return out
            if tok.kind == TokenKind.EOF:
                out.extend((item, None) for item in pending)
                raise self.fail("unbalanced-paren", f"unexpected end of input in {what} list")
            if tok.kind == item_kind:
                pending.append(self.ts.advance())
                continue
            if tok.kind == TokenKind.DASH:
                dash = self.ts.advance()
                if not pending:
                    raise self.fail("syntax-error", "'-' with nothing to type", dash.span)
                type_tok = self.expect(TokenKind.NAME, "type name")
                out.extend((item, type_tok) for item in pending)
                pending = []
                continue
            raise self.fail(
                "syntax-error", f"unexpected {tok.text!r} in {what} list", tok.span
            )

    def parse_atom(self, context: str) -> tuple[Ident, list[Term], Span]:
        open_tok = self.expect(TokenKind.LPAREN, "'('")
        name_tok = self.ts.peek()
        if name_tok.kind == TokenKind.KEYWORD:
            raise self.fail(
                "unbalanced-paren",
                f"{name_tok.text!r} found inside {context}; a ')' is probably missing",
                name_tok.span,
            )
        name = self.expect(TokenKind.NAME, "predicate name").text
        lowered = name.lower()
        if lowered in UNSUPPORTED_CONNECTIVES or lowered in ("and", "not"):
            raise self.fail(
                "unsupported-construct",
                f"{name!r} is not allowed in {context}",
                self.ts.tokens[self.ts.pos - 1].span,
            )
        terms: list[Term] = []
        while True:
            tok = self.ts.peek()
            if tok.kind == TokenKind.RPAREN:
                self.ts.advance()
                return Ident(name), terms, open_tok.span
            if tok.kind == TokenKind.VARIABLE:
                terms.append(Var(Ident(self.ts.advance().value)))
            elif tok.kind == TokenKind.NAME:
                terms.append(Const(Ident(self.ts.advance().text)))
            elif tok.kind == TokenKind.EOF:
                raise self.fail("unbalanced-paren", "unexpected end of input inside an atom")
            else:
                raise self.fail(
                    "syntax-error", f"unexpected {tok.text!r} inside an atom", tok.span
                )

    def parse_conjunction(self, context: str, allow_not: bool) -> list[tuple[bool, Atom, Span]]:
        """Parse an atom or an (and ...) of atoms; returns (negated, atom, span) triples.

        With ``allow_not`` false a negation is an unsupported construct;
        otherwise ``(not atom)`` yields a negated entry (effects only).
        Nested ``and`` forms are flattened.
        """
        self.expect(TokenKind.LPAREN, "'('")
        head = self.ts.peek()
        if head.kind == TokenKind.NAME and head.text.lower() in UNSUPPORTED_CONNECTIVES:
            self.diags.append(
                error(
                    "unsupported-construct",
                    f"{head.text!r} is outside the supported STRIPS fragment",
                    head.span,
                )
            )
            self.ts.advance()
            self._skip_to_close()
            return []
        if head.kind == TokenKind.NAME and head.text.lower() == "not":
            if not allow_not:
                self.diags.append(
                    error(
                        "unsupported-construct",
                        f"negation is not allowed in {context}",
                        head.span,
                    )
                )
                self.ts.advance()
                self._skip_to_close()
                return []
            self.ts.advance()
            name, terms, span = self.parse_atom(context)
            self.close_form()
            return [(True, Atom(name, tuple(terms)), span)]
        if head.kind == TokenKind.NAME and head.text.lower() == "and":
            self.ts.advance()
            items: list[tuple[bool, Atom, Span]] = []
            while True:
                tok = self.ts.peek()
                if tok.kind == TokenKind.RPAREN:
                    self.ts.advance()
                    return items
                if tok.kind == TokenKind.EOF:
                    raise self.fail(
                        "unbalanced-paren", f"unexpected end of input in {context}"
                    )
                if tok.kind == TokenKind.KEYWORD:
                    # A section keyword inside a conjunction means a ')' was
                    # dropped earlier; recover by ending the conjunction here
                    # so the keyword's own section still gets parsed.
                    self.diags.append(
                        error(
                            "unbalanced-paren",
                            f"{tok.text!r} found inside {context}; a ')' is probably missing",
                            tok.span,
                        )
                    )
                    return items
                if tok.kind != TokenKind.LPAREN:
                    raise self.fail(
                        "syntax-error", f"unexpected {tok.text!r} in {context}", tok.span
                    )
                items.extend(self.parse_conjunction(context, allow_not))
            # unreachable
        # bare atom; the opening paren was already consumed
        if head.kind == TokenKind.KEYWORD:
            raise self.fail(
                "unbalanced-paren",
                f"{head.text!r} found inside {context}; a ')' is probably missing",
                head.span,
            )
        name = self.expect(TokenKind.NAME, "predicate name").text
        terms: list[Term] = []
        while not self.ts.at(TokenKind.RPAREN):
            tok = self.ts.peek()
            if tok.kind == TokenKind.VARIABLE:
                terms.append(Var(Ident(self.ts.advance().value)))
            elif tok.kind == TokenKind.NAME:
                terms.append(Const(Ident(self.ts.advance().text)))
            elif tok.kind == TokenKind.EOF:
                raise self.fail("unbalanced-paren", f"unexpected end of input in {context}")
            else:
                raise self.fail(
                    "syntax-error", f"unexpected {tok.text!r} inside an atom", tok.span
                )
        self.ts.advance()
        return [(False, Atom(Ident(name), tuple(terms)), head.span)]

    def _skip_to_close(self) -> None:
        depth = 1
        while depth > 0:
            tok = self.ts.peek()
            if tok.kind == TokenKind.EOF:
                self.diags.append(
                    error("unbalanced-paren", "unexpected end of input inside a form", tok.span)
                )
                return
            self.ts.advance()
            if tok.kind == TokenKind.LPAREN:
                depth += 1
            elif tok.kind == TokenKind.RPAREN:
                depth -= 1


def _has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity == Severity.ERROR for d in diags)


# -- domains ---------------------------------------------------------


def parse_domain_with_diagnostics(
    source: str,
) -> tuple[Optional[DomainAst], list[Diagnostic]]:
    p = _Parser(source)
    ast = _parse_domain_body(p)
    if _has_errors(p.diags):
        return None, p.diags
    return ast, p.diags


def parse_domain(source: str) -> DomainAst:
    ast, diags = parse_domain_with_diagnostics(source)
    if ast is None:
        raise ParseError(diags)
    return ast


def _parse_domain_body(p: _Parser) -> Optional[DomainAst]:
    try:
        p.expect(TokenKind.LPAREN, "'('")
        p.expect_name("define", "'define'")
        p.expect(TokenKind.LPAREN, "'('")
        p.expect_name("domain", "'domain'")
        name_tok = p.expect(TokenKind.NAME, "domain name")
        p.expect(TokenKind.RPAREN, "')'")
    except _FormAbort:
        return None

    requirements: set[str] = set()
    types = TypeHierarchy()
    predicates: list[PredicateSchema] = []
    seen_preds: dict[Ident, Span] = {}
    raw_actions: list[tuple[Token, list]] = []

    closed = False
    while not closed:
        tok = p.ts.peek()
        if tok.kind == TokenKind.RPAREN:
            p.ts.advance()
            closed = True
            break
        if tok.kind == TokenKind.EOF:
            p.diags.append(
                error("unbalanced-paren", "missing ')' before end of input", tok.span)
            )
            break
        if tok.kind != TokenKind.LPAREN:
            p.diags.append(error("syntax-error", f"expected '(', found {tok.text!r}", tok.span))
            p.ts.advance()
            continue
        p.ts.advance()
        head = p.ts.peek()
        try:
            if head.kind != TokenKind.KEYWORD:
                raise p.fail(
                    "syntax-error",
                    f"expected a ':'-keyword section, found {head.text!r}",
                    head.span,
                )
            keyword = head.value.lower()
            p.ts.advance()
            if keyword == "requirements":
                _parse_requirements(p, requirements)
            elif keyword == "types":
                _parse_types(p, types)
            elif keyword == "predicates":
                _parse_predicates(p, types, predicates, seen_preds)
            elif keyword == "action":
                raw_actions.append(_collect_action(p))
            elif keyword in UNSUPPORTED_SECTIONS:
                p.diags.append(
                    error(
                        "unsupported-construct",
                        f"':{head.value}' sections are outside the supported fragment",
                        head.span,
                    )
                )
                p.skip_form()
            else:
                p.diags.append(
                    error("syntax-error", f"unknown section ':{head.value}'", head.span)
                )
                p.skip_form()
        except _FormAbort:
            p.skip_form()

    if closed and not p.ts.at_eof():
        p.diags.append(
            error(
                "unbalanced-paren",
                "unexpected text after the domain definition",
                p.ts.peek().span,
            )
        )

    cyclic = types.find_cycle()
    if cyclic is not None:
        p.diags.append(
            error("type-cycle", f"type {cyclic.spelling!r} participates in a cycle", Span(1, 1, 1))
        )
        return None

    pred_index = {s.name: s for s in predicates}
    actions: list[ActionSchema] = []
    seen_actions: dict[Ident, Span] = {}
    for name_tok_a, pieces in raw_actions:
        schema = _check_action(p, name_tok_a, pieces, types, pred_index)
        if schema is None:
            continue
        if schema.name in seen_actions:
            p.diags.append(
                error(
                    "duplicate-declaration",
                    f"action {schema.name.spelling!r} is declared twice",
                    name_tok_a.span,
                )
            )
            continue
        seen_actions[schema.name] = name_tok_a.span
        actions.append(schema)

    if _has_errors(p.diags):
        return None
    return DomainAst(
        name=Ident(name_tok.text),
        requirements=frozenset(requirements),
        types=types,
        predicates=predicates,
        actions=actions,
    )


def _parse_requirements(p: _Parser, out: set[str]) -> None:
    while not p.ts.at(TokenKind.RPAREN):
        tok = p.ts.peek()
        if tok.kind == TokenKind.EOF:
            raise p.fail("unbalanced-paren", "unexpected end of input in ':requirements'")
        if tok.kind == TokenKind.KEYWORD and tok.value.lower() in ("strips", "typing"):
            out.add(tok.value.lower())
            p.ts.advance()
            continue
        p.diags.append(
            error(
                "unsupported-requirement",
                f"requirement {tok.text!r} is not supported; only ':strips' and ':typing' are",
                tok.span,
            )
        )
        p.ts.advance()
    p.ts.advance()


def _parse_types(p: _Parser, types: TypeHierarchy) -> None:
    pairs = p.parse_typed_items(TokenKind.NAME, "type")
    p.ts.advance()  # closing RPAREN left by parse_typed_items
    for name_tok, type_tok in pairs:
        name = Ident(name_tok.text)
        parent = Ident(type_tok.text) if type_tok is not None else OBJECT_IDENT
        if name == OBJECT_IDENT:
            if parent != OBJECT_IDENT:
                p.diags.append(
                    error("type-cycle", "'object' cannot be given a parent", name_tok.span)
                )
            continue
        if types.is_declared(name):
            p.diags.append(
                error(
                    "duplicate-declaration",
                    f"type {name.spelling!r} is declared twice",
                    name_tok.span,
                )
            )
            continue
        types.declare(name, parent)
    # parents referenced but never declared are implicitly rooted at object
    for name in list(types.declared):
        parent = types.parent_of(name)
        if parent is not None and not types.is_declared(parent):
            types.declare(parent)


def _parse_typed_params(p: _Parser, what: str) -> list[tuple[Ident, Ident, Span]]:
    pairs = p.parse_typed_items(TokenKind.VARIABLE, what)
    p.ts.advance()
    out = []
    for var_tok, type_tok in pairs:
        typ = Ident(type_tok.text) if type_tok is not None else OBJECT_IDENT
        out.append((Ident(var_tok.value), typ, var_tok.span))
    return out


def _parse_predicates(
    p: _Parser,
    types: TypeHierarchy,
    predicates: list[PredicateSchema],
    seen: dict[Ident, Span],
) -> None:
    while not p.ts.at(TokenKind.RPAREN):
        if p.ts.at_eof():
            raise p.fail("unbalanced-paren", "unexpected end of input in ':predicates'")
        p.expect(TokenKind.LPAREN, "'('")
        name_tok = p.expect(TokenKind.NAME, "predicate name")
        params = _parse_typed_params(p, "parameter")
        name = Ident(name_tok.text)
        ok = True
        seen_vars: set[Ident] = set()
        for var, typ, span in params:
            if var in seen_vars:
                p.diags.append(
                    error(
                        "duplicate-declaration",
                        f"parameter ?{var.spelling} repeats in predicate {name.spelling!r}",
                        span,
                    )
                )
                ok = False
            seen_vars.add(var)
            if not types.is_declared(typ):
                p.diags.append(
                    error("unknown-type", f"unknown type {typ.spelling!r}", span)
                )
                ok = False
        if name in seen:
            p.diags.append(
                error(
                    "duplicate-declaration",
                    f"predicate {name.spelling!r} is declared twice",
                    name_tok.span,
                )
            )
            ok = False
        if ok:
            seen[name] = name_tok.span
            predicates.append(
                PredicateSchema(name, tuple((v, t) for v, t, _ in params))
            )
    p.ts.advance()


def _collect_action(p: _Parser) -> tuple[Token, list]:
    name_tok = p.expect(TokenKind.NAME, "action name")
    pieces: list = []
    while True:
        tok = p.ts.peek()
        if tok.kind == TokenKind.RPAREN:
            p.ts.advance()
            return name_tok, pieces
        if tok.kind == TokenKind.EOF:
            raise p.fail("unbalanced-paren", "unexpected end of input in ':action'")
        if tok.kind != TokenKind.KEYWORD:
            raise p.fail(
                "syntax-error", f"expected ':parameters'/':precondition'/':effect', found {tok.text!r}", tok.span
            )
        keyword = tok.value.lower()
        p.ts.advance()
        if keyword == "parameters":
            p.expect(TokenKind.LPAREN, "'('")
            pieces.append(("parameters", tok, _parse_typed_params(p, "parameter")))
        elif keyword == "precondition":
            pieces.append(("precondition", tok, p.parse_conjunction("a precondition", allow_not=False)))
        elif keyword == "effect":
            pieces.append(("effect", tok, p.parse_conjunction("an effect", allow_not=True)))
        else:
            raise p.fail(
                "unsupported-construct",
                f"':{tok.value}' is not part of an action definition",
                tok.span,
            )


def _check_action(
    p: _Parser,
    name_tok: Token,
    pieces: list,
    types: TypeHierarchy,
    pred_index: dict[Ident, PredicateSchema],
) -> Optional[ActionSchema]:
    params: list[tuple[Ident, Ident, Span]] = []
    pre: list[tuple[bool, Atom, Span]] = []
    eff: list[tuple[bool, Atom, Span]] = []
    seen_sections: set[str] = set()
    ok = True
    for kind, key_tok, payload in pieces:
        if kind in seen_sections:
            p.diags.append(
                error(
                    "duplicate-declaration",
                    f"':{kind}' appears twice in action {name_tok.text!r}",
                    key_tok.span,
                )
            )
            ok = False
            continue
        seen_sections.add(kind)
        if kind == "parameters":
            params = payload
        elif kind == "precondition":
            pre = payload
        else:
            eff = payload

    param_types: dict[Ident, Ident] = {}
    for var, typ, span in params:
        if var in param_types:
            p.diags.append(
                error(
                    "duplicate-declaration",
                    f"parameter ?{var.spelling} repeats in action {name_tok.text!r}",
                    span,
                )
            )
            ok = False
            continue
        if not types.is_declared(typ):
            p.diags.append(error("unknown-type", f"unknown type {typ.spelling!r}", span))
            ok = False
        param_types[var] = typ

    def check_atom(atom: Atom, span: Span, where: str) -> bool:
        schema = pred_index.get(atom.predicate)
        if schema is None:
            p.diags.append(
                error(
                    "unknown-predicate",
                    f"unknown predicate {atom.predicate.spelling!r} in {where}",
                    span,
                )
            )
            return False
        if len(atom.terms) != schema.arity:
            p.diags.append(
                error(
                    "arity-mismatch",
                    f"{atom.predicate.spelling!r} expects {schema.arity} argument(s), got {len(atom.terms)}",
                    span,
                )
            )
            return False
        good = True
        for term, (_, want) in zip(atom.terms, schema.params):
            if isinstance(term, Const):
                p.diags.append(
                    error(
                        "unsupported-construct",
                        f"object constant {term.name.spelling!r} is not allowed in an action body",
                        span,
                    )
                )
                good = False
                continue
            assert isinstance(term, Var)
            declared = param_types.get(term.name)
            if declared is None:
                p.diags.append(
                    error(
                        "unknown-variable",
                        f"?{term.name.spelling} is not a parameter of {name_tok.text!r}",
                        span,
                    )
                )
                good = False
            elif not types.is_subtype(declared, want):
                p.diags.append(
                    error(
                        "type-mismatch",
                        f"?{term.name.spelling} has type {declared.spelling!r}, "
                        f"but {atom.predicate.spelling!r} wants {want.spelling!r}",
                        span,
                    )
                )
                good = False
        return good

    pre_atoms: list[Atom] = []
    for negated, atom, span in pre:
        assert not negated
        if check_atom(atom, span, "a precondition"):
            if atom not in pre_atoms:
                pre_atoms.append(atom)
        else:
            ok = False
    adds: list[Atom] = []
    dels: list[Atom] = []
    for negated, atom, span in eff:
        if not check_atom(atom, span, "an effect"):
            ok = False
            continue
        target = dels if negated else adds
        if atom not in target:
            target.append(atom)
    for atom in adds:
        if atom in dels:
            p.diags.append(
                error(
                    "contradictory-effect",
                    f"{atom} is both added and deleted by {name_tok.text!r}",
                    name_tok.span,
                )
            )
            ok = False

    if not ok:
        return None
    return ActionSchema(
        name=Ident(name_tok.text),
        params=tuple((v, t) for v, t, _ in params),
        precondition=tuple(pre_atoms),
        add_effects=tuple(adds),
        del_effects=tuple(dels),
    )


# -- problems --------------------------------------------------------


def parse_problem_with_diagnostics(
    source: str, domain: DomainAst
) -> tuple[Optional[ProblemAst], list[Diagnostic]]:
    p = _Parser(source)
    ast = _parse_problem_body(p, domain)
    if _has_errors(p.diags):
        return None, p.diags
    return ast, p.diags


def parse_problem(source: str, domain: DomainAst) -> ProblemAst:
    ast, diags = parse_problem_with_diagnostics(source, domain)
    if ast is None:
        raise ParseError(diags)
    return ast


def _parse_problem_body(p: _Parser, domain: DomainAst) -> Optional[ProblemAst]:
    try:
        p.expect(TokenKind.LPAREN, "'('")
        p.expect_name("define", "'define'")
        p.expect(TokenKind.LPAREN, "'('")
        p.expect_name("problem", "'problem'")
        name_tok = p.expect(TokenKind.NAME, "problem name")
        p.expect(TokenKind.RPAREN, "')'")
    except _FormAbort:
        return None

    domain_name: Optional[Ident] = None
    objects: list[tuple[Ident, Ident]] = []
    object_index: dict[Ident, Ident] = {}
    init: list[GroundAtom] = []
    init_seen: set[GroundAtom] = set()
    goal: list[GroundAtom] = []
    sections_seen: set[str] = set()

    def check_ground_atom(
        atom: Atom, span: Span, where: str
    ) -> Optional[GroundAtom]:
        schema = domain.predicate(atom.predicate)
        if schema is None:
            p.diags.append(
                error(
                    "unknown-predicate",
                    f"unknown predicate {atom.predicate.spelling!r} in {where}",
                    span,
                )
            )
            return None
        if len(atom.terms) != schema.arity:
            p.diags.append(
                error(
                    "arity-mismatch",
                    f"{atom.predicate.spelling!r} expects {schema.arity} argument(s), got {len(atom.terms)}",
                    span,
                )
            )
            return None
        args: list[Ident] = []
        good = True
        for term, (_, want) in zip(atom.terms, schema.params):
            if isinstance(term, Var):
                p.diags.append(
                    error(
                        "unsupported-construct",
                        f"variable ?{term.name.spelling} is not allowed in {where}",
                        span,
                    )
                )
                good = False
                continue
            assert isinstance(term, Const)
            obj_type = object_index.get(term.name)
            if obj_type is None:
                p.diags.append(
                    error(
                        "unknown-object",
                        f"unknown object {term.name.spelling!r} in {where}",
                        span,
                    )
                )
                good = False
            elif not domain.types.is_subtype(obj_type, want):
                p.diags.append(
                    error(
                        "type-mismatch",
                        f"{term.name.spelling!r} has type {obj_type.spelling!r}, "
                        f"but {atom.predicate.spelling!r} wants {want.spelling!r}",
                        span,
                    )
                )
                good = False
            args.append(term.name)
        if not good:
            return None
        return GroundAtom(atom.predicate, tuple(args))

    closed = False
    while not closed:
        tok = p.ts.peek()
        if tok.kind == TokenKind.RPAREN:
            p.ts.advance()
            closed = True
            break
        if tok.kind == TokenKind.EOF:
            p.diags.append(error("unbalanced-paren", "missing ')' before end of input", tok.span))
            break
        if tok.kind != TokenKind.LPAREN:
            p.diags.append(error("syntax-error", f"expected '(', found {tok.text!r}", tok.span))
            p.ts.advance()
            continue
        p.ts.advance()
        head = p.ts.peek()
        try:
            if head.kind != TokenKind.KEYWORD:
                raise p.fail(
                    "syntax-error",
                    f"expected a ':'-keyword section, found {head.text!r}",
                    head.span,
                )
            keyword = head.value.lower()
            p.ts.advance()
            if keyword in sections_seen:
                p.diags.append(
                    error(
                        "duplicate-declaration",
                        f"':{keyword}' section appears twice",
                        head.span,
                    )
                )
                p.skip_form()
                continue
            sections_seen.add(keyword)
            if keyword == "domain":
                dn = p.expect(TokenKind.NAME, "domain name")
                domain_name = Ident(dn.text)
                if domain_name != domain.name:
                    p.diags.append(
                        error(
                            "domain-mismatch",
                            f"problem names domain {dn.text!r}, "
                            f"but was parsed against {domain.name.spelling!r}",
                            dn.span,
                        )
                    )
                p.expect(TokenKind.RPAREN, "')'")
            elif keyword == "objects":
                pairs = p.parse_typed_items(TokenKind.NAME, "object")
                p.ts.advance()
                for obj_tok, type_tok in pairs:
                    obj = Ident(obj_tok.text)
                    typ = Ident(type_tok.text) if type_tok is not None else OBJECT_IDENT
                    if not domain.types.is_declared(typ):
                        p.diags.append(
                            error("unknown-type", f"unknown type {typ.spelling!r}", obj_tok.span)
                        )
                        continue
                    if obj in object_index:
                        p.diags.append(
                            error(
                                "duplicate-declaration",
                                f"object {obj.spelling!r} is declared twice",
                                obj_tok.span,
                            )
                        )
                        continue
                    object_index[obj] = typ
                    objects.append((obj, typ))
            elif keyword == "init":
                while not p.ts.at(TokenKind.RPAREN):
                    if p.ts.at_eof():
                        raise p.fail("unbalanced-paren", "unexpected end of input in ':init'")
                    if p.ts.at(TokenKind.KEYWORD):
                        raise p.fail(
                            "unbalanced-paren",
                            f"{p.ts.peek().text!r} found inside ':init'; a ')' is probably missing",
                            p.ts.peek().span,
                        )
                    name, terms, span = p.parse_atom("':init'")
                    ground = check_ground_atom(Atom(name, tuple(terms)), span, "':init'")
                    if ground is None:
                        continue
                    if ground in init_seen:
                        p.diags.append(
                            error("duplicate-init", f"init fact {ground} repeats", span)
                        )
                        continue
                    init_seen.add(ground)
                    init.append(ground)
                p.ts.advance()
            elif keyword == "goal":
                conj = p.parse_conjunction("a goal", allow_not=False)
                p.expect(TokenKind.RPAREN, "')'")
                for negated, atom, span in conj:
                    assert not negated
                    ground = check_ground_atom(atom, span, "the goal")
                    if ground is not None and ground not in goal:
                        goal.append(ground)
            else:
                p.diags.append(
                    error(
                        "unsupported-construct",
                        f"':{head.value}' sections are outside the supported fragment",
                        head.span,
                    )
                )
                p.skip_form()
        except _FormAbort:
            p.skip_form()

    if closed and not p.ts.at_eof():
        p.diags.append(
            error(
                "unbalanced-paren",
                "unexpected text after the problem definition",
                p.ts.peek().span,
            )
        )

    for required in ("domain", "objects", "init", "goal"):
        if required not in sections_seen:
            p.diags.append(
                error(
                    "missing-section",
                    f"problem has no ':{required}' section",
                    Span(1, 1, 1),
                )
            )

    if _has_errors(p.diags):
        return None
    assert domain_name is not None
    return ProblemAst(
        name=Ident(name_tok.text),
        domain_name=domain_name,
        objects=objects,
        init=init,
        goal=goal,
    )
