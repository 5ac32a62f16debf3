"""Parser, checker, and printer behavior on the bundled corpus and on
hand-written fragments."""

import time
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdag.pddl import (
    ActionSchema,
    Atom,
    DomainAst,
    Ident,
    ParseError,
    PredicateSchema,
    ProblemAst,
    Severity,
    TypeHierarchy,
    Var,
    parse_domain,
    parse_domain_with_diagnostics,
    parse_problem,
    parse_problem_with_diagnostics,
    print_domain,
    print_problem,
)
from pdag.pddl.ast import GroundAtom

CORPUS = Path(__file__).resolve().parents[1] / "src" / "pdag" / "corpus"
DATA = Path(__file__).resolve().parent / "data"

CORPUS_IDS = [
    "travelArrange01_ll",
    "travelArrange01_hl",
    "cloudApps01_ll",
    "cloudApps01_hl",
    "travelArrange02_ll",
    "travelArrange02_hl",
    "travelArrange03_hl",
    "education01_ll",
    "education01_hl",
]


def corpus_pair(name: str):
    domain_src = (CORPUS / "domains" / f"{name}.pddl").read_text()
    problem_src = (CORPUS / "problems" / f"{name}.pddl").read_text()
    return domain_src, problem_src


@pytest.mark.parametrize("name", CORPUS_IDS)
def test_corpus_parses_without_diagnostics(name):
    domain_src, problem_src = corpus_pair(name)
    domain, ddiags = parse_domain_with_diagnostics(domain_src)
    assert domain is not None, [d.render() for d in ddiags]
    assert ddiags == []
    problem, pdiags = parse_problem_with_diagnostics(problem_src, domain)
    assert problem is not None, [d.render() for d in pdiags]
    assert pdiags == []


@pytest.mark.parametrize("name", CORPUS_IDS)
def test_print_then_parse_is_structurally_identical(name):
    domain_src, problem_src = corpus_pair(name)
    domain = parse_domain(domain_src)
    problem = parse_problem(problem_src, domain)
    assert parse_domain(print_domain(domain)) == domain
    assert parse_problem(print_problem(problem), domain) == problem


def test_corpus_roundtrip_is_fast():
    start = time.monotonic()
    for name in CORPUS_IDS:
        domain_src, problem_src = corpus_pair(name)
        domain = parse_domain(domain_src)
        problem = parse_problem(problem_src, domain)
        assert parse_domain(print_domain(domain)) == domain
        assert parse_problem(print_problem(problem), domain) == problem
    assert time.monotonic() - start < 1.0


def test_identifier_resolution_ignores_case_but_keeps_spelling():
    domain_src, problem_src = corpus_pair("education01_hl")
    domain = parse_domain(domain_src)
    problem = parse_problem(problem_src, domain)
    # the goal writes genAi while the object is declared genAI
    spellings = {o.spelling for o, _ in problem.objects}
    assert "genAI" in spellings
    goal_args = {a for atom in problem.goal for a in atom.args}
    assert Ident("genai") in goal_args
    printed = print_problem(problem)
    assert "genAi" in printed or "genAI" in printed


def test_mixed_case_predicate_references_resolve():
    # declared pendingWorkShopRequest, referenced pendingWorkshopRequest
    domain_src, _ = corpus_pair("education01_ll")
    domain = parse_domain(domain_src)
    schema = domain.predicate(Ident("pendingworkshoprequest"))
    assert schema is not None
    assert schema.name.spelling == "pendingWorkShopRequest"


def test_attached_dash_in_typed_parameter_list():
    src = """
    (define (domain d)
      (:types room seat - object)
      (:predicates (at ?r - room ?s - seat))
      (:action move
        :parameters (?r -room ?s -seat)
        :precondition (and (at ?r ?s))
        :effect (and (not (at ?r ?s)))))
    """
    domain = parse_domain(src)
    action = domain.action(Ident("move"))
    assert action.param_types == (Ident("room"), Ident("seat"))


def test_not_without_space_before_atom():
    src = """
    (define (domain d)
      (:predicates (closed_file ?f))
      (:action open
        :parameters (?f)
        :precondition (and (closed_file ?f))
        :effect (and (not(closed_file ?f)))))
    """
    domain = parse_domain(src)
    action = domain.action(Ident("open"))
    assert action.del_effects == (Atom(Ident("closed_file"), (Var(Ident("f")),)),)


def test_comments_are_ignored():
    src = """
    ; header comment
    (define (domain d) ; trailing
      (:predicates (p)) ; another
      (:action a :parameters () :precondition (and (p)) :effect (and)))
    """
    domain = parse_domain(src)
    assert domain.action(Ident("a")).precondition == (Atom(Ident("p"), ()),)


def test_faulty_file_diagnostics_point_at_fault_site():
    src = (DATA / "travelArrange02_ll_faulty.pddl").read_text()
    domain, diags = parse_domain_with_diagnostics(src)
    assert domain is None
    assert len(diags) >= 1
    # the missing ')' surfaces where :effect shows up inside the precondition
    lines = src.splitlines()
    fault_line = next(
        i + 1 for i, line in enumerate(lines) if ":effect" in line and "change_RoomType" in "\n".join(lines[: i + 1])
    )
    fault_col = lines[fault_line - 1].index(":effect") + 1
    first = diags[0]
    assert first.code == "unbalanced-paren"
    assert (first.span.line, first.span.column) == (fault_line, fault_col)
    assert any(d.span.line == len(lines) + 1 or "end of input" in d.message for d in diags)


def test_diagnostic_render_format():
    src = "(define (domain d) (:action a :parameters () :precondition (or (p)) :effect (and)))"
    _, diags = parse_domain_with_diagnostics(src)
    rendered = diags[0].render("bad.pddl")
    line, col = diags[0].span.line, diags[0].span.column
    assert rendered.startswith(f"bad.pddl:{line}:{col}: error[")


@pytest.mark.parametrize("connective", ["or", "when", "either", "exists", "forall", "imply"])
def test_disjunctive_and_conditional_constructs_are_rejected(connective):
    src = f"""
    (define (domain d)
      (:predicates (p) (q))
      (:action a
        :parameters ()
        :precondition ({connective} (p) (q))
        :effect (and (p))))
    """
    domain, diags = parse_domain_with_diagnostics(src)
    assert domain is None
    assert any(d.code == "unsupported-construct" for d in diags)


def test_negated_precondition_is_rejected():
    src = """
    (define (domain d)
      (:predicates (p))
      (:action a :parameters () :precondition (and (not (p))) :effect (and)))
    """
    domain, diags = parse_domain_with_diagnostics(src)
    assert domain is None
    assert any(d.code == "unsupported-construct" for d in diags)


def test_unsupported_requirement_is_flagged():
    src = "(define (domain d) (:requirements :strips :adl))"
    domain, diags = parse_domain_with_diagnostics(src)
    assert domain is None
    assert [d.code for d in diags] == ["unsupported-requirement"]
    assert ":adl" in diags[0].message


DOMAIN_PQ = """
(define (domain d)
  (:types t - object)
  (:predicates (p ?x - t) (q ?x - t ?y - t)))
"""


def domain_with(body: str) -> str:
    return DOMAIN_PQ.rstrip()[:-1] + body + ")"


@pytest.mark.parametrize(
    "body,code",
    [
        ("(:action a :parameters (?x - t) :precondition (and (r ?x)) :effect (and))", "unknown-predicate"),
        ("(:action a :parameters (?x - t) :precondition (and (p ?x ?x)) :effect (and))", "arity-mismatch"),
        ("(:action a :parameters (?x - u) :precondition (and (p ?x)) :effect (and))", "unknown-type"),
        ("(:action a :parameters (?x - t) :precondition (and (p ?y)) :effect (and))", "unknown-variable"),
        ("(:action a :parameters (?x - t) :precondition (and) :effect (and (p ?x) (not (p ?x))))", "contradictory-effect"),
        ("(:action a :parameters (?x - t ?x - t) :precondition (and) :effect (and))", "duplicate-declaration"),
    ],
)
def test_action_checks(body, code):
    domain, diags = parse_domain_with_diagnostics(domain_with(body))
    assert domain is None
    assert any(d.code == code for d in diags), [d.render() for d in diags]


def test_type_mismatch_in_action_body():
    src = """
    (define (domain d)
      (:types veh boat - object)
      (:predicates (drives ?v - veh))
      (:action a :parameters (?b - boat) :precondition (and (drives ?b)) :effect (and)))
    """
    domain, diags = parse_domain_with_diagnostics(src)
    assert domain is None
    assert any(d.code == "type-mismatch" for d in diags)


def test_subtype_satisfies_parameter_type():
    src = """
    (define (domain d)
      (:types veh - object car - veh)
      (:predicates (drives ?v - veh))
      (:action a :parameters (?c - car) :precondition (and (drives ?c)) :effect (and)))
    """
    assert parse_domain(src) is not None


def test_object_constant_in_action_body_is_rejected():
    src = """
    (define (domain d)
      (:predicates (p ?x))
      (:action a :parameters () :precondition (and (p home)) :effect (and)))
    """
    domain, diags = parse_domain_with_diagnostics(src)
    assert domain is None
    assert any(d.code == "unsupported-construct" for d in diags)


def test_duplicate_predicate_and_type_declarations():
    src = """
    (define (domain d)
      (:types t t - object)
      (:predicates (p) (p)))
    """
    domain, diags = parse_domain_with_diagnostics(src)
    assert domain is None
    codes = [d.code for d in diags]
    assert codes.count("duplicate-declaration") == 2


def test_empty_precondition_and_effect_are_legal():
    src = """
    (define (domain d)
      (:predicates (p))
      (:action a :parameters () :precondition (and) :effect (and)))
    """
    domain = parse_domain(src)
    action = domain.action(Ident("a"))
    assert action.precondition == ()
    assert action.add_effects == ()
    assert action.del_effects == ()


PROBLEM_DOMAIN = """
(define (domain d)
  (:types t - object)
  (:predicates (p ?x - t)))
"""


@pytest.mark.parametrize(
    "problem,code",
    [
        ("(define (problem x) (:domain other) (:objects a - t) (:init) (:goal (and)))", "domain-mismatch"),
        ("(define (problem x) (:domain d) (:objects a - u) (:init) (:goal (and)))", "unknown-type"),
        ("(define (problem x) (:domain d) (:objects a - t a - t) (:init) (:goal (and)))", "duplicate-declaration"),
        ("(define (problem x) (:domain d) (:objects a - t) (:init (p a) (p a)) (:goal (and)))", "duplicate-init"),
        ("(define (problem x) (:domain d) (:objects a - t) (:init (p b)) (:goal (and)))", "unknown-object"),
        ("(define (problem x) (:domain d) (:objects a - t) (:init (q a)) (:goal (and)))", "unknown-predicate"),
        ("(define (problem x) (:domain d) (:objects a - t) (:init (p a a)) (:goal (and)))", "arity-mismatch"),
        ("(define (problem x) (:domain d) (:objects a - t) (:init) (:goal (not (p a))))", "unsupported-construct"),
        ("(define (problem x) (:domain d) (:objects a - t) (:init))", "missing-section"),
        ("(define (problem x) (:objects a - t) (:init) (:goal (and)))", "missing-section"),
    ],
)
def test_problem_checks(problem, code):
    domain = parse_domain(PROBLEM_DOMAIN)
    ast, diags = parse_problem_with_diagnostics(problem, domain)
    assert ast is None
    assert any(d.code == code for d in diags), [d.render() for d in diags]


def test_empty_init_is_legal():
    domain = parse_domain(PROBLEM_DOMAIN)
    problem = parse_problem(
        "(define (problem x) (:domain d) (:objects a - t) (:init) (:goal (and (p a))))",
        domain,
    )
    assert problem.init == []
    assert problem.goal == [GroundAtom(Ident("p"), (Ident("a"),))]


def test_parse_error_carries_diagnostics():
    with pytest.raises(ParseError) as exc:
        parse_domain("(define (domain d) (:requirements :adl))")
    assert exc.value.diagnostics[0].code == "unsupported-requirement"


def test_recovery_reports_faults_in_separate_sections():
    src = """
    (define (domain d)
      (:requirements :adl)
      (:predicates (p) (p))
      (:action a :parameters () :precondition (or (p)) :effect (and)))
    """
    domain, diags = parse_domain_with_diagnostics(src)
    assert domain is None
    codes = {d.code for d in diags}
    assert {"unsupported-requirement", "duplicate-declaration", "unsupported-construct"} <= codes


def test_goal_may_be_single_atom():
    domain = parse_domain(PROBLEM_DOMAIN)
    problem = parse_problem(
        "(define (problem x) (:domain d) (:objects a - t) (:init (p a)) (:goal (p a)))",
        domain,
    )
    assert problem.goal == [GroundAtom(Ident("p"), (Ident("a"),))]


def test_type_hierarchy_subtype_queries():
    h = TypeHierarchy()
    h.declare(Ident("veh"))
    h.declare(Ident("car"), Ident("veh"))
    h.declare(Ident("ev"), Ident("car"))
    assert h.is_subtype(Ident("ev"), Ident("veh"))
    assert h.is_subtype(Ident("ev"), Ident("object"))
    assert not h.is_subtype(Ident("veh"), Ident("ev"))
    assert h.subtypes_of(Ident("veh")) == {Ident("veh"), Ident("car"), Ident("ev")}


# -- randomized round-trip --------------------------------------------

_name = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True)


@st.composite
def domains(draw):
    type_names = draw(
        st.lists(_name, min_size=1, max_size=4, unique_by=lambda s: s.lower())
    )
    types = TypeHierarchy()
    idents = []
    for i, t in enumerate(type_names):
        parent = idents[draw(st.integers(0, i - 1))] if i and draw(st.booleans()) else None
        ident = Ident(t)
        types.declare(ident, parent)
        idents.append(ident)

    pred_names = draw(
        st.lists(_name, min_size=1, max_size=4, unique_by=lambda s: s.lower())
    )
    predicates = []
    for p in pred_names:
        arity = draw(st.integers(0, 3))
        params = tuple(
            (Ident(f"x{i}"), idents[draw(st.integers(0, len(idents) - 1))])
            for i in range(arity)
        )
        predicates.append(PredicateSchema(Ident(p), params))

    action_names = draw(
        st.lists(_name, min_size=0, max_size=3, unique_by=lambda s: s.lower())
    )
    actions = []
    for a in action_names:
        n_params = draw(st.integers(0, 3))
        params = tuple(
            (Ident(f"v{i}"), idents[draw(st.integers(0, len(idents) - 1))])
            for i in range(n_params)
        )
        by_type = {}
        for v, t in params:
            for sup in [t] + [s for s in idents if types.is_subtype(t, s)]:
                by_type.setdefault(sup, []).append(v)

        def atoms_for(max_atoms):
            out = []
            for _ in range(draw(st.integers(0, max_atoms))):
                schema = predicates[draw(st.integers(0, len(predicates) - 1))]
                terms = []
                for _, want in schema.params:
                    pool = [
                        v
                        for v, t in params
                        if types.is_subtype(t, want) or want == Ident("object")
                    ]
                    if not pool:
                        break
                    terms.append(Var(pool[draw(st.integers(0, len(pool) - 1))]))
                else:
                    atom = Atom(schema.name, tuple(terms))
                    if atom not in out:
                        out.append(atom)
            return out

        pre = atoms_for(3)
        adds = atoms_for(2)
        dels = [x for x in atoms_for(2) if x not in adds]
        actions.append(
            ActionSchema(Ident(a), params, tuple(pre), tuple(adds), tuple(dels))
        )

    return DomainAst(
        name=Ident(draw(_name)),
        requirements=frozenset(draw(st.sets(st.sampled_from(["strips", "typing"])))),
        types=types,
        predicates=predicates,
        actions=actions,
    )


@settings(max_examples=60, deadline=None)
@given(domains())
def test_random_domain_roundtrip(domain):
    printed = print_domain(domain)
    reparsed, diags = parse_domain_with_diagnostics(printed)
    assert reparsed is not None, (printed, [d.render() for d in diags])
    assert reparsed == domain, printed


@settings(max_examples=40, deadline=None)
@given(domains(), st.data())
def test_random_problem_roundtrip(domain, data):
    type_list = [t for t in domain.types.declared]
    objects = []
    for i in range(data.draw(st.integers(1, 5))):
        typ = type_list[data.draw(st.integers(0, len(type_list) - 1))]
        objects.append((Ident(f"o{i}"), typ))
    facts = []
    for schema in domain.predicates:
        pools = [
            [o for o, t in objects if domain.types.is_subtype(t, want)]
            for _, want in schema.params
        ]
        if any(not pool for pool in pools):
            continue
        args = tuple(pool[0] for pool in pools)
        facts.append(GroundAtom(schema.name, args))
    n_init = data.draw(st.integers(0, len(facts)))
    problem = ProblemAst(
        name=Ident("x"),
        domain_name=domain.name,
        objects=objects,
        init=facts[:n_init],
        goal=facts[n_init:],
    )
    printed = print_problem(problem)
    reparsed, diags = parse_problem_with_diagnostics(printed, domain)
    assert reparsed is not None, (printed, [d.render() for d in diags])
    assert reparsed == problem, printed
