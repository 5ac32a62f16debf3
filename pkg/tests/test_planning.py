"""Grounding, search, validation, and transition-system behavior."""

import time
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdag.pddl import GroundAtom, Ident, parse_domain, parse_problem
from pdag.planning import (
    FailsAtStep,
    GoalUnsatisfied,
    GroundingLimitExceeded,
    LimitExceeded,
    LtsLimitExceeded,
    NotApplicable,
    Plan,
    PlanFormatError,
    Unsolvable,
    Valid,
    apply_action,
    format_plan,
    ground,
    parse_plan,
    reachable_lts,
    solve,
    static_predicates,
    validate_plan,
)

from _naive import naive_ground, naive_reachable_states, naive_shortest_plan

CORPUS = Path(__file__).resolve().parents[1] / "src" / "pdag" / "corpus"


def load_task(name: str):
    domain = parse_domain((CORPUS / "domains" / f"{name}.pddl").read_text())
    problem = parse_problem((CORPUS / "problems" / f"{name}.pddl").read_text(), domain)
    return domain, problem, ground(domain, problem)


def ga(pred: str, *args: str) -> GroundAtom:
    return GroundAtom(Ident(pred), tuple(Ident(a) for a in args))


# -- grounding --------------------------------------------------------


def test_grounding_is_type_consistent():
    domain, problem, task = load_task("travelArrange01_ll")
    assert len(task.actions) == 16
    for action in task.actions:
        schema = domain.action(action.name)
        for obj, want in zip(action.args, schema.param_types):
            assert domain.types.is_subtype(problem.type_of(obj), want)


def test_grounding_matches_naive_enumeration():
    for name in ["travelArrange01_ll", "cloudApps01_ll", "education01_ll"]:
        domain, problem, task = load_task(name)
        naive = naive_ground(domain, problem)
        ours = {
            (a.name.canonical, tuple(x.canonical for x in a.args)) for a in task.actions
        }
        theirs = {(n, args) for n, args, *_ in naive}
        assert ours == theirs


def test_atom_universe_counts_every_typed_combination():
    _, _, task = load_task("cloudApps01_ll")
    universe = task.atom_universe()
    assert len(universe) == 17
    assert len(set(universe)) == 17


def test_grounding_limit_is_checked_before_instantiation():
    objs = " ".join(f"o{i}" for i in range(10))
    params = " ".join(f"?x{i}" for i in range(7))
    domain = parse_domain(
        f"""
        (define (domain wide)
          (:types t - object)
          (:predicates (p))
          (:action a :parameters ({params} - t) :precondition (and) :effect (and (p))))
        """
    )
    problem = parse_problem(
        f"(define (problem x) (:domain wide) (:objects {objs} - t) (:init) (:goal (p)))",
        domain,
    )
    start = time.monotonic()
    with pytest.raises(GroundingLimitExceeded) as exc:
        ground(domain, problem)
    assert time.monotonic() - start < 1.0
    assert exc.value.count == 10**7
    assert exc.value.limit == 10**6


def test_grounding_excludes_add_delete_collisions():
    domain = parse_domain(
        """
        (define (domain d)
          (:types t - object)
          (:predicates (p ?x - t ?y - t))
          (:action swap
            :parameters (?x - t ?y - t)
            :precondition (and)
            :effect (and (p ?x ?y) (not (p ?y ?x)))))
        """
    )
    problem = parse_problem(
        "(define (problem x) (:domain d) (:objects a b - t) (:init) (:goal (and)))",
        domain,
    )
    # swap(a, a) and swap(b, b) would add and delete the same atom
    task = ground(domain, problem)
    assert {a.args for a in task.actions} == {
        (Ident("a"), Ident("b")),
        (Ident("b"), Ident("a")),
    }
    assert all(not (a.add_effects & a.del_effects) for a in task.actions)


def test_static_predicates():
    domain, _, _ = load_task("cloudApps01_ll")
    names = {p.spelling for p in static_predicates(domain)}
    assert names == {
        "hasEditPermission",
        "valid_userName",
        "valid_passWord",
        "authenticUserPassword",
    }


# -- applying actions -------------------------------------------------


def find_action(task, name: str, *args: str):
    key = (Ident(name), tuple(Ident(a) for a in args))
    for action in task.actions:
        if (action.name, action.args) == key:
            return action
    raise AssertionError(f"no ground action ({name} {' '.join(args)})")


def test_apply_reports_first_missing_precondition_in_declared_order():
    _, _, task = load_task("cloudApps01_ll")
    open_file = find_action(task, "openFileInEditor", "file1", "pw1", "user1")
    # closed_file and hasEditPermission hold initially, authentication does not
    result = apply_action(task.init, open_file)
    assert result == NotApplicable(ga("authenticated_passWord", "pw1"))
    # for user2 the earlier hasEditPermission check fails first
    other = find_action(task, "openFileInEditor", "file1", "pw2", "user2")
    result = apply_action(task.init, other)
    assert result == NotApplicable(ga("hasEditPermission", "user2", "file1"))


def test_apply_deletes_then_adds():
    _, _, task = load_task("travelArrange01_ll")
    book = find_action(task, "book_hotel", "hotel1", "room1")
    nxt = apply_action(task.init, book)
    assert ga("available_room_hotel", "room1", "hotel1") not in nxt
    assert ga("booked_hotel", "room1", "hotel1") in nxt
    assert ga("bookedHotelOrAirbnb") in nxt


# -- search -----------------------------------------------------------

EXPECTED_LENGTHS = {
    "travelArrange01_ll": 2,
    "travelArrange01_hl": 2,
    "cloudApps01_ll": 4,
    "cloudApps01_hl": 2,
}


@pytest.mark.parametrize("name,length", sorted(EXPECTED_LENGTHS.items()))
def test_bfs_finds_shortest_plan(name, length):
    domain, problem, task = load_task(name)
    start = time.monotonic()
    result = solve(task, strategy="bfs")
    elapsed = time.monotonic() - start
    assert isinstance(result, Plan)
    assert len(result) == length
    assert isinstance(validate_plan(task, result.steps), Valid)
    oracle = naive_shortest_plan(domain, problem)
    assert oracle is not None and len(oracle) == length
    assert elapsed < 1.0


def test_bfs_expands_in_action_declaration_order():
    _, _, task = load_task("travelArrange01_ll")
    result = solve(task, strategy="bfs")
    assert [a.signature for a in result.steps] == [
        "(book_hotel hotel1 room1)",
        "(book_flight flight1 seat1)",
    ]


def test_bfs_on_satisfied_goal_returns_empty_plan():
    _, _, task = load_task("cloudApps01_ll")
    task.goal = frozenset()
    result = solve(task, strategy="bfs")
    assert isinstance(result, Plan) and len(result) == 0


def test_bfs_reports_unsolvable():
    domain = parse_domain(
        """
        (define (domain d)
          (:predicates (p) (q))
          (:action a :parameters () :precondition (and (q)) :effect (and (p))))
        """
    )
    problem = parse_problem(
        "(define (problem x) (:domain d) (:objects) (:init) (:goal (p)))", domain
    )
    task = ground(domain, problem)
    assert isinstance(solve(task, strategy="bfs"), Unsolvable)
    assert isinstance(solve(task, strategy="greedy"), Unsolvable)


def test_search_timeout_surfaces_as_limit():
    _, _, task = load_task("travelArrange01_ll")
    result = solve(task, strategy="bfs", timeout=0.0)
    assert result == LimitExceeded("timeout")


@pytest.mark.parametrize("name", sorted(EXPECTED_LENGTHS))
def test_greedy_plans_are_valid(name):
    _, _, task = load_task(name)
    result = solve(task, strategy="greedy")
    assert isinstance(result, Plan)
    assert isinstance(validate_plan(task, result.steps), Valid)
    assert len(result) >= EXPECTED_LENGTHS[name]


def test_unknown_strategy_is_rejected():
    _, _, task = load_task("cloudApps01_hl")
    with pytest.raises(ValueError, match="dfs"):
        solve(task, strategy="dfs")


# -- validation -------------------------------------------------------


def cloud_plan(task):
    return [
        find_action(task, "enter_UserName", "user1"),
        find_action(task, "enter_passWord", "user1", "pw1"),
        find_action(task, "openFileInEditor", "file1", "pw1", "user1"),
        find_action(task, "changeFileContent", "file1"),
    ]


def test_validate_accepts_dependent_plan():
    _, _, task = load_task("cloudApps01_ll")
    assert validate_plan(task, cloud_plan(task)) == Valid()


def test_validate_rejects_permuted_dependent_plan():
    _, _, task = load_task("cloudApps01_ll")
    steps = cloud_plan(task)
    steps[1], steps[2] = steps[2], steps[1]
    verdict = validate_plan(task, steps)
    assert verdict == FailsAtStep(1, ga("authenticated_passWord", "pw1"))


def test_validate_reports_unsatisfied_goal():
    _, _, task = load_task("cloudApps01_ll")
    verdict = validate_plan(task, [])
    assert verdict == GoalUnsatisfied(frozenset({ga("changedFileContent", "file1")}))


def test_plan_text_roundtrip_is_case_insensitive():
    _, _, task = load_task("cloudApps01_ll")
    steps = cloud_plan(task)
    text = format_plan(steps)
    assert text.splitlines()[0] == "(enter_UserName user1)"
    assert parse_plan(text, task) == steps
    assert parse_plan(text.upper(), task) == steps
    assert parse_plan("; comment only\n\n", task) == []


def test_plan_text_errors():
    _, _, task = load_task("cloudApps01_ll")
    with pytest.raises(PlanFormatError, match="no ground action"):
        parse_plan("(warp home)", task)
    with pytest.raises(PlanFormatError, match="expected"):
        parse_plan("enter_UserName user1", task)


# -- transition systems -----------------------------------------------

EXPECTED_STATES = {
    "travelArrange01_ll": 256,
    "travelArrange01_hl": 256,
    "cloudApps01_ll": 5,
    "cloudApps01_hl": 3,
}


@pytest.mark.parametrize("name,count", sorted(EXPECTED_STATES.items()))
def test_reachable_lts_matches_naive_enumeration(name, count):
    domain, problem, task = load_task(name)
    lts = reachable_lts(task)
    assert len(lts) == count
    assert lts.states[0] == task.init
    naive_states, naive_edges = naive_reachable_states(domain, problem)
    assert {frozenset((a.predicate.canonical, *(x.canonical for x in a.args)) for a in s) for s in lts.states} == naive_states
    ours = set()
    for src, edges in enumerate(lts.out):
        for action_idx, dst in edges:
            action = lts.actions[action_idx]
            ours.add(
                (
                    frozenset((a.predicate.canonical, *(x.canonical for x in a.args)) for a in lts.states[src]),
                    (action.name.canonical, tuple(x.canonical for x in action.args)),
                    frozenset((a.predicate.canonical, *(x.canonical for x in a.args)) for a in lts.states[dst]),
                )
            )
    assert ours == naive_edges


def test_lts_construction_is_deterministic():
    _, _, task = load_task("travelArrange01_ll")
    a = reachable_lts(task)
    b = reachable_lts(task)
    assert a.states == b.states
    assert a.out == b.out


def test_lts_keeps_self_loops():
    domain = parse_domain(
        """
        (define (domain d)
          (:predicates (p))
          (:action noop :parameters () :precondition (and (p)) :effect (and (p))))
        """
    )
    problem = parse_problem(
        "(define (problem x) (:domain d) (:objects) (:init (p)) (:goal (p)))", domain
    )
    lts = reachable_lts(ground(domain, problem))
    assert len(lts) == 1
    assert lts.out[0] == [(0, 0)]


def test_lts_state_cap():
    _, _, task = load_task("travelArrange01_ll")
    with pytest.raises(LtsLimitExceeded) as exc:
        reachable_lts(task, max_states=10)
    assert exc.value.limit == 10


# -- randomized agreement with the oracle ------------------------------

_AVAILABLE = [
    ("available_room_hotel", "room1", "hotel1"),
    ("available_room_hotel", "room2", "hotel1"),
    ("available_room_airbnb", "room3", "airbnb1"),
    ("available_room_airbnb", "room4", "airbnb1"),
    ("available_seat_flight", "seat1", "flight1"),
    ("available_seat_flight", "seat2", "flight1"),
    ("available_seat_trainRide", "seat3", "trainRide1"),
    ("available_seat_trainRide", "seat4", "trainRide1"),
]


@settings(max_examples=25, deadline=None)
@given(st.sets(st.sampled_from(range(8))))
def test_bfs_agrees_with_oracle_on_randomized_inits(available):
    domain, problem, _ = load_task("travelArrange01_ll")
    problem.init = [ga(*_AVAILABLE[i]) for i in sorted(available)]
    task = ground(domain, problem)
    result = solve(task, strategy="bfs")
    oracle = naive_shortest_plan(domain, problem)
    if oracle is None:
        assert isinstance(result, Unsolvable)
    else:
        assert isinstance(result, Plan)
        assert len(result) == len(oracle)
