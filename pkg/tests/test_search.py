from __future__ import annotations

import dataclasses

import pytest

from prodplan.demo import build_demo_model, demo_goal_2341
from prodplan.errors import (
    CostMismatch,
    GoalNotReached,
    GroundingError,
    PreconditionViolated,
    UnknownAction,
)
from prodplan.model_io import (
    GoalSpec,
    generate_permutation_goals,
    generate_reverse_goal,
    generate_ring_layout,
)
from prodplan.pddl import Plan, PlanStep, parse_domain, parse_problem
from prodplan.planner import available_backends
from prodplan.planner.grounding import ground
from prodplan.planner.search import solve, solve_bidirectional, validate_plan
from prodplan.transform import derive_domain, derive_problem, derive_reverse_problem

import oracles

BACKENDS = available_backends()


def _demo_tasks():
    model = build_demo_model()
    domain, report = derive_domain(model)
    return [
        (goal.id, ground(domain, derive_problem(model, goal, report)))
        for goal in generate_permutation_goals(model)
    ]


def _ring_task(size, goal_fn=generate_reverse_goal, reverse=False):
    model = generate_ring_layout(size, 0.65)
    domain, report = derive_domain(model)
    goal = goal_fn(model)
    task = ground(domain, derive_problem(model, goal, report))
    if not reverse:
        return task
    reverse_problem = derive_reverse_problem(model, goal, report)
    assert reverse_problem is not None
    return task, ground(domain, reverse_problem)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("heuristic", ["blind", "hmax"])
def test_optimal_matches_oracle_on_all_demo_goals(backend, heuristic):
    for goal_id, task in _demo_tasks():
        expected = oracles.shortest_cost(task)
        result = solve(task, mode="optimal", heuristic=heuristic, backend=backend)
        assert result.status == "solved", goal_id
        assert result.cost == expected, goal_id
        assert validate_plan(task, result.plan) == expected, goal_id
        assert result.backend == backend


def test_backends_return_identical_plans():
    for goal_id, task in _demo_tasks():
        results = [
            solve(task, mode="optimal", heuristic="hmax", backend=b) for b in BACKENDS
        ]
        plans = {r.plan for r in results}
        assert len(plans) == 1, goal_id


@pytest.mark.parametrize("backend", BACKENDS)
def test_optimal_from_every_reachable_state(demo_task, backend):
    distances = oracles.all_goal_distances(demo_task)
    fluent_index = {name: i for i, name in enumerate(demo_task.fluents)}
    for state, expected in sorted(distances.items(), key=lambda kv: sorted(kv[0])):
        shifted = dataclasses.replace(
            demo_task, init=frozenset(fluent_index[f] for f in state)
        )
        result = solve(shifted, backend=backend)
        if expected is None:
            assert result.status == "unsolvable"
        else:
            assert result.cost == expected


@pytest.mark.parametrize("backend", BACKENDS)
def test_greedy_is_valid_not_necessarily_optimal(backend, demo_task):
    result = solve(demo_task, mode="greedy", backend=backend)
    assert result.status == "solved"
    assert validate_plan(demo_task, result.plan) == result.cost
    assert result.cost >= oracles.shortest_cost(demo_task)


@pytest.mark.parametrize("backend", BACKENDS)
def test_ring_seven_optimal_cost_matches_oracle(backend):
    task = _ring_task(7)
    expected = oracles.shortest_cost(task)
    result = solve(task, backend=backend)
    assert result.status == "solved"
    assert result.cost == expected
    assert validate_plan(task, result.plan) == expected


@pytest.mark.parametrize("backend", BACKENDS)
def test_status_timeout_and_memout(backend):
    task = _ring_task(9)
    assert solve(task, time_limit=1e-6, backend=backend).status == "timeout"
    assert solve(task, node_limit=2, backend=backend).status == "memout"


@pytest.mark.parametrize("backend", BACKENDS)
def test_unsolvable_when_goal_fluent_unreachable(backend):
    domain = parse_domain(
        "(define (domain m) (:types T) (:predicates (Up ?x - T) (Down ?x - T))"
        " (:action Sink :parameters (?x - T) :precondition (Up ?x)"
        "   :effect (not (Up ?x))))"
    )
    problem = parse_problem(
        "(define (problem p) (:domain m) (:objects a b - T)"
        " (:init (Up a)) (:goal (and (Up b) (not (Up a)))))"
    )
    task = ground(domain, problem)
    result = solve(task, backend=backend)
    assert result.status == "unsolvable"
    assert result.plan is None


@pytest.mark.parametrize("backend", BACKENDS)
def test_statically_false_goal_short_circuits(backend):
    domain = parse_domain(
        "(define (domain m) (:types T) (:predicates (Up ?x - T) (Fixed ?x - T))"
        " (:action Raise :parameters (?x - T) :effect (Up ?x)))"
    )
    problem = parse_problem(
        "(define (problem p) (:domain m) (:objects a - T)"
        " (:init) (:goal (and (Up a) (Fixed a))))"
    )
    task = ground(domain, problem)
    assert task.goal_statically_false
    result = solve(task, backend=backend)
    assert result.status == "unsolvable"
    assert result.expanded == 0


def test_solve_rejects_unknown_modes(demo_task):
    with pytest.raises(ValueError):
        solve(demo_task, mode="magic")
    with pytest.raises(ValueError):
        solve(demo_task, heuristic="hland")


# -- plan validation ---------------------------------------------------------


def test_validator_reports_first_violated_step(demo_task):
    good = solve(demo_task).plan
    swapped = Plan(steps=(good.steps[1], good.steps[0]) + good.steps[2:])
    with pytest.raises(PreconditionViolated) as err:
        validate_plan(demo_task, swapped)
    assert err.value.step_index == 0
    assert "preconditions" in str(err.value)


def test_validator_rejects_unknown_action(demo_task):
    with pytest.raises(UnknownAction):
        validate_plan(demo_task, Plan(steps=(PlanStep("teleport", ("e_shuttle-01",)),)))


def test_validator_rejects_partial_plans(demo_task):
    good = solve(demo_task).plan
    with pytest.raises(GoalNotReached):
        validate_plan(demo_task, Plan(steps=good.steps[:-1]))


def test_validator_rejects_wrong_cost_claim(demo_task):
    good = solve(demo_task).plan
    with pytest.raises(CostMismatch):
        validate_plan(demo_task, Plan(steps=good.steps, cost=good.cost + 1))
    # no claim, no check: the simulated cost is returned
    assert validate_plan(demo_task, Plan(steps=good.steps)) == good.cost


def test_validator_accepts_empty_plan_when_goal_holds():
    domain = parse_domain(
        "(define (domain m) (:types T) (:predicates (Up ?x - T))"
        " (:action Raise :parameters (?x - T) :effect (Up ?x)))"
    )
    problem = parse_problem(
        "(define (problem p) (:domain m) (:objects a - T) (:init (Up a)) (:goal (Up a)))"
    )
    task = ground(domain, problem)
    assert validate_plan(task, Plan()) == 0


# -- meeting-frontiers search -------------------------------------------------


@pytest.mark.parametrize("backend", BACKENDS)
def test_bidirectional_solves_demo_goal(backend):
    model = build_demo_model()
    domain, report = derive_domain(model)
    goal = demo_goal_2341()
    task = ground(domain, derive_problem(model, goal, report))
    reverse = ground(domain, derive_reverse_problem(model, goal, report))
    result = solve_bidirectional(task, reverse, backend=backend)
    assert result.status == "solved"
    assert validate_plan(task, result.plan) == result.cost
    assert result.cost == 50


@pytest.mark.parametrize("backend", BACKENDS)
def test_bidirectional_matches_forward_greedy_validity_on_ring(backend):
    task, reverse = _ring_task(7, reverse=True)
    result = solve_bidirectional(task, reverse, backend=backend)
    assert result.status == "solved"
    assert validate_plan(task, result.plan) == result.cost


def test_bidirectional_backends_agree_on_ring():
    task, reverse = _ring_task(9, reverse=True)
    outcomes = {
        (r.status, r.cost, r.plan)
        for r in (
            solve_bidirectional(task, reverse, backend=b) for b in BACKENDS
        )
    }
    assert len(outcomes) == 1
    status, cost, plan = outcomes.pop()
    assert status == "solved"
    assert validate_plan(task, plan) == cost


@pytest.mark.parametrize("backend", BACKENDS)
def test_bidirectional_degenerates_when_start_is_goal(backend):
    model = build_demo_model()
    domain, report = derive_domain(model)
    from prodplan.model import build_routing_graph

    graph = build_routing_graph(model)
    stay = GoalSpec(id="stay", shuttle_locations=tuple(graph.shuttle_at.items()))
    task = ground(domain, derive_problem(model, stay, report))
    reverse = ground(domain, derive_reverse_problem(model, stay, report))
    result = solve_bidirectional(task, reverse, backend=backend)
    assert result.status == "solved"
    assert result.plan.steps == ()
    assert result.cost == 0


def test_bidirectional_rejects_mismatched_reverse_task(demo_task):
    model = build_demo_model()
    domain, report = derive_domain(model)
    goals = {g.id: g for g in generate_permutation_goals(model)}
    other = next(g for g in goals.values() if g.id != demo_goal_2341().id)
    wrong_reverse = ground(domain, derive_reverse_problem(model, other, report))
    task = ground(domain, derive_problem(model, demo_goal_2341(), report))
    with pytest.raises(GroundingError):
        solve_bidirectional(task, wrong_reverse)


@pytest.mark.parametrize("backend", BACKENDS)
def test_bidirectional_reports_unsolvable(backend):
    # cut the loop: two units, one one-way edge, both occupied start and a
    # swap goal that cannot be reached
    domain = parse_domain(
        "(define (domain m) (:types T)"
        " (:predicates (Loc ?s ?u - T) (Conn ?a ?b - T))"
        " (:action Move :parameters (?s ?f ?t - T)"
        "   :precondition (and (Conn ?f ?t) (Loc ?s ?f) (not (Loc ?s ?t)))"
        "   :effect (and (not (Loc ?s ?f)) (Loc ?s ?t))))"
    )
    fwd = parse_problem(
        "(define (problem p) (:domain m) (:objects s u v - T)"
        " (:init (Conn u v) (Loc s v)) (:goal (Loc s u)))"
    )
    rev = parse_problem(
        "(define (problem p) (:domain m) (:objects s u v - T)"
        " (:init (Conn v u) (Loc s u)) (:goal (Loc s v)))"
    )
    result = solve_bidirectional(ground(domain, fwd), ground(domain, rev), backend=backend)
    assert result.status == "unsolvable"
