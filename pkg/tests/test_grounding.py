from __future__ import annotations

import pytest

from prodplan.demo import build_demo_model, demo_goal_2341
from prodplan.errors import (
    GroundingError,
    TypeMismatch,
    UnboundVariable,
    UnsupportedFeature,
)
from prodplan.pddl import parse_domain, parse_problem
from prodplan.planner.grounding import ground
from prodplan.transform import derive_domain, derive_problem

import oracles

MICRO_DOMAIN = """
(define (domain micro)
  (:types Thing)
  (:predicates (Heavy ?x - Thing) (Up ?x - Thing) (Linked ?a ?b - Thing))
  (:functions (total-cost))
  (:action Lift
    :parameters (?x - Thing)
    :precondition (and (not (Up ?x)) (not (Heavy ?x)))
    :effect (and (Up ?x) (increase (total-cost) 2)))
  (:action Chain
    :parameters (?x - Thing)
    :precondition (exists (?y - Thing) (and (Linked ?x ?y) (Up ?y)))
    :effect (Up ?x)))
"""


def _micro_problem(init: str, goal: str) -> str:
    return (
        "(define (problem m) (:domain micro)"
        "  (:objects a b c - Thing)"
        f"  (:init {init} (= (total-cost) 0))"
        f"  (:goal {goal})"
        "  (:metric minimize (total-cost)))"
    )


def _ground_micro(init: str, goal: str):
    return ground(parse_domain(MICRO_DOMAIN), parse_problem(_micro_problem(init, goal)))


def test_demo_counts(demo_task):
    task = demo_task
    assert len(task.actions) == 24
    assert len(task.fluents) == 25
    assert not any(a.name.startswith("set") for a in task.actions)
    assert len(task.goal_pos) == 4 and not task.goal_neg
    assert not task.goal_statically_false
    # every (shuttle, edge) pair gives exactly one variant
    assert len(task.actions_by_label) == 24


def test_fluent_name_shapes(demo_task):
    task = demo_task
    assert "shuttlelocation e_shuttle-01 e_positioningunit-03" in task.fluents
    assert "equipmentpropertytrue ep_positioningunitoccupied-01" in task.fluents
    # static predicates never become fluents
    assert not any(f.startswith("positioningunitconnection") for f in task.fluents)
    assert not any(f.startswith("equipmentclassed") for f in task.fluents)


def test_demo_init_matches_model(demo_task):
    init = {demo_task.fluents[i] for i in demo_task.init}
    assert init == {
        "shuttlelocation e_shuttle-01 e_positioningunit-03",
        "shuttlelocation e_shuttle-02 e_positioningunit-01",
        "shuttlelocation e_shuttle-03 e_positioningunit-04",
        "shuttlelocation e_shuttle-04 e_positioningunit-02",
        "equipmentpropertytrue ep_positioningunitoccupied-01",
        "equipmentpropertytrue ep_positioningunitoccupied-02",
        "equipmentpropertytrue ep_positioningunitoccupied-03",
        "equipmentpropertytrue ep_positioningunitoccupied-04",
    }


def test_demo_action_semantics(demo_task):
    task = demo_task
    label = "moveshuttle e_shuttle-01 e_positioningunit-03 e_positioningunit-05"
    (idx,) = task.actions_by_label[label]
    action = task.actions[idx]
    names = task.fluents
    assert {names[i] for i in action.pre_pos} == {
        "shuttlelocation e_shuttle-01 e_positioningunit-03",
        "equipmentpropertytrue ep_positioningunitoccupied-03",
    }
    assert {names[i] for i in action.pre_neg} == {
        "shuttlelocation e_shuttle-01 e_positioningunit-05",
        "equipmentpropertytrue ep_positioningunitoccupied-05",
    }
    assert {names[i] for i in action.add} == {
        "shuttlelocation e_shuttle-01 e_positioningunit-05",
        "equipmentpropertytrue ep_positioningunitoccupied-05",
    }
    assert {names[i] for i in action.delete} == {
        "shuttlelocation e_shuttle-01 e_positioningunit-03",
        "equipmentpropertytrue ep_positioningunitoccupied-03",
    }
    assert action.cost == 10


def test_switchable_property_enables_set_actions():
    model = build_demo_model(with_switchable_property=True)
    domain, report = derive_domain(model)
    problem = derive_problem(model, demo_goal_2341(), report)
    task = ground(domain, problem)
    set_actions = [a for a in task.actions if a.name.startswith("set")]
    # one true + one false setter per switchable equipment property
    assert len(set_actions) == 8
    switchable = {a.args[0] for a in set_actions}
    assert all(arg.startswith("ep_beaconon") for arg in switchable)
    assert len(switchable) == 4


def test_drilling_task_grounds_reach_and_lots():
    from prodplan.model_io import generate_drill_goal, generate_ring_layout

    model = generate_ring_layout(5, 0.65, with_robot_and_boards=True)
    domain, report = derive_domain(model)
    problem = derive_problem(model, generate_drill_goal(model), report)
    task = ground(domain, problem)
    drills = [a for a in task.actions if a.name == "drillboard"]
    boards = len(model.material_lots)
    reach_units = sum(
        1 for c in model.connections if c.connection_type == "Reach-Connection"
    )
    # static reach/mount pruning: every drill pins one board to one unit
    assert len(drills) == boards * reach_units
    for action in drills:
        assert len(action.pre_pos) == 1  # only the shuttle position is fluent
        assert task.fluents[action.pre_pos[0]].startswith("shuttlelocation")


def test_exists_residues_expand_into_variants():
    task = _ground_micro("(Linked a b) (Linked a c)", "(Up a)")
    chains = [a for a in task.actions if a.name == "chain" and a.args == ("a",)]
    assert len(chains) == 2
    residues = {task.fluents[a.pre_pos[0]] for a in chains}
    assert residues == {"up b", "up c"}


def test_statically_false_exists_drops_action():
    task = _ground_micro("(Up b)", "(Up a)")
    assert all(not (a.name == "chain") for a in task.actions)


def test_heavy_static_filter():
    # Heavy is static (no effect touches it): true atoms kill Lift variants
    task = _ground_micro("(Heavy a) (Up b)", "(and (Up a))")
    lifted = {a.args[0] for a in task.actions if a.name == "lift"}
    assert lifted == {"b", "c"}
    # goal on a statically false atom is flagged, not crashed
    task = ground(
        parse_domain(MICRO_DOMAIN),
        parse_problem(_micro_problem("(Heavy a)", "(and (Up b) (Heavy b))")),
    )
    assert task.goal_statically_false


def test_goal_negative_literals():
    task = _ground_micro("(Up a)", "(and (not (Up a)) (Up b))")
    names = task.fluents
    assert {names[i] for i in task.goal_pos} == {"up b"}
    assert {names[i] for i in task.goal_neg} == {"up a"}


def test_oracle_agrees_on_micro_reachability():
    task = _ground_micro("(Linked a b) (Linked b c)", "(Up a)")
    states = oracles.enumerate_states(task)
    # c lifts freely; b chains from c or lifts; a chains from b or lifts
    assert frozenset() in states
    assert frozenset({"up a", "up b", "up c"}) in states
    assert oracles.shortest_cost(task) == 2  # lift a directly


def test_duplicate_objects_rejected():
    text = _micro_problem("(Up a)", "(Up a)").replace(
        "(:objects a b c - Thing)", "(:objects a a - Thing)"
    )
    with pytest.raises(GroundingError):
        ground(parse_domain(MICRO_DOMAIN), parse_problem(text))


def test_unknown_object_and_predicate_rejected():
    with pytest.raises(GroundingError):
        _ground_micro("(Up zz)", "(Up a)")
    with pytest.raises(GroundingError):
        _ground_micro("(Up a)", "(Wat a)")
    with pytest.raises(GroundingError):
        _ground_micro("(Up a b)", "(Up a)")


def test_domain_name_mismatch_rejected():
    problem = parse_problem(
        "(define (problem p) (:domain other) (:init) (:goal (and)))"
    )
    with pytest.raises(GroundingError):
        ground(parse_domain(MICRO_DOMAIN), problem)


def test_unknown_types_rejected():
    domain = parse_domain(
        "(define (domain micro) (:types Thing) (:predicates (Up ?x - Thing))"
        " (:action Bad :parameters (?x - Ghost) :effect (Up ?x)))"
    )
    problem = parse_problem(
        "(define (problem m) (:domain micro) (:objects a - Thing) (:init) (:goal (Up a)))"
    )
    with pytest.raises(TypeMismatch):
        ground(domain, problem)
    problem = parse_problem(
        "(define (problem m) (:domain micro) (:objects q - Ghost) (:init) (:goal (and)))"
    )
    with pytest.raises(TypeMismatch):
        ground(parse_domain(MICRO_DOMAIN), problem)


def test_unbound_variable_rejected():
    domain = parse_domain(
        "(define (domain micro) (:types Thing) (:predicates (Up ?x - Thing))"
        " (:action Bad :parameters (?x - Thing) :effect (Up ?y)))"
    )
    problem = parse_problem(
        "(define (problem m) (:domain micro) (:objects a - Thing) (:init) (:goal (Up a)))"
    )
    with pytest.raises(UnboundVariable):
        ground(domain, problem)


def test_nonzero_cost_init_rejected():
    text = _micro_problem("(Up a)", "(Up a)").replace(
        "(= (total-cost) 0)", "(= (total-cost) 7)"
    )
    with pytest.raises(UnsupportedFeature):
        ground(parse_domain(MICRO_DOMAIN), parse_problem(text))


def test_unreachable_precondition_prunes_action():
    domain = parse_domain(
        "(define (domain micro) (:types Thing)"
        " (:predicates (Up ?x - Thing) (Down ?x - Thing))"
        " (:action Flip :parameters (?x - Thing)"
        "   :precondition (Down ?x) :effect (Up ?x))"
        " (:action Rise :parameters (?x - Thing) :effect (Up ?x)))"
    )
    problem = parse_problem(
        "(define (problem m) (:domain micro) (:objects a - Thing)"
        " (:init) (:goal (Up a)))"
    )
    task = ground(domain, problem)
    # Down is affected by nothing and never true: Flip cannot fire
    assert [a.name for a in task.actions] == ["rise"]
