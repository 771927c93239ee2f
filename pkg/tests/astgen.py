"""Seeded random AST builders for parser/writer round-trip checks.

The builders produce syntactically valid trees within the supported
subset; they make no attempt at semantic coherence. Names avoid the
connective keywords so a predicate is never mistaken for one.
"""

from __future__ import annotations

import random

from prodplan.pddl import (
    And,
    Atom,
    Exists,
    Forall,
    Increase,
    Not,
    PddlAction,
    PddlDomain,
    PddlProblem,
    Plan,
    PlanStep,
    Predicate,
    TypedName,
    When,
)
from prodplan.pddl.ast import SUPPORTED_REQUIREMENTS, DEFAULT_TYPE, NumericInit

_NAME_STEMS = ("move", "Load", "SET-Prop", "eq_item", "slotFree", "Track-12")


def _name(rng: random.Random) -> str:
    return f"{rng.choice(_NAME_STEMS)}{rng.randrange(1000)}"


def _typed_names(rng: random.Random, variables: bool) -> tuple[TypedName, ...]:
    count = rng.randrange(1, 4)
    types = [DEFAULT_TYPE, "Equipment", "Lot"]
    out = []
    for i in range(count):
        name = f"?v{i}" if variables else _name(rng)
        out.append(TypedName(name, rng.choice(types)))
    return tuple(out)


def _atom(rng: random.Random, preds: tuple[Predicate, ...], terms: list[str]) -> Atom:
    pred = rng.choice(preds)
    return Atom(pred.name, tuple(rng.choice(terms) for _ in pred.parameters))


def _condition(rng, preds, terms, depth) -> Atom | Not | And | Exists | Forall:
    roll = rng.random()
    if depth <= 0 or roll < 0.45:
        return _atom(rng, preds, terms)
    if roll < 0.6:
        return Not(_condition(rng, preds, terms, depth - 1))
    if roll < 0.8:
        return And(
            tuple(_condition(rng, preds, terms, depth - 1) for _ in range(rng.randrange(0, 4)))
        )
    variables = _typed_names(rng, True)
    scope = terms + [v.name for v in variables]
    inner = _condition(rng, preds, scope, depth - 1)
    if roll < 0.9:
        return Exists(variables, inner)
    return Forall(variables, inner)


def _effect(rng, preds, terms, depth):
    roll = rng.random()
    if depth <= 0 or roll < 0.4:
        return _atom(rng, preds, terms)
    if roll < 0.55:
        return Not(_atom(rng, preds, terms))
    if roll < 0.65:
        return Increase("total-cost", rng.randrange(0, 500))
    if roll < 0.8:
        return And(tuple(_effect(rng, preds, terms, depth - 1) for _ in range(rng.randrange(0, 4))))
    if roll < 0.9:
        return When(
            _condition(rng, preds, terms, depth - 1), _effect(rng, preds, terms, depth - 1)
        )
    variables = _typed_names(rng, True)
    scope = terms + [v.name for v in variables]
    return Forall(variables, _effect(rng, preds, scope, depth - 1))


def random_domain(rng: random.Random) -> PddlDomain:
    preds = tuple(
        Predicate(f"p{i}-{_name(rng)}", _typed_names(rng, True)[: rng.randrange(0, 3)])
        for i in range(rng.randrange(1, 5))
    )
    constants = _typed_names(rng, False) if rng.random() < 0.7 else ()
    terms = [c.name for c in constants] or [_name(rng)]
    actions = []
    for i in range(rng.randrange(1, 4)):
        params = _typed_names(rng, True) if rng.random() < 0.8 else ()
        scope = terms + [p.name for p in params]
        actions.append(
            PddlAction(
                name=f"a{i}-{_name(rng)}",
                parameters=params,
                precondition=_condition(rng, preds, scope, 3) if rng.random() < 0.9 else None,
                effect=_effect(rng, preds, scope, 3) if rng.random() < 0.9 else None,
            )
        )
    n_reqs = rng.randrange(0, len(SUPPORTED_REQUIREMENTS) + 1)
    return PddlDomain(
        name=f"dom-{rng.randrange(10_000)}",
        requirements=tuple(rng.sample(SUPPORTED_REQUIREMENTS, n_reqs)),
        types=_typed_names(rng, False) if rng.random() < 0.8 else (),
        constants=constants,
        predicates=preds,
        functions=("total-cost",) if rng.random() < 0.8 else (),
        actions=tuple(actions),
    )


def random_problem(rng: random.Random, domain: PddlDomain) -> PddlProblem:
    objects = _typed_names(rng, False)
    terms = [o.name for o in objects]
    init: list = [_atom(rng, domain.predicates, terms) for _ in range(rng.randrange(0, 6))]
    if rng.random() < 0.7:
        init.append(NumericInit("total-cost", 0))
    return PddlProblem(
        name=f"prob-{rng.randrange(10_000)}",
        domain_name=domain.name,
        objects=objects,
        init=tuple(init),
        goal=_condition(rng, domain.predicates, terms, 3) if rng.random() < 0.9 else None,
        minimize="total-cost" if rng.random() < 0.7 else None,
    )


def random_plan(rng: random.Random) -> Plan:
    steps = tuple(
        PlanStep(_name(rng), tuple(_name(rng) for _ in range(rng.randrange(0, 4))))
        for _ in range(rng.randrange(0, 8))
    )
    return Plan(steps=steps, cost=rng.randrange(0, 9999) if rng.random() < 0.7 else None)
