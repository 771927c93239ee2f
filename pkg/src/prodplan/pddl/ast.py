"""AST node types for the supported PDDL subset.

Names keep the case they were written with; PDDL keywords are handled
case-insensitively by the parser. All nodes are frozen, so structural
equality works for round-trip checks.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_TYPE = "object"

SUPPORTED_REQUIREMENTS = (
    ":strips",
    ":typing",
    ":negative-preconditions",
    ":existential-preconditions",
    ":universal-preconditions",
    ":conditional-effects",
    ":action-costs",
)


@dataclass(frozen=True)
class TypedName:
    """A name (or ?variable) with its type."""

    name: str
    type: str = DEFAULT_TYPE


@dataclass(frozen=True)
class Predicate:
    name: str
    parameters: tuple[TypedName, ...] = ()


@dataclass(frozen=True)
class Atom:
    """Predicate application; arguments are constants or ?variables."""

    predicate: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class Not:
    item: "Expr"


@dataclass(frozen=True)
class And:
    items: tuple["Expr", ...] = ()


@dataclass(frozen=True)
class Exists:
    variables: tuple[TypedName, ...]
    condition: "Expr"


@dataclass(frozen=True)
class Forall:
    variables: tuple[TypedName, ...]
    body: "Expr"


@dataclass(frozen=True)
class When:
    condition: "Expr"
    effect: "Expr"


@dataclass(frozen=True)
class Increase:
    """(increase (total-cost) amount); the only numeric effect supported."""

    function: str
    amount: int


Expr = Atom | Not | And | Exists | Forall | When | Increase


@dataclass(frozen=True)
class PddlAction:
    name: str
    parameters: tuple[TypedName, ...] = ()
    precondition: Expr | None = None
    effect: Expr | None = None


@dataclass(frozen=True)
class PddlDomain:
    name: str
    requirements: tuple[str, ...] = ()
    types: tuple[TypedName, ...] = ()
    constants: tuple[TypedName, ...] = ()
    predicates: tuple[Predicate, ...] = ()
    functions: tuple[str, ...] = ()
    actions: tuple[PddlAction, ...] = ()


@dataclass(frozen=True)
class NumericInit:
    """(= (function) value) inside :init."""

    function: str
    value: int


@dataclass(frozen=True)
class PddlProblem:
    name: str
    domain_name: str
    objects: tuple[TypedName, ...] = ()
    init: tuple[Atom | NumericInit, ...] = ()
    goal: Expr | None = None
    minimize: str | None = None


@dataclass(frozen=True)
class PlanStep:
    action: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...] = ()
    cost: int | None = None
