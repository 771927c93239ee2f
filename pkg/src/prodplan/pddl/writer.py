"""Serialize PDDL ASTs to text.

Layout follows common solver-facing conventions: one declaration per
line, two-space indent, typed name lists grouped by type. A flat name
list is only written when every entry has the default type.
"""

from __future__ import annotations

from .ast import (
    DEFAULT_TYPE,
    And,
    Atom,
    Exists,
    Expr,
    Forall,
    Increase,
    Not,
    NumericInit,
    PddlAction,
    PddlDomain,
    PddlProblem,
    Plan,
    Predicate,
    TypedName,
    When,
)


def _typed_list(names: tuple[TypedName, ...]) -> str:
    if not names:
        return ""
    if all(n.type == DEFAULT_TYPE for n in names):
        return " ".join(n.name for n in names)
    parts = []
    group: list[str] = []
    group_type = names[0].type
    for n in names:
        if n.type != group_type:
            parts.append(f"{' '.join(group)} - {group_type}")
            group, group_type = [], n.type
        group.append(n.name)
    parts.append(f"{' '.join(group)} - {group_type}")
    return " ".join(parts)


def _expr(node: Expr, indent: int) -> str:
    pad = "  " * indent
    if isinstance(node, Atom):
        inner = " ".join((node.predicate,) + node.args)
        return f"{pad}({inner})"
    if isinstance(node, Not):
        return f"{pad}(not {_expr(node.item, 0)})"
    if isinstance(node, And):
        if not node.items:
            return f"{pad}(and)"
        body = "\n".join(_expr(i, indent + 1) for i in node.items)
        return f"{pad}(and\n{body})"
    if isinstance(node, Exists):
        head = _typed_list(node.variables)
        return f"{pad}(exists ({head})\n{_expr(node.condition, indent + 1)})"
    if isinstance(node, Forall):
        head = _typed_list(node.variables)
        return f"{pad}(forall ({head})\n{_expr(node.body, indent + 1)})"
    if isinstance(node, When):
        return (
            f"{pad}(when\n{_expr(node.condition, indent + 1)}"
            f"\n{_expr(node.effect, indent + 1)})"
        )
    if isinstance(node, Increase):
        return f"{pad}(increase ({node.function}) {node.amount})"
    raise TypeError(f"cannot serialize {type(node).__name__}")


def _predicate(p: Predicate) -> str:
    if not p.parameters:
        return f"({p.name})"
    return f"({p.name} {_typed_list(p.parameters)})"


def _action(a: PddlAction) -> str:
    lines = [f"(:action {a.name}", f"  :parameters ({_typed_list(a.parameters)})"]
    if a.precondition is not None:
        lines.append("  :precondition")
        lines.append(_expr(a.precondition, 2))
    if a.effect is not None:
        lines.append("  :effect")
        lines.append(_expr(a.effect, 2))
    return "\n".join(lines) + ")"


def write_domain(domain: PddlDomain) -> str:
    out = [f"(define (domain {domain.name})"]
    if domain.requirements:
        out.append(f"  (:requirements {' '.join(domain.requirements)})")
    if domain.types:
        out.append(f"  (:types {_typed_list(domain.types)})")
    if domain.constants:
        out.append(f"  (:constants {_typed_list(domain.constants)})")
    if domain.predicates:
        preds = "\n".join(f"    {_predicate(p)}" for p in domain.predicates)
        out.append(f"  (:predicates\n{preds})")
    if domain.functions:
        funcs = " ".join(f"({f})" for f in domain.functions)
        out.append(f"  (:functions {funcs})")
    for action in domain.actions:
        body = "\n".join("  " + line for line in _action(action).splitlines())
        out.append(body)
    return "\n".join(out) + ")\n"


def write_problem(problem: PddlProblem) -> str:
    out = [
        f"(define (problem {problem.name})",
        f"  (:domain {problem.domain_name})",
    ]
    if problem.objects:
        out.append(f"  (:objects {_typed_list(problem.objects)})")
    inits = []
    for item in problem.init:
        if isinstance(item, NumericInit):
            inits.append(f"    (= ({item.function}) {item.value})")
        else:
            inits.append(_expr(item, 2))
    out.append("  (:init\n" + "\n".join(inits) + ")")
    if problem.goal is not None:
        out.append("  (:goal\n" + _expr(problem.goal, 2) + ")")
    if problem.minimize is not None:
        out.append(f"  (:metric minimize ({problem.minimize}))")
    return "\n".join(out) + ")\n"


def write_plan(plan: Plan) -> str:
    lines = [f"({' '.join((s.action,) + s.args)})" for s in plan.steps]
    if plan.cost is not None:
        lines.append(f"; cost = {plan.cost} (general cost)")
    return "\n".join(lines) + "\n"
