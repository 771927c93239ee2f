"""Search driver and plan validator on top of the ground task."""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..errors import (
    CostMismatch,
    GoalNotReached,
    GroundingError,
    PreconditionViolated,
    UnknownAction,
)
from ..pddl import Plan, PlanStep
from . import backend_module, backend_name
from ._pysearch import (
    H_BLIND,
    H_MAX,
    MEMOUT,
    MODE_GREEDY,
    MODE_OPTIMAL,
    SOLVED,
    TIMEOUT,
    UNSOLVABLE,
)
from .grounding import GroundTask

STATUS_NAMES = {
    SOLVED: "solved",
    UNSOLVABLE: "unsolvable",
    TIMEOUT: "timeout",
    MEMOUT: "memout",
}

DEFAULT_TIME_LIMIT = 300.0
DEFAULT_NODE_LIMIT = 2_000_000
# the meeting-frontiers search counts both state tables against its cap
BIDIRECTIONAL_NODE_LIMIT = 20_000_000


@dataclass(frozen=True)
class SearchResult:
    status: str
    plan: Plan | None
    cost: int | None
    expanded: int
    generated: int
    wall_time_ms: float
    backend: str

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def _flat(task: GroundTask):
    actions = task.actions
    return (
        len(task.fluents),
        sorted(task.init),
        list(task.goal_pos),
        list(task.goal_neg),
        [list(a.pre_pos) for a in actions],
        [list(a.pre_neg) for a in actions],
        [list(a.add) for a in actions],
        [list(a.delete) for a in actions],
        [a.cost for a in actions],
    )


def solve(
    task: GroundTask,
    mode: str = "optimal",
    heuristic: str = "hmax",
    time_limit: float | None = DEFAULT_TIME_LIMIT,
    node_limit: int = DEFAULT_NODE_LIMIT,
    backend: str | None = None,
) -> SearchResult:
    """Run A* (optimal, blind or hmax) or greedy best-first (hadd)."""
    if mode not in ("optimal", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    if heuristic not in ("blind", "hmax"):
        raise ValueError(f"unknown heuristic {heuristic!r}")
    module = backend_module(backend)
    used = "pure" if module.__name__.endswith("_pysearch") else "compiled"
    started = time.monotonic()
    if task.goal_statically_false:
        return SearchResult(
            "unsolvable", None, None, 0, 0, (time.monotonic() - started) * 1000.0, used
        )
    status, steps, cost, expanded, generated = module.search(
        *_flat(task),
        mode=MODE_GREEDY if mode == "greedy" else MODE_OPTIMAL,
        heuristic=H_BLIND if heuristic == "blind" else H_MAX,
        time_limit=time_limit or 0.0,
        node_limit=node_limit,
    )
    wall = (time.monotonic() - started) * 1000.0
    plan = None
    final_cost = None
    if status == SOLVED:
        plan_steps = tuple(
            PlanStep(task.actions[i].name, task.actions[i].args) for i in steps
        )
        final_cost = cost
        plan = Plan(steps=plan_steps, cost=cost)
    return SearchResult(
        STATUS_NAMES[status], plan, final_cost, expanded, generated, wall, used
    )


def _apply(action, state: frozenset) -> frozenset:
    return (state - frozenset(action.delete)) | frozenset(action.add)


def _applies(action, state: frozenset) -> bool:
    return all(f in state for f in action.pre_pos) and not any(
        f in state for f in action.pre_neg
    )


def solve_bidirectional(
    task: GroundTask,
    reverse_task: GroundTask,
    time_limit: float | None = DEFAULT_TIME_LIMIT,
    node_limit: int = BIDIRECTIONAL_NODE_LIMIT,
    backend: str | None = None,
) -> SearchResult:
    """Greedy search from both ends of a movement problem.

    ``reverse_task`` grounds the flipped routing graph with the goal
    placements as its start; its fluents are aligned to ``task`` by name.
    The two frontiers expand alternately until one state is recorded by
    both, then the backward half is translated into forward actions by
    re-simulating each edge. Falls out with the usual statuses; a plain
    forward goal hit also counts as solved.
    """
    module = backend_module(backend)
    used = "pure" if module.__name__.endswith("_pysearch") else "compiled"
    started = time.monotonic()
    if task.goal_statically_false:
        return SearchResult(
            "unsolvable", None, None, 0, 0, (time.monotonic() - started) * 1000.0, used
        )

    if set(task.fluents) != set(reverse_task.fluents):
        raise GroundingError(
            "reverse task covers a different fluent set than the forward task"
        )
    index_of = {name: i for i, name in enumerate(task.fluents)}
    remap = [index_of[name] for name in reverse_task.fluents]

    init_b = sorted(remap[i] for i in reverse_task.init)
    init_b_set = set(init_b)
    if not all(f in init_b_set for f in task.goal_pos) or any(
        f in init_b_set for f in task.goal_neg
    ):
        raise GroundingError("reverse start state does not satisfy the forward goal")

    r_actions = reverse_task.actions
    status, fwd_idx, bwd_idx, cost, expanded, generated = module.search_bidirectional(
        len(task.fluents),
        sorted(task.init),
        init_b,
        list(task.goal_pos),
        list(task.goal_neg),
        [list(a.pre_pos) for a in task.actions],
        [list(a.pre_neg) for a in task.actions],
        [list(a.add) for a in task.actions],
        [list(a.delete) for a in task.actions],
        [a.cost for a in task.actions],
        [sorted(remap[f] for f in a.pre_pos) for a in r_actions],
        [sorted(remap[f] for f in a.pre_neg) for a in r_actions],
        [sorted(remap[f] for f in a.add) for a in r_actions],
        [sorted(remap[f] for f in a.delete) for a in r_actions],
        [a.cost for a in r_actions],
        time_limit=time_limit or 0.0,
        node_limit=node_limit,
    )
    if status != SOLVED:
        wall = (time.monotonic() - started) * 1000.0
        return SearchResult(STATUS_NAMES[status], None, None, expanded, generated, wall, used)

    state = frozenset(task.init)
    for i in fwd_idx:
        state = _apply(task.actions[i], state)
    meet_from_forward = state

    trail = [frozenset(init_b)]
    for i in bwd_idx:
        action = r_actions[i]
        step = frozenset(remap[f] for f in action.delete), frozenset(
            remap[f] for f in action.add
        )
        trail.append((trail[-1] - step[0]) | step[1])
    if trail[-1] != meet_from_forward:
        raise GroundingError("frontiers report different meet states")

    spliced = list(fwd_idx)
    for later, earlier in zip(reversed(trail), reversed(trail[:-1])):
        for j, action in enumerate(task.actions):
            if _applies(action, later) and _apply(action, later) == earlier:
                spliced.append(j)
                break
        else:
            raise GroundingError("backward step has no forward counterpart")

    wall = (time.monotonic() - started) * 1000.0
    plan = Plan(
        steps=tuple(
            PlanStep(task.actions[i].name, task.actions[i].args) for i in spliced
        ),
        cost=cost,
    )
    return SearchResult("solved", plan, cost, expanded, generated, wall, used)


def validate_plan(task: GroundTask, plan: Plan) -> int:
    """Simulate the plan; returns its cost.

    Raises UnknownAction for a step that grounds to nothing,
    PreconditionViolated when no ground action of that name applies,
    GoalNotReached when the final state misses the goal and CostMismatch
    when the plan's stated cost disagrees with the simulation.
    """
    if task.goal_statically_false:
        raise GoalNotReached("goal is statically false")
    state = set(task.init)
    total = 0
    for index, step in enumerate(plan.steps):
        label = " ".join((step.action.lower(),) + tuple(a.lower() for a in step.args))
        candidates = task.actions_by_label.get(label)
        if not candidates:
            raise UnknownAction(index, f"step {index}: no ground action {label!r}")
        applied = False
        for i in candidates:
            action = task.actions[i]
            if all(f in state for f in action.pre_pos) and not any(
                f in state for f in action.pre_neg
            ):
                state.difference_update(action.delete)
                state.update(action.add)
                total += action.cost
                applied = True
                break
        if not applied:
            raise PreconditionViolated(
                index, f"preconditions of {label!r} do not hold"
            )
    if not all(f in state for f in task.goal_pos) or any(
        f in state for f in task.goal_neg
    ):
        raise GoalNotReached("plan executes but the goal does not hold afterwards")
    if plan.cost is not None and plan.cost != total:
        raise CostMismatch(f"plan says cost {plan.cost}, simulation says {total}")
    return total


__all__ = [
    "BIDIRECTIONAL_NODE_LIMIT",
    "DEFAULT_NODE_LIMIT",
    "DEFAULT_TIME_LIMIT",
    "SearchResult",
    "solve",
    "solve_bidirectional",
    "validate_plan",
    "backend_name",
]
