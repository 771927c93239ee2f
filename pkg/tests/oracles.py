"""Independent reference implementations used to cross-check the planner.

Everything in here is deliberately naive: plain frozensets, no bitmasks, no
shared code with prodplan.planner.  Slow but obviously correct.
"""
from __future__ import annotations

import heapq
from typing import Dict, FrozenSet, List, Optional, Tuple

State = FrozenSet[str]


def applicable(action, state: State) -> bool:
    return all(p in state for p in action.pre_pos) and not any(
        n in state for n in action.pre_neg
    )


def apply(action, state: State) -> State:
    return frozenset((state - frozenset(action.delete)) | frozenset(action.add))


def enumerate_states(task) -> List[State]:
    """Every state reachable from the initial state, by plain BFS."""
    init = frozenset(task.fluents[i] for i in task.init)
    actions = _named(task)
    seen = {init}
    frontier = [init]
    while frontier:
        state = frontier.pop()
        for action in actions:
            if applicable(action, state):
                succ = apply(action, state)
                if succ not in seen:
                    seen.add(succ)
                    frontier.append(succ)
    return sorted(seen, key=sorted)


def is_goal(task, state: State) -> bool:
    goal_pos = {task.fluents[i] for i in task.goal_pos}
    goal_neg = {task.fluents[i] for i in task.goal_neg}
    return goal_pos <= state and not (goal_neg & state)


def shortest_cost(task, start: Optional[State] = None) -> Optional[int]:
    """Uniform-cost search from ``start`` (default: initial state) to the goal.

    Returns the optimal plan cost, or None when the goal is unreachable.
    """
    if start is None:
        start = frozenset(task.fluents[i] for i in task.init)
    actions = _named(task)
    dist: Dict[State, int] = {start: 0}
    heap: List[Tuple[int, int, State]] = [(0, 0, start)]
    seq = 0
    while heap:
        g, _, state = heapq.heappop(heap)
        if g > dist.get(state, g):
            continue
        if is_goal(task, state):
            return g
        for action in actions:
            if applicable(action, state):
                succ = apply(action, state)
                g2 = g + action.cost
                if g2 < dist.get(succ, g2 + 1):
                    dist[succ] = g2
                    seq += 1
                    heapq.heappush(heap, (g2, seq, succ))
    return None


def all_goal_distances(task) -> Dict[State, Optional[int]]:
    """Exact distance-to-goal for every reachable state (reverse Dijkstra
    would need inverted actions; the space is small, so run UCS per state)."""
    out: Dict[State, Optional[int]] = {}
    for state in enumerate_states(task):
        out[state] = shortest_cost(task, start=state)
    return out


class _Named:
    __slots__ = ("pre_pos", "pre_neg", "add", "delete", "cost")

    def __init__(self, task, action) -> None:
        name = task.fluents
        self.pre_pos = frozenset(name[i] for i in action.pre_pos)
        self.pre_neg = frozenset(name[i] for i in action.pre_neg)
        self.add = frozenset(name[i] for i in action.add)
        self.delete = frozenset(name[i] for i in action.delete)
        self.cost = action.cost


def _named(task) -> List[_Named]:
    return [_Named(task, a) for a in task.actions]
