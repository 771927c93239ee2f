# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled search backend: same contract and result convention as
_pysearch, states held as uint64 word arrays interned in an
unordered_map, heap entries as POD structs. Tie-breaking mirrors the
pure backend so both produce identical plans."""

import time

from cython.operator cimport dereference as deref
from libc.stdint cimport int64_t, uint64_t
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

SOLVED, UNSOLVABLE, TIMEOUT, MEMOUT = 0, 1, 2, 3
MODE_OPTIMAL, MODE_GREEDY = 0, 1
H_BLIND, H_MAX, H_ADD = 0, 1, 2

cdef double INF = float("inf")
cdef int64_t UNREACHED = <int64_t>1 << 62


cdef struct HeapEntry:
    double f
    double h
    int64_t seq
    int64_t g
    int sid


cdef inline bint _entry_less(HeapEntry a, HeapEntry b):
    if a.f != b.f:
        return a.f < b.f
    if a.h != b.h:
        return a.h < b.h
    return a.seq < b.seq


cdef void _heap_push(vector[HeapEntry]& heap, HeapEntry entry):
    cdef size_t i = heap.size()
    cdef size_t parent
    cdef HeapEntry tmp
    heap.push_back(entry)
    while i > 0:
        parent = (i - 1) >> 1
        if _entry_less(heap[i], heap[parent]):
            tmp = heap[parent]
            heap[parent] = heap[i]
            heap[i] = tmp
            i = parent
        else:
            break


cdef HeapEntry _heap_pop(vector[HeapEntry]& heap):
    cdef HeapEntry top = heap[0]
    cdef size_t i = 0, child, size
    cdef HeapEntry tmp
    heap[0] = heap[heap.size() - 1]
    heap.pop_back()
    size = heap.size()
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and _entry_less(heap[child + 1], heap[child]):
            child += 1
        if _entry_less(heap[child], heap[i]):
            tmp = heap[i]
            heap[i] = heap[child]
            heap[child] = tmp
            i = child
        else:
            break
    return top


cdef class _Heuristic:
    """Delete-relaxed fluent costs per state (hmax or hadd).

    Integer action costs allow a monotone bucket queue in place of a
    binary heap; the computed values match the pure backend's Dijkstra
    exactly.
    """

    cdef int n_fluents, n_actions, n_goals, n_buckets
    cdef bint use_sum
    cdef vector[int] cons_start, cons_action
    cdef vector[int] add_start, add_fluent
    cdef vector[int] base_remaining
    cdef vector[int64_t] costs
    cdef vector[int] goals
    cdef vector[bint] is_goal
    # scratch buffers reused across calls
    cdef vector[int64_t] value, agg
    cdef vector[int] remaining
    cdef vector[bint] done
    cdef vector[vector[int]] buckets
    cdef vector[int] dirty

    def __init__(self, int n_fluents, pre_pos, add, costs, goal_pos, bint use_sum):
        cdef int a, f, i, total
        cdef int64_t max_cost = 1
        self.n_fluents = n_fluents
        self.n_actions = len(costs)
        self.use_sum = use_sum
        counts = [0] * n_fluents
        for a in range(self.n_actions):
            for f in pre_pos[a]:
                counts[f] += 1
        self.cons_start.resize(n_fluents + 1)
        total = 0
        for f in range(n_fluents):
            self.cons_start[f] = total
            total += counts[f]
        self.cons_start[n_fluents] = total
        self.cons_action.resize(total)
        fill = [0] * n_fluents
        for a in range(self.n_actions):
            for f in pre_pos[a]:
                self.cons_action[self.cons_start[f] + fill[f]] = a
                fill[f] += 1
        self.add_start.resize(self.n_actions + 1)
        total = 0
        for a in range(self.n_actions):
            self.add_start[a] = total
            total += len(add[a])
        self.add_start[self.n_actions] = total
        self.add_fluent.resize(total)
        for a in range(self.n_actions):
            i = 0
            for f in add[a]:
                self.add_fluent[self.add_start[a] + i] = f
                i += 1
        self.base_remaining.resize(self.n_actions)
        self.costs.resize(self.n_actions)
        for a in range(self.n_actions):
            self.base_remaining[a] = len(pre_pos[a])
            self.costs[a] = costs[a]
            if self.costs[a] > max_cost:
                max_cost = self.costs[a]
        self.n_goals = len(goal_pos)
        self.goals.resize(self.n_goals)
        self.is_goal.resize(n_fluents)
        for f in range(n_fluents):
            self.is_goal[f] = False
        i = 0
        for f in goal_pos:
            self.goals[i] = f
            self.is_goal[f] = True
            i += 1
        # a fluent finalizes at <= n_fluents chained firings of max cost
        self.n_buckets = <int>((<int64_t>n_fluents + 1) * max_cost + 1)
        self.buckets.resize(self.n_buckets)
        self.value.resize(n_fluents)
        self.agg.resize(self.n_actions)
        self.remaining.resize(self.n_actions)
        self.done.resize(n_fluents)

    cdef double h_of(self, uint64_t* state, int words):
        cdef int f, a, j, g, goal_left, cur, k
        cdef int64_t fire, total
        if self.n_goals == 0:
            return 0.0
        for j in range(<int>self.dirty.size()):
            self.buckets[self.dirty[j]].clear()
        self.dirty.clear()
        for f in range(self.n_fluents):
            self.value[f] = UNREACHED
            self.done[f] = False
        for a in range(self.n_actions):
            self.agg[a] = 0
            self.remaining[a] = self.base_remaining[a]
        for f in range(self.n_fluents):
            if state[f >> 6] & ((<uint64_t>1) << (f & 63)):
                self.value[f] = 0
                if self.buckets[0].size() == 0:
                    self.dirty.push_back(0)
                self.buckets[0].push_back(f)
        for a in range(self.n_actions):
            if self.remaining[a] == 0:
                fire = self.costs[a]
                for j in range(self.add_start[a], self.add_start[a + 1]):
                    g = self.add_fluent[j]
                    if fire < self.value[g]:
                        self.value[g] = fire
                        if self.buckets[<int>fire].size() == 0:
                            self.dirty.push_back(<int>fire)
                        self.buckets[<int>fire].push_back(g)
        goal_left = self.n_goals
        cur = 0
        while cur < self.n_buckets and goal_left > 0:
            k = 0
            while k < <int>self.buckets[cur].size():
                f = self.buckets[cur][k]
                k += 1
                if self.done[f] or self.value[f] != cur:
                    continue
                self.done[f] = True
                if self.is_goal[f]:
                    goal_left -= 1
                    if goal_left == 0:
                        break
                for j in range(self.cons_start[f], self.cons_start[f + 1]):
                    a = self.cons_action[j]
                    self.remaining[a] -= 1
                    if self.use_sum:
                        self.agg[a] += cur
                    elif cur > self.agg[a]:
                        self.agg[a] = cur
                    if self.remaining[a] == 0:
                        fire = self.agg[a] + self.costs[a]
                        for g in range(self.add_start[a], self.add_start[a + 1]):
                            if fire < self.value[self.add_fluent[g]]:
                                self.value[self.add_fluent[g]] = fire
                                if self.buckets[<int>fire].size() == 0:
                                    self.dirty.push_back(<int>fire)
                                self.buckets[<int>fire].push_back(<int>self.add_fluent[g])
            cur += 1
        total = 0
        for j in range(self.n_goals):
            f = self.goals[j]
            if self.value[f] >= UNREACHED:
                return INF
            if self.use_sum:
                total += self.value[f]
            elif self.value[f] > total:
                total = self.value[f]
        return <double>total


cdef void _pack_masks(
    int n_actions,
    int words,
    pre_pos,
    pre_neg,
    add,
    delete,
    costs,
    vector[uint64_t]& pre_pos_m,
    vector[uint64_t]& pre_neg_m,
    vector[uint64_t]& add_m,
    vector[uint64_t]& del_keep_m,
    vector[int64_t]& action_cost,
):
    cdef int a, w, f
    pre_pos_m.resize(n_actions * words)
    pre_neg_m.resize(n_actions * words)
    add_m.resize(n_actions * words)
    del_keep_m.resize(n_actions * words)
    action_cost.resize(n_actions)
    for a in range(n_actions):
        for w in range(words):
            del_keep_m[a * words + w] = ~(<uint64_t>0)
        for f in pre_pos[a]:
            pre_pos_m[a * words + (f >> 6)] |= (<uint64_t>1) << (f & 63)
        for f in pre_neg[a]:
            pre_neg_m[a * words + (f >> 6)] |= (<uint64_t>1) << (f & 63)
        for f in add[a]:
            add_m[a * words + (f >> 6)] |= (<uint64_t>1) << (f & 63)
        for f in delete[a]:
            del_keep_m[a * words + (f >> 6)] &= ~((<uint64_t>1) << (f & 63))
        action_cost[a] = costs[a]


def search(
    int n_fluents,
    init,
    goal_pos,
    goal_neg,
    pre_pos,
    pre_neg,
    add,
    delete,
    costs,
    int mode=MODE_OPTIMAL,
    int heuristic=H_MAX,
    double time_limit=300.0,
    int64_t node_limit=2_000_000,
):
    """Returns (status, action_indices, cost, expanded, generated)."""
    cdef int words = (n_fluents + 63) >> 6
    if words == 0:
        words = 1
    cdef int n_actions = len(costs)
    cdef vector[uint64_t] pre_pos_m, pre_neg_m, add_m, del_keep_m
    cdef vector[uint64_t] goal_pos_m, goal_neg_m, start, scratch
    cdef vector[int64_t] action_cost
    cdef int a, w, f
    _pack_masks(n_actions, words, pre_pos, pre_neg, add, delete, costs,
                pre_pos_m, pre_neg_m, add_m, del_keep_m, action_cost)
    goal_pos_m.resize(words)
    goal_neg_m.resize(words)
    start.resize(words)
    scratch.resize(words)
    for f in goal_pos:
        goal_pos_m[f >> 6] |= (<uint64_t>1) << (f & 63)
    for f in goal_neg:
        goal_neg_m[f >> 6] |= (<uint64_t>1) << (f & 63)
    for f in init:
        start[f >> 6] |= (<uint64_t>1) << (f & 63)

    cdef bint greedy = mode == MODE_GREEDY
    cdef _Heuristic heval = None
    if greedy:
        heval = _Heuristic(n_fluents, pre_pos, add, costs, goal_pos, True)
    elif heuristic != H_BLIND:
        heval = _Heuristic(n_fluents, pre_pos, add, costs, goal_pos, False)

    cdef double h0 = heval.h_of(&start[0], words) if heval is not None else 0.0
    if h0 == INF:
        return UNSOLVABLE, [], 0, 0, 0

    # state interning: byte key -> id; per-id data in parallel vectors
    cdef vector[uint64_t] pool
    cdef unordered_map[string, int] ids
    cdef vector[int64_t] g_best
    cdef vector[int] parent_action
    cdef vector[int] parent_state

    pool.insert(pool.end(), start.begin(), start.end())
    ids[string(<char*>&start[0], words * 8)] = 0
    g_best.push_back(0)
    parent_action.push_back(-1)
    parent_state.push_back(0)

    cdef vector[HeapEntry] heap
    cdef HeapEntry entry, pushed
    entry.f = h0
    entry.h = h0
    entry.seq = 0
    entry.g = 0
    entry.sid = 0
    _heap_push(heap, entry)

    cdef int64_t seq = 0, expanded = 0, generated = 0, ng
    cdef double deadline = 0.0
    cdef bint has_deadline = time_limit > 0
    if has_deadline:
        deadline = time.monotonic() + time_limit
    cdef int sid, nid
    cdef uint64_t* state
    cdef bint applicable, at_goal
    cdef double h, h_here
    cdef string key
    cdef unordered_map[string, int].iterator found

    while heap.size() > 0:
        if has_deadline and (expanded & 0x7F) == 0:
            if time.monotonic() > deadline:
                return TIMEOUT, [], 0, expanded, generated
        entry = _heap_pop(heap)
        sid = entry.sid
        if entry.g != g_best[sid]:
            continue  # superseded by a cheaper path
        state = &pool[sid * words]
        at_goal = True
        for w in range(words):
            if (state[w] & goal_pos_m[w]) != goal_pos_m[w] or (state[w] & goal_neg_m[w]):
                at_goal = False
                break
        if at_goal:
            steps = []
            while parent_action[sid] >= 0:
                steps.append(parent_action[sid])
                sid = parent_state[sid]
            steps.reverse()
            return SOLVED, steps, entry.g, expanded, generated
        if greedy:
            h_here = heval.h_of(state, words)
            if h_here == INF:
                continue  # relaxed dead end, never expand
        expanded += 1
        for a in range(n_actions):
            applicable = True
            for w in range(words):
                if (state[w] & pre_pos_m[a * words + w]) != pre_pos_m[a * words + w]:
                    applicable = False
                    break
                if state[w] & pre_neg_m[a * words + w]:
                    applicable = False
                    break
            if not applicable:
                continue
            for w in range(words):
                scratch[w] = (state[w] & del_keep_m[a * words + w]) | add_m[a * words + w]
            ng = entry.g + action_cost[a]
            key = string(<char*>&scratch[0], words * 8)
            found = ids.find(key)
            if found != ids.end():
                nid = deref(found).second
                if greedy:
                    continue
                if g_best[nid] <= ng:
                    continue
                g_best[nid] = ng
                parent_action[nid] = a
                parent_state[nid] = entry.sid
            else:
                nid = <int>g_best.size()
                ids[key] = nid
                pool.insert(pool.end(), scratch.begin(), scratch.end())
                g_best.push_back(ng)
                parent_action.push_back(a)
                parent_state.push_back(entry.sid)
                state = &pool[entry.sid * words]  # pool growth may relocate
            generated += 1
            seq += 1
            if greedy:
                # deferred evaluation: queue under the parent's h
                pushed.f = h_here
                pushed.h = h_here
            else:
                if heval is not None:
                    h = heval.h_of(&pool[nid * words], words)
                    if h == INF:
                        continue
                else:
                    h = 0.0
                pushed.f = (<double>ng) + h
                pushed.h = h
            pushed.seq = seq
            pushed.g = ng
            pushed.sid = nid
            _heap_push(heap, pushed)
        if node_limit and <int64_t>g_best.size() > node_limit:
            return MEMOUT, [], 0, expanded, generated
    return UNSOLVABLE, [], 0, expanded, generated


def search_bidirectional(
    int n_fluents,
    init_f,
    init_b,
    goal_pos,
    goal_neg,
    f_pre_pos,
    f_pre_neg,
    f_add,
    f_delete,
    f_costs,
    b_pre_pos,
    b_pre_neg,
    b_add,
    b_delete,
    b_costs,
    double time_limit=300.0,
    int64_t node_limit=2_000_000,
    bint eager=False,
):
    """Two deferred greedy frontiers meeting in the middle.

    Mirrors _pysearch.search_bidirectional: the backward frontier starts
    from init_b over inverted actions aiming (via hadd) at the forward
    initial state; the first state recorded by both sides joins the
    plan halves. Returns (status, forward_action_indices,
    backward_action_indices, cost, expanded, generated).
    """
    cdef int words = (n_fluents + 63) >> 6
    if words == 0:
        words = 1
    cdef int nf_actions = len(f_costs)
    cdef int nb_actions = len(b_costs)
    cdef vector[uint64_t] f_pre_pos_m, f_pre_neg_m, f_add_m, f_del_keep_m
    cdef vector[uint64_t] b_pre_pos_m, b_pre_neg_m, b_add_m, b_del_keep_m
    cdef vector[int64_t] f_action_cost, b_action_cost
    cdef vector[uint64_t] goal_pos_m, goal_neg_m, start_f, start_b, scratch
    cdef int a, w, f
    _pack_masks(nf_actions, words, f_pre_pos, f_pre_neg, f_add, f_delete, f_costs,
                f_pre_pos_m, f_pre_neg_m, f_add_m, f_del_keep_m, f_action_cost)
    _pack_masks(nb_actions, words, b_pre_pos, b_pre_neg, b_add, b_delete, b_costs,
                b_pre_pos_m, b_pre_neg_m, b_add_m, b_del_keep_m, b_action_cost)
    goal_pos_m.resize(words)
    goal_neg_m.resize(words)
    start_f.resize(words)
    start_b.resize(words)
    scratch.resize(words)
    for f in goal_pos:
        goal_pos_m[f >> 6] |= (<uint64_t>1) << (f & 63)
    for f in goal_neg:
        goal_neg_m[f >> 6] |= (<uint64_t>1) << (f & 63)
    for f in init_f:
        start_f[f >> 6] |= (<uint64_t>1) << (f & 63)
    for f in init_b:
        start_b[f >> 6] |= (<uint64_t>1) << (f & 63)

    cdef bint same = True
    for w in range(words):
        if start_f[w] != start_b[w]:
            same = False
            break
    if same:
        return SOLVED, [], [], 0, 0, 0

    cdef _Heuristic h_f = _Heuristic(n_fluents, f_pre_pos, f_add, f_costs, goal_pos, True)
    cdef _Heuristic h_b = _Heuristic(n_fluents, b_pre_pos, b_add, b_costs, init_f, True)

    cdef double hf0 = h_f.h_of(&start_f[0], words)
    if hf0 == INF:
        return UNSOLVABLE, [], [], 0, 0, 0
    cdef double hb0 = h_b.h_of(&start_b[0], words)

    # shared interning; per-side g / parent tables (-1 marks absent)
    cdef vector[uint64_t] pool
    cdef unordered_map[string, int] ids
    cdef vector[int64_t] g_f, g_b
    cdef vector[int] pa_f, ps_f, pa_b, ps_b

    pool.insert(pool.end(), start_f.begin(), start_f.end())
    ids[string(<char*>&start_f[0], words * 8)] = 0
    g_f.push_back(0)
    g_b.push_back(-1)
    pa_f.push_back(-1)
    ps_f.push_back(0)
    pa_b.push_back(-1)
    ps_b.push_back(0)

    pool.insert(pool.end(), start_b.begin(), start_b.end())
    ids[string(<char*>&start_b[0], words * 8)] = 1
    g_f.push_back(-1)
    g_b.push_back(0)
    pa_f.push_back(-1)
    ps_f.push_back(0)
    pa_b.push_back(-1)
    ps_b.push_back(0)

    cdef vector[HeapEntry] heap_f, heap_b
    cdef HeapEntry entry, pushed
    entry.f = hf0
    entry.h = hf0
    entry.seq = 0
    entry.g = 0
    entry.sid = 0
    _heap_push(heap_f, entry)
    if hb0 != INF:
        entry.f = hb0
        entry.h = hb0
        entry.seq = 0
        entry.g = 0
        entry.sid = 1
        _heap_push(heap_b, entry)

    cdef int64_t seq_f = 0, seq_b = 0, expanded = 0, generated = 0, ng
    cdef int64_t states = 2
    cdef double deadline = 0.0
    cdef bint has_deadline = time_limit > 0
    if has_deadline:
        deadline = time.monotonic() + time_limit
    cdef int sid, nid, side
    cdef uint64_t* state
    cdef bint applicable, at_goal, skip
    cdef double h_here, h_succ
    cdef string key
    cdef unordered_map[string, int].iterator found
    cdef int meet = -1
    cdef int n_actions

    while heap_f.size() > 0:
        if has_deadline and (expanded & 0x7F) == 0:
            if time.monotonic() > deadline:
                return TIMEOUT, [], [], 0, expanded, generated
        for side in range(2):
            if side == 0:
                if heap_f.size() == 0:
                    continue
                entry = _heap_pop(heap_f)
            else:
                if heap_b.size() == 0:
                    continue
                entry = _heap_pop(heap_b)
            sid = entry.sid
            if side == 0:
                if entry.g != g_f[sid]:
                    continue
            else:
                if entry.g != g_b[sid]:
                    continue
            state = &pool[sid * words]
            if side == 0:
                at_goal = True
                for w in range(words):
                    if (state[w] & goal_pos_m[w]) != goal_pos_m[w] or (state[w] & goal_neg_m[w]):
                        at_goal = False
                        break
                if at_goal:
                    steps = []
                    while pa_f[sid] >= 0:
                        steps.append(pa_f[sid])
                        sid = ps_f[sid]
                    steps.reverse()
                    return SOLVED, steps, [], entry.g, expanded, generated
                h_here = h_f.h_of(state, words)
            else:
                h_here = h_b.h_of(state, words)
            if h_here == INF:
                continue
            expanded += 1
            n_actions = nf_actions if side == 0 else nb_actions
            for a in range(n_actions):
                applicable = True
                if side == 0:
                    for w in range(words):
                        if (state[w] & f_pre_pos_m[a * words + w]) != f_pre_pos_m[a * words + w]:
                            applicable = False
                            break
                        if state[w] & f_pre_neg_m[a * words + w]:
                            applicable = False
                            break
                    if not applicable:
                        continue
                    for w in range(words):
                        scratch[w] = (state[w] & f_del_keep_m[a * words + w]) | f_add_m[a * words + w]
                    ng = entry.g + f_action_cost[a]
                else:
                    for w in range(words):
                        if (state[w] & b_pre_pos_m[a * words + w]) != b_pre_pos_m[a * words + w]:
                            applicable = False
                            break
                        if state[w] & b_pre_neg_m[a * words + w]:
                            applicable = False
                            break
                    if not applicable:
                        continue
                    for w in range(words):
                        scratch[w] = (state[w] & b_del_keep_m[a * words + w]) | b_add_m[a * words + w]
                    ng = entry.g + b_action_cost[a]
                key = string(<char*>&scratch[0], words * 8)
                found = ids.find(key)
                if found != ids.end():
                    nid = deref(found).second
                    skip = g_f[nid] >= 0 if side == 0 else g_b[nid] >= 0
                    if skip:
                        continue
                else:
                    nid = <int>g_f.size()
                    ids[key] = nid
                    pool.insert(pool.end(), scratch.begin(), scratch.end())
                    g_f.push_back(-1)
                    g_b.push_back(-1)
                    pa_f.push_back(-1)
                    ps_f.push_back(0)
                    pa_b.push_back(-1)
                    ps_b.push_back(0)
                    states += 1
                    state = &pool[entry.sid * words]  # pool growth may relocate
                if side == 0:
                    g_f[nid] = ng
                    pa_f[nid] = a
                    ps_f[nid] = entry.sid
                else:
                    g_b[nid] = ng
                    pa_b[nid] = a
                    ps_b[nid] = entry.sid
                generated += 1
                if g_f[nid] >= 0 and g_b[nid] >= 0:
                    meet = nid
                    break
                if eager:
                    h_succ = h_f.h_of(&pool[nid * words], words) if side == 0 else h_b.h_of(&pool[nid * words], words)
                    state = &pool[entry.sid * words]  # heuristic shares no pool, but keep pattern
                    if h_succ == INF:
                        continue
                else:
                    h_succ = h_here
                pushed.f = h_succ
                pushed.h = h_succ
                pushed.g = ng
                pushed.sid = nid
                if side == 0:
                    seq_f += 1
                    pushed.seq = seq_f
                    _heap_push(heap_f, pushed)
                else:
                    seq_b += 1
                    pushed.seq = seq_b
                    _heap_push(heap_b, pushed)
            if meet >= 0:
                break
            if node_limit and states > node_limit:
                return MEMOUT, [], [], 0, expanded, generated
        if meet >= 0:
            break

    if meet < 0:
        return UNSOLVABLE, [], [], 0, expanded, generated

    cdef int64_t cost = g_f[meet] + g_b[meet]
    fwd_steps = []
    sid = meet
    while pa_f[sid] >= 0:
        fwd_steps.append(pa_f[sid])
        sid = ps_f[sid]
    fwd_steps.reverse()
    bwd_steps = []
    sid = meet
    while pa_b[sid] >= 0:
        bwd_steps.append(pa_b[sid])
        sid = ps_b[sid]
    bwd_steps.reverse()
    return SOLVED, fwd_steps, bwd_steps, cost, expanded, generated
