"""Security-aware sharpening of the acyclic-set bound.

Each partition cell k starts at rho_k = max h(0, S) over its members S.
Whenever a member S of a non-residual cell l sits inside a member S' of
a different non-residual cell k, the equality between same-cell values
lets an acyclic extension be restarted, so rho_k also dominates
h(S, S') + rho_l -- provided the source cell has already accumulated at
least 2.  A cell stuck below 2 seeds nothing: its value cannot be
replayed as a two-element start followed by climb steps, so feeding it
forward would overstate what a restart can actually deliver.  The bound
is the reciprocal of the largest fixpoint value across all cells.

The fixpoint is computed on the cell digraph: edge l -> k carries the
largest h(S, S') over comparable member pairs.  A strongly connected
component that reaches value 2 while containing a positive-weight edge
makes the recursion diverge (value 0, reported as the degenerate-zero
marker); one that never reaches 2 is inert and leaves its cells at
their starting values.  Otherwise members of a component equalise, and
one pass over the condensation in topological order finishes the job.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .acyclic import h_mais
from .model import ProblemInstance
from .partition import GPartition, g_partition
from .values import DEGENERATE_ZERO, INFINITE, BoundValue


@dataclass(frozen=True)
class SMaisResult:
    value: BoundValue
    rho: tuple[int, ...] | None  # per cell 1..gamma; None when diverged
    peak_cell: int | None  # a cell attaining the max, when finite
    # Update chain realizing rho at the peak: (cell, lo, hi, h) steps,
    # first step from lo = empty set; None when there is no finite peak.
    steps: tuple[tuple[int, int, int, int], ...] | None = None


def _cell_edges(
    instance: ProblemInstance, part: GPartition
) -> tuple[list[int], dict[tuple[int, int], int]]:
    """Initial values per cell and max-weight edges between distinct
    non-residual cells."""
    init = [0] * (part.gamma + 1)  # 1-based
    for k, members in enumerate(part.cells, start=1):
        init[k] = max(h_mais(instance, 0, s) for s in members)
    edges: dict[tuple[int, int], int] = {}
    res = part.residual_id
    cell_of = part.cell_of
    for hi in range(1 << instance.n):
        k = cell_of[hi]
        if k == res:
            continue
        # proper submasks of hi
        lo = (hi - 1) & hi
        while True:
            l = cell_of[lo]
            if l != k and l != res:
                w = h_mais(instance, lo, hi)
                key = (l, k)
                if w > edges.get(key, -1):
                    edges[key] = w
            if lo == 0:
                break
            lo = (lo - 1) & hi
    return init, edges


def _tarjan(num: int, adj: dict[int, list[int]]) -> list[list[int]]:
    """SCCs of nodes 1..num, emitted sinks-first."""
    index = [0] * (num + 1)
    low = [0] * (num + 1)
    on = [False] * (num + 1)
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 1
    for start in range(1, num + 1):
        if index[start]:
            continue
        work = [(start, iter(adj.get(start, ())))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on[start] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if not index[w]:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = True
                    work.append((w, iter(adj.get(w, ()))))
                    advanced = True
                    break
                elif on[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def _witness_steps(
    instance: ProblemInstance,
    part: GPartition,
    init: list[int],
    edges: dict[tuple[int, int], int],
    rho: list[int],
    peak: int,
) -> tuple[tuple[int, int, int, int], ...]:
    """Update chain realizing rho[peak], rebuilt over tight edges.

    Walks backward from the peak through edges with
    rho[l] + w = rho[k] until some cell's own initial value accounts
    for its rho, then replays the path forward.  Breadth-first with
    sorted neighbours, so the chain is deterministic.
    """
    preds: dict[int, list[tuple[int, int]]] = {}
    for (l, k), w in edges.items():
        if rho[l] >= 2 and rho[l] + w == rho[k]:
            preds.setdefault(k, []).append((l, w))
    back: dict[int, tuple[int, int]] = {}
    dq = deque([peak])
    seen = {peak}
    goal = None
    while dq:
        k = dq.popleft()
        if init[k] == rho[k]:
            goal = k
            break
        for l, w in sorted(preds.get(k, ())):
            if l not in seen:
                seen.add(l)
                back[l] = (k, w)
                dq.append(l)
    assert goal is not None, "rho fixpoint must bottom out at an init value"

    s0 = min(s for s in part.cells[goal - 1] if h_mais(instance, 0, s) == init[goal])
    steps = [(goal, 0, s0, init[goal])]
    cur = goal
    while cur != peak:
        nxt, w = back[cur]
        realizer = None
        for hi in sorted(part.cells[nxt - 1]):
            for lo in sorted(part.cells[cur - 1]):
                if lo != hi and lo & ~hi == 0 and h_mais(instance, lo, hi) == w:
                    realizer = (lo, hi)
                    break
            if realizer:
                break
        assert realizer is not None, "edge weight lost its realizing pair"
        steps.append((nxt, realizer[0], realizer[1], w))
        cur = nxt
    return tuple(steps)


def smais_bound(instance: ProblemInstance) -> SMaisResult:
    part = g_partition(instance)
    init, edges = _cell_edges(instance, part)

    adj: dict[int, list[int]] = {}
    for (l, k) in edges:
        adj.setdefault(l, []).append(k)
    sccs = _tarjan(part.gamma, adj)
    comp_of = {}
    for ci, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = ci
    comp_pos = [False] * len(sccs)
    for (l, k), w in edges.items():
        if w > 0 and comp_of[l] == comp_of[k]:
            comp_pos[comp_of[l]] = True

    # sccs is sinks-first; walk sources-first so predecessors are final.
    # Updates only fire out of cells already at 2 or more, so a component
    # below 2 takes nothing in and pushes nothing out.
    comp_val = [0] * len(sccs)
    incoming: dict[int, list[tuple[int, int]]] = {}
    for (l, k), w in edges.items():
        cl, ck = comp_of[l], comp_of[k]
        if cl != ck:
            incoming.setdefault(ck, []).append((cl, w))
    for ci in range(len(sccs) - 1, -1, -1):
        v = max(init[u] for u in sccs[ci])
        for cl, w in incoming.get(ci, ()):
            if comp_val[cl] >= 2:
                cand = comp_val[cl] + w
                if cand > v:
                    v = cand
        if v >= 2 and comp_pos[ci]:
            return SMaisResult(DEGENERATE_ZERO, None, None)
        comp_val[ci] = v

    rho = [0] * (part.gamma + 1)
    for ci, comp in enumerate(sccs):
        for u in comp:
            # An active component equalises its members; an inert one
            # never fires an edge, so each cell keeps its own start.
            rho[u] = comp_val[ci] if comp_val[ci] >= 2 else init[u]
    if part.residual_id is not None:
        rho[part.residual_id] = init[part.residual_id]

    peak = max(range(1, part.gamma + 1), key=lambda k: rho[k])
    top = rho[peak]
    if top == 0:
        return SMaisResult(INFINITE, tuple(rho[1:]), None)
    steps = _witness_steps(instance, part, init, edges, rho, peak)
    return SMaisResult(Fraction(1, top), tuple(rho[1:]), peak, steps)
