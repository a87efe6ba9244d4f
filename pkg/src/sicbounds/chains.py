"""Heights over the subset lattice and the chain upper bound.

The height of a set L measures how much acyclic growth can be pumped
out of it: starting from the equivalence class of L under same_cell,
one may hop freely inside a class, step up to any superset S' of a
member S (collecting h(S, S')), and repeat.  The height is the largest
total collected.  Classes are nodes of a digraph whose edges carry the
best h over comparable member pairs; a strongly connected piece with a
positive edge (or a positive intra-class pair) pumps forever and makes
every node that reaches it infinite.

A chain is a sequence of distinct messages i_1, ..., i_{m+1} whose
interior elements are requested by somebody and whose endpoint pair is
terminal: either the pair shares a non-residual class with a set of
plain two-element growth (h(0, S) >= 2), or the pair exhibits that
growth itself (h(0, {i_1, i_{m+1}}) = 2).  Each such chain caps the
symmetric rate at

    m / (1 + m + sum_j height({i_j, i_{j+1}}))

and the bound reported is the smallest cap over all chains.  An
infinite-height edge inside a valid chain drives the cap to zero
(degenerate-zero); if no chain qualifies there is no cap at all and
the bound is reported as absent.  Ties are broken toward fewer edges,
then the lexicographically smallest sequence (oriented so the first
endpoint is the smaller one).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .acyclic import h_mais
from .bits import format_set
from .model import ProblemInstance
from .partition import g_partition
from .smais import _tarjan
from .values import DEGENERATE_ZERO, INFINITE, BoundValue, Marker

_INF = -1  # height sentinel inside integer arrays


class ChainAnalysis:
    """Node graph over same-cell classes with all heights precomputed."""

    def __init__(self, instance: ProblemInstance):
        self.instance = instance
        part = g_partition(instance)
        size = 1 << instance.n
        res = part.residual_id

        # Non-residual cells keep their cell id as node id; residual
        # masks get singleton nodes after them.
        node_of = [0] * size
        members: list[list[int]] = [[]]  # 1-based nodes
        num_cells = part.gamma - (1 if res is not None else 0)
        for k in range(1, num_cells + 1):
            members.append(list(part.cells[k - 1]))
        for mask in range(size):
            k = part.cell_of[mask]
            if k == res:
                members.append([mask])
                node_of[mask] = len(members) - 1
            else:
                node_of[mask] = k
        num = len(members) - 1

        self_loop = [False] * (num + 1)
        edges: dict[tuple[int, int], tuple[int, int, int]] = {}  # (w, lo, hi)
        for hi in range(size):
            v = node_of[hi]
            lo = (hi - 1) & hi
            while True:
                u = node_of[lo]
                if u == v:
                    if lo != hi and h_mais(instance, lo, hi) > 0:
                        self_loop[v] = True
                else:
                    w = h_mais(instance, lo, hi)
                    key = (u, v)
                    old = edges.get(key)
                    if old is None or w > old[0] or (
                        w == old[0] and (hi, lo) < (old[2], old[1])
                    ):
                        edges[key] = (w, lo, hi)
                if lo == 0:
                    break
                lo = (lo - 1) & hi

        adj: dict[int, list[int]] = {}
        for (u, v) in edges:
            adj.setdefault(u, []).append(v)
        sccs = _tarjan(num, adj)
        comp_of = {}
        for ci, comp in enumerate(sccs):
            for x in comp:
                comp_of[x] = ci
        comp_inf = [False] * len(sccs)
        for x in range(1, num + 1):
            if self_loop[x]:
                comp_inf[comp_of[x]] = True
        for (u, v), (w, _, _) in edges.items():
            if w > 0 and comp_of[u] == comp_of[v]:
                comp_inf[comp_of[u]] = True

        # Components come out sinks-first, which is the right order for
        # height(u) = max(0, max over u->v of w + height(v)).
        comp_h = [0] * len(sccs)
        comp_out: dict[int, list[tuple[int, int, int, int, int]]] = {}
        for (u, v), (w, lo, hi) in edges.items():
            cu, cv = comp_of[u], comp_of[v]
            if cu != cv:
                comp_out.setdefault(cu, []).append((cv, w, u, lo, hi))
        for ci in range(len(sccs)):
            if comp_inf[ci]:
                comp_h[ci] = _INF
                continue
            best = 0
            for cv, w, _, _, _ in comp_out.get(ci, ()):
                if comp_h[cv] == _INF:
                    best = _INF
                    break
                if w + comp_h[cv] > best:
                    best = w + comp_h[cv]
            comp_h[ci] = best

        self.node_of = node_of
        self.num_cells = num_cells
        self.members = members
        self.height_of_node = [0] * (num + 1)
        for x in range(1, num + 1):
            self.height_of_node[x] = comp_h[comp_of[x]]
        self.top_h = [0] * (num + 1)  # best plain growth inside a class
        self.top_witness = [0] * (num + 1)
        for x in range(1, num + 1):
            best_s = members[x][0]
            best_h = h_mais(instance, 0, best_s)
            for s in members[x][1:]:
                h = h_mais(instance, 0, s)
                if h > best_h:
                    best_h, best_s = h, s
            self.top_h[x] = best_h
            self.top_witness[x] = best_s
        self._edges = edges
        self._comp_of = comp_of
        self._comp_h = comp_h
        self._comp_out = comp_out
        self._sccs = sccs

    def height(self, mask: int) -> int:
        """Raw height; _INF (== -1) encodes infinity."""
        return self.height_of_node[self.node_of[mask]]

    def terminal_pair(self, a: int, b: int) -> bool:
        pair = (1 << (a - 1)) | (1 << (b - 1))
        node = self.node_of[pair]
        if node <= self.num_cells and self.top_h[node] >= 2:
            return True
        # The pair can also vouch for itself: two-element growth of the
        # pair alone qualifies it, no shared class needed.
        return h_mais(self.instance, 0, pair) == 2

    def has_terminal_pair(self) -> bool:
        n = self.instance.n
        return any(
            self.terminal_pair(a, b)
            for a in range(1, n + 1)
            for b in range(a + 1, n + 1)
        )

    def _hop(self, src: int, dst: int) -> list[tuple[str, int]]:
        """Steps (label, mask) moving inside the component of node src
        until node dst is reached; all such detours cost 0."""
        if src == dst:
            return []
        ci = self._comp_of[src]
        prev: dict[int, tuple[int, int, int]] = {src: (0, 0, 0)}
        frontier = [src]
        while frontier and dst not in prev:
            nxt = []
            for u in frontier:
                for (a, b), (_, lo, hi) in self._edges.items():
                    if a == u and self._comp_of.get(b) == ci and b not in prev:
                        prev[b] = (u, lo, hi)
                        nxt.append(b)
            frontier = nxt
        steps: list[tuple[str, int]] = []
        node = dst
        while node != src:
            u, lo, hi = prev[node]
            steps.append(("<=", hi))
            steps.append(("-", lo))
            node = u
        steps.reverse()
        return steps

    def height_witness(self, mask: int) -> list[tuple[str, int]] | None:
        """A sequence of ('-', m) / ('<=', m) steps realizing the height
        of `mask`'s class, or None when the height is infinite.  The
        starting set itself is not included."""
        node = self.node_of[mask]
        target = self.height_of_node[node]
        if target == _INF:
            return None
        steps: list[tuple[str, int]] = []
        cur_set = mask
        while target > 0:
            ci = self._comp_of[node]
            pick = None
            for cv, w, u, lo, hi in self._comp_out.get(ci, ()):
                if self._comp_h[cv] != _INF and w + self._comp_h[cv] == target:
                    cand = (hi.bit_count(), hi, lo, u, w, cv)
                    if pick is None or cand < pick:
                        pick = cand
            assert pick is not None, "height table inconsistent"
            _, hi, lo, u, w, cv = pick
            for kind, m in self._hop(node, u):
                steps.append((kind, m))
            if lo != cur_set:
                steps.append(("-", lo))
            steps.append(("<=", hi))
            cur_set = hi
            node = self.node_of[hi]
            target -= w
        return steps


@lru_cache(maxsize=64)
def chain_analysis(instance: ProblemInstance) -> ChainAnalysis:
    return ChainAnalysis(instance)


def chain_height(instance: ProblemInstance, mask: int) -> int | Marker:
    """Height of the class of `mask`; INFINITE when it pumps forever."""
    if mask & ~instance.full_mask:
        raise ValueError("set outside message range")
    h = chain_analysis(instance).height(mask)
    return INFINITE if h == _INF else h


@dataclass(frozen=True)
class SbacResult:
    value: BoundValue | None  # None: no qualifying chain exists
    chain: tuple[int, ...] | None
    edge_heights: tuple[int | Marker, ...] | None


def _pair_mask(a: int, b: int) -> int:
    return (1 << (a - 1)) | (1 << (b - 1))


def _lex_min_path(
    n: int, wt: list[list[int]], req: int,
    start: int, mask: int, end: int, total: int,
) -> tuple[int, ...]:
    """Lexicographically smallest vertex order realizing the given
    total over exactly the vertices of `mask`, from start to end, with
    every interior vertex requested.  Such a path exists by
    construction of the caller's DP."""
    end_bit = 1 << (end - 1)
    verts = [v for v in range(1, n + 1) if mask & (1 << (v - 1))]
    # rem[(sub, v)]: best suffix total for a path starting at v that
    # visits exactly the bits of sub and ends at end.
    rem: dict[tuple[int, int], int] = {(end_bit, end): 0}
    subs = [s for s in range(1 << n) if (s & mask) == s and (s & end_bit)]
    subs.sort(key=lambda s: s.bit_count())
    for sub in subs:
        if sub == end_bit:
            continue
        for v in verts:
            vb = 1 << (v - 1)
            if not (sub & vb) or v == end:
                continue
            rest = sub ^ vb
            best = -1
            for w in verts:
                wb = 1 << (w - 1)
                if not (rest & wb):
                    continue
                if w == end:
                    if rest != end_bit:
                        continue
                elif not (req & wb):
                    continue
                prior = rem.get((rest, w), -1)
                if prior >= 0 and wt[v][w] + prior > best:
                    best = wt[v][w] + prior
            if best >= 0:
                rem[(sub, v)] = best
    seq = [start]
    used = 1 << (start - 1)
    cur, need = start, total
    while used != mask:
        rest = mask & ~used
        for w in verts:
            wb = 1 << (w - 1)
            if not (rest & wb):
                continue
            if w == end:
                if rest != end_bit:
                    continue
            elif not (req & wb):
                continue
            suffix = rem.get((rest, w), -1)
            if suffix >= 0 and wt[cur][w] + suffix == need:
                seq.append(w)
                need -= wt[cur][w]
                used |= wb
                cur = w
                break
        else:
            raise AssertionError("path reconstruction lost the optimum")
    return tuple(seq)


def sbac_bound(instance: ProblemInstance) -> SbacResult:
    ana = chain_analysis(instance)
    n = instance.n
    req = instance.requested_mask

    # Pairwise edge heights.  Infinite heights are mapped onto a weight
    # big enough that any chain using one undercuts every finite chain
    # in the value comparison (value >= 1/(2 + max_h) for finite
    # chains, <= n/(1 + n + big) otherwise).
    max_h = 0
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            h = ana.height(_pair_mask(a, b))
            if h != _INF and h > max_h:
                max_h = h
    big = n * (max_h + 1) + 2
    wt = [[0] * (n + 1) for _ in range(n + 1)]
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            h = ana.height(_pair_mask(a, b))
            wt[a][b] = wt[b][a] = big if h == _INF else h

    best_val: Fraction | None = None
    best_m = 0
    # states of the best (value, m) at the smallest start reaching it
    tied: list[tuple[int, int, int, int]] = []  # (start, mask, end, total)

    for start in range(1, n + 1):
        # dp[mask][last] = max total edge height over paths start..last
        # visiting exactly `mask`; extending past a non-requested
        # interior is forbidden, so growth from a length >= 2 path
        # requires its current end to be requested.
        dp: list[dict[int, int]] = [dict() for _ in range(1 << n)]
        sbit = 1 << (start - 1)
        dp[sbit][start] = 0
        order = [m for m in range(1 << n) if m & sbit]
        order.sort(key=lambda m: m.bit_count())
        for mask in order:
            row = dp[mask]
            if not row:
                continue
            many = mask.bit_count() >= 2
            for last, total in row.items():
                if many and not (req & (1 << (last - 1))):
                    continue
                for nxt in range(1, n + 1):
                    nb = 1 << (nxt - 1)
                    if mask & nb:
                        continue
                    cand = total + wt[last][nxt]
                    cur = dp[mask | nb].get(nxt, -1)
                    if cand > cur:
                        dp[mask | nb][nxt] = cand
        for mask in order:
            m = mask.bit_count() - 1
            if m < 1:
                continue
            for end, total in dp[mask].items():
                if end <= start or not ana.terminal_pair(start, end):
                    continue
                val = Fraction(m, 1 + m + total)
                if best_val is None or val < best_val or (
                    val == best_val and m < best_m
                ):
                    best_val, best_m = val, m
                    tied = [(start, mask, end, total)]
                elif val == best_val and m == best_m and tied[0][0] == start:
                    tied.append((start, mask, end, total))

    if best_val is None:
        return SbacResult(None, None, None)

    seq = min(
        _lex_min_path(n, wt, req, s, mask, e, total)
        for s, mask, e, total in tied
    )

    heights: list[int | Marker] = []
    diverged = False
    for a, b in zip(seq, seq[1:]):
        h = ana.height(_pair_mask(a, b))
        if h == _INF:
            heights.append(INFINITE)
            diverged = True
        else:
            heights.append(h)
    value: BoundValue = DEGENERATE_ZERO if diverged else best_val
    return SbacResult(value, tuple(seq), tuple(heights))


def explain_sbac(instance: ProblemInstance) -> str:
    """Human-readable account of the winning chain: its value, each
    edge's height with a realizing set sequence, and the terminal
    witness set."""
    res = sbac_bound(instance)
    if res.value is None:
        return "no qualifying chain"
    ana = chain_analysis(instance)
    out = ["chain " + " <-> ".join(str(i) for i in res.chain)]
    assert res.chain is not None and res.edge_heights is not None
    for (a, b), h in zip(zip(res.chain, res.chain[1:]), res.edge_heights):
        pair = _pair_mask(a, b)
        if h is INFINITE:
            out.append(f"  h({format_set(pair)}) = INFINITE (pumping cycle)")
            continue
        trail = format_set(pair)
        for kind, m in ana.height_witness(pair) or ():
            trail += f" {kind} {format_set(m)}"
        out.append(f"  h({format_set(pair)}) = {h}: {trail}")
    first, last = res.chain[0], res.chain[-1]
    node = ana.node_of[_pair_mask(first, last)]
    wit = ana.top_witness[node]
    out.append(
        f"  terminal: {{{first},{last}}} shares a cell with "
        f"{format_set(wit)}, h(0, {format_set(wit)}) = {ana.top_h[node]}"
    )
    if res.value is DEGENERATE_ZERO:
        out.append("  an infinite edge forces the rate to zero")
    else:
        m = len(res.chain) - 1
        tot = sum(h for h in res.edge_heights if isinstance(h, int))
        out.append(f"  value {m}/(1 + {m} + {tot}) = {res.value}")
    return "\n".join(out)
