"""Partition of the subset lattice induced by the security constraints.

Every party i with a nonempty prohibited set P_i forces, for each T
disjoint from its interfering set B_i, the family

    N(i, T) = { T | (B_i \\ {j}) : j in P_i }  |  { T | B_i }

whose members must carry equal value under any admissible set function.
Overlapping families merge transitively; the equivalence classes of the
resulting relation are the cells.  Masks never appearing in any family
form one residual cell, kept last, inside which no equality is implied.

same_cell(S, S') is the usable relation: reflexive always, and True for
distinct sets only when they share a non-residual cell.
"""

from __future__ import annotations

from functools import lru_cache

from .bits import format_set, iter_bits, iter_subsets
from .model import ProblemInstance


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class GPartition:
    """Cells of the lattice partition, numbered 1..gamma.

    cells[k-1] holds the sorted member masks of cell k.  The residual
    cell, when nonempty, is the last one; residual_id is its number (or
    None when every mask was forced into some family).
    """

    def __init__(self, instance: ProblemInstance):
        n = instance.n
        if n > 20:
            raise ValueError("partition over 2^n masks is limited to n <= 20")
        size = 1 << n
        uf = _UnionFind(size)
        touched = bytearray(size)
        for i, party in enumerate(instance.parties, start=1):
            pro = party.prohibited
            if not pro:
                continue
            bi = instance.interfering(i)
            comp = instance.full_mask & ~bi
            for t in iter_subsets(comp):
                base = t | bi
                touched[base] = 1
                for j in iter_bits(pro):
                    uf.union(base, base ^ j)
                    touched[base ^ j] = 1

        groups: dict[int, list[int]] = {}
        residual: list[int] = []
        for mask in range(size):
            if touched[mask]:
                groups.setdefault(uf.find(mask), []).append(mask)
            else:
                residual.append(mask)
        ordered = sorted(groups.values(), key=lambda ms: ms[0])
        if residual:
            ordered.append(residual)

        self.instance = instance
        self.cells: list[tuple[int, ...]] = [tuple(ms) for ms in ordered]
        self.gamma = len(self.cells)
        self.residual_id = self.gamma if residual else None
        self.cell_of: dict[int, int] = {}
        for k, members in enumerate(self.cells, start=1):
            for m in members:
                self.cell_of[m] = k

    def same_cell(self, a: int, b: int) -> bool:
        if a == b:
            return True
        k = self.cell_of[a]
        if k != self.cell_of[b]:
            return False
        return k != self.residual_id

    def describe(self) -> str:
        lines = []
        for k, members in enumerate(self.cells, start=1):
            tag = " (residual)" if k == self.residual_id else ""
            body = ", ".join(format_set(m) for m in members)
            lines.append(f"cell {k}{tag}: {body}")
        return "\n".join(lines)


@lru_cache(maxsize=64)
def g_partition(instance: ProblemInstance) -> GPartition:
    return GPartition(instance)
