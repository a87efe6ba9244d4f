"""Acyclic message sets and the induced pairwise height function.

A set K = {i_1, ..., i_k} of messages is *acyclic with respect to* a
disjoint set S if its elements can be ordered so that each prefix is
attested by some party: for every position l there is a party j with
i_l in W_j and S | {i_1, ..., i_l} contained in B_j | W_j.  Intuitively
the party at step l can decode i_l while everything placed so far is
invisible to it, so no rate can hide inside K.

h(S, S') is the size of the largest subset of S' minus S acyclic with
respect to S; the reciprocal of h(0, [n]) is the plain converse bound.

All computations run over bitmasks via one dynamic program per base set
S, memoised on the instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bits import bit_index, format_set, iter_bits, popcount
from .model import ProblemInstance
from .values import INFINITE, BoundValue


@dataclass(frozen=True)
class AcyclicWitness:
    """A certified ordering for an acyclic set.

    order[l] is the message placed at step l+1 and parties[l] a party
    attesting that step, per the definition above.
    """

    base: int
    members: int
    order: tuple[int, ...]
    parties: tuple[int, ...]

    def describe(self) -> str:
        steps = ", ".join(
            f"{msg} by party {p}" for msg, p in zip(self.order, self.parties)
        )
        return f"{format_set(self.members)} wrt {format_set(self.base)}: {steps}"


def verify_witness(instance: ProblemInstance, w: AcyclicWitness) -> bool:
    """Check a witness against the definition, independently of the DP."""
    if w.base & w.members:
        return False
    placed = 0
    for msg, pidx in zip(w.order, w.parties):
        bit = 1 << (msg - 1)
        if not (w.members & bit) or (placed & bit):
            return False
        placed |= bit
        party = instance.parties[pidx - 1]
        cover = instance.interfering(pidx) | party.wants
        if not (party.wants & bit):
            return False
        if (w.base | placed) & ~cover:
            return False
    return placed == w.members


class _STable:
    """DP table for one base set S, indexed by compressed subsets of its
    complement."""

    __slots__ = ("base", "bits", "pos", "spread", "ac", "best", "cand")

    def __init__(self, instance: ProblemInstance, base: int):
        comp = instance.full_mask & ~base
        bits = list(iter_bits(comp))
        k = len(bits)
        pos = {b: i for i, b in enumerate(bits)}
        # Parties that can attest anything here: S must lie inside
        # B_j | W_j and the party must want something from the complement.
        cand = []
        for j, party in enumerate(instance.parties, start=1):
            cover = instance.interfering(j) | party.wants
            if base & ~cover:
                continue
            wc = party.wants & comp
            if wc:
                cand.append((cover, wc))

        size = 1 << k
        spread = [0] * size
        for c in range(1, size):
            low = c & -c
            spread[c] = spread[c ^ low] | bits[low.bit_length() - 1]

        ac = bytearray(size)
        ac[0] = 1
        best = [0] * size
        for c in range(1, size):
            t = spread[c]
            elig = 0
            for cover, wc in cand:
                if not (t & ~cover):
                    elig |= wc & t
            ok = False
            e = elig
            while e:
                low = e & -e
                if ac[c ^ (1 << pos[low])]:
                    ok = True
                    break
                e ^= low
            if ok:
                ac[c] = 1
                best[c] = popcount(t)
            else:
                mx = 0
                r = c
                while r:
                    low = r & -r
                    v = best[c ^ low]
                    if v > mx:
                        mx = v
                    r ^= low
                best[c] = mx

        self.base = base
        self.bits = bits
        self.pos = pos
        self.spread = spread
        self.ac = ac
        self.best = best
        self.cand = cand

    def compress(self, mask: int) -> int:
        c = 0
        m = mask
        while m:
            low = m & -m
            c |= 1 << self.pos[low]
            m ^= low
        return c


class AcyclicAnalysis:
    """Per-instance cache of _STable objects."""

    def __init__(self, instance: ProblemInstance):
        self.instance = instance
        self._tables: dict[int, _STable] = {}

    def table(self, base: int) -> _STable:
        t = self._tables.get(base)
        if t is None:
            t = _STable(self.instance, base)
            self._tables[base] = t
        return t


@lru_cache(maxsize=64)
def analysis(instance: ProblemInstance) -> AcyclicAnalysis:
    return AcyclicAnalysis(instance)


def _check_mask(instance: ProblemInstance, mask: int, what: str) -> None:
    if mask & ~instance.full_mask:
        raise ValueError(f"{what} {format_set(mask)} not within 1..{instance.n}")


def is_acyclic_wrt(
    instance: ProblemInstance, members: int, base: int = 0
) -> AcyclicWitness | None:
    """Witness that `members` is acyclic with respect to `base`, or None.

    The witness is canonical: the lexicographically smallest valid
    order, each step attested by the smallest-index party.
    """
    _check_mask(instance, members, "member set")
    _check_mask(instance, base, "base set")
    if members & base:
        raise ValueError("member set and base set must be disjoint")
    if members == 0:
        return AcyclicWitness(base, 0, (), ())
    ana = analysis(instance)
    tab = ana.table(base)
    if not tab.ac[tab.compress(members)]:
        return None
    # Forward greedy: x can lead iff some party attests it over what is
    # already placed and the remainder stays acyclic over base | {x}.
    order: list[int] = []
    parties: list[int] = []
    placed = base
    rest = members
    while rest:
        pick = 0
        pick_party = 0
        for x in iter_bits(rest):
            pj = 0
            for j, party in enumerate(instance.parties, start=1):
                cover = instance.interfering(j) | party.wants
                if (party.wants & x) and not ((placed | x) & ~cover):
                    pj = j
                    break
            if not pj:
                continue
            t2 = ana.table(placed | x)
            if t2.ac[t2.compress(rest ^ x)]:
                pick, pick_party = x, pj
                break
        assert pick, "table marked acyclic but no forward step applies"
        order.append(bit_index(pick))
        parties.append(pick_party)
        placed |= pick
        rest ^= pick
    return AcyclicWitness(base, members, tuple(order), tuple(parties))


def h_mais(instance: ProblemInstance, lo: int, hi: int) -> int:
    """Largest acyclic-wrt-lo subset of hi \\ lo.  Requires lo subset of hi."""
    _check_mask(instance, lo, "lower set")
    _check_mask(instance, hi, "upper set")
    if lo & ~hi:
        raise ValueError("h requires the first set to be contained in the second")
    tab = analysis(instance).table(lo)
    return tab.best[tab.compress(hi & ~lo)]


def mais_bound(instance: ProblemInstance) -> BoundValue:
    """Reciprocal of the largest acyclic set; INFINITE when none exists."""
    h = h_mais(instance, 0, instance.full_mask)
    if h == 0:
        return INFINITE
    return Fraction(1, h)
