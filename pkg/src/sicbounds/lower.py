"""Achievable symmetric rate from security chains.

The decoding closure of a party is everything it ends up knowing: its
side information, plus the wants of every party whose side information
it already covers, iterated to a fixpoint.  A security chain is a
sequence of distinct messages i_1, ..., i_k such that each i_l is
prohibited to some party whose closure contains all earlier elements;
such messages must stay mutually indistinguishable from the broadcast,
which collapses k degrees of freedom and leaves a code on the remaining
n - k, giving symmetric rate 1/(n - k).  With no chain at all this is
the universal floor 1/n.

A chain covering every message means no positive rate survives; the
value drops to 0 and the result is flagged.  Separately, a party whose
own closure reaches one of its prohibited messages is hard evidence
that no secure code exists, reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bits import bit_index, format_set, iter_bits
from .model import ProblemInstance


@lru_cache(maxsize=4096)
def _closure(instance: ProblemInstance, start: int) -> int:
    known = start
    changed = True
    while changed:
        changed = False
        for r, party in enumerate(instance.parties, start=1):
            if not (party.side_info & ~known) and (party.wants & ~known):
                known |= party.wants
                changed = True
    return known


def decoding_closure(instance: ProblemInstance, i: int) -> int:
    """Everything party i can reconstruct from its side information."""
    if not 1 <= i <= len(instance.parties):
        raise ValueError(f"no party {i}")
    return _closure(instance, instance.parties[i - 1].side_info)


@dataclass(frozen=True)
class LowerResult:
    value: Fraction
    chain: tuple[int, ...]
    chain_parties: tuple[int, ...]
    complete: bool  # the chain covers every message
    evidence: tuple[str, ...]  # notes implying no secure code exists


@lru_cache(maxsize=64)
def security_chain_lower(instance: ProblemInstance) -> LowerResult:
    n = instance.n
    if n > 20:
        raise ValueError("security-chain search is limited to n <= 20")
    guards = []
    for j, party in enumerate(instance.parties, start=1):
        if party.prohibited:
            guards.append((party.prohibited, decoding_closure(instance, j), j))

    def appendable(t: int) -> int:
        out = 0
        for pro, clo, _ in guards:
            if not (t & ~clo):
                out |= pro & ~t
        return out

    memo: dict[int, int] = {}

    def f(t: int) -> int:
        v = memo.get(t)
        if v is not None:
            return v
        best = 0
        for b in iter_bits(appendable(t)):
            cand = 1 + f(t | b)
            if cand > best:
                best = cand
        memo[t] = best
        return best

    k = f(0)
    chain: list[int] = []
    parties: list[int] = []
    t = 0
    while f(t) > 0:
        for b in iter_bits(appendable(t)):
            if f(t | b) == f(t) - 1:
                chain.append(bit_index(b))
                for pro, clo, j in guards:
                    if (pro & b) and not (t & ~clo):
                        parties.append(j)
                        break
                t |= b
                break

    evidence = []
    for j, party in enumerate(instance.parties, start=1):
        hit = decoding_closure(instance, j) & party.prohibited
        if hit:
            evidence.append(
                f"party {j} can reconstruct prohibited message(s) "
                f"{format_set(hit)}: no secure code exists"
            )
    complete = k == n
    if complete:
        evidence.append(
            "a security chain covers every message: no positive rate survives"
        )
        value = Fraction(0)
    else:
        value = Fraction(1, n - k)
    return LowerResult(value, tuple(chain), tuple(parties), complete, tuple(evidence))
