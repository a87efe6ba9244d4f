"""Bitmask helpers for message subsets.

Subsets of the message ground set [n] = {1, ..., n} are packed into ints:
bit k-1 set <=> message k in the subset. All public APIs in the package
speak these masks; the helpers here convert to and from 1-based index
collections.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_of(indices: Iterable[int]) -> int:
    """Pack 1-based message indices into a subset mask."""
    m = 0
    for k in indices:
        if k < 1:
            raise ValueError(f"message index {k} is not >= 1")
        m |= 1 << (k - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    """Unpack a subset mask into sorted 1-based message indices."""
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bits of ``mask`` as single-bit masks, low to high."""
    while mask:
        b = mask & -mask
        yield b
        mask ^= b


def iter_subsets(mask: int) -> Iterator[int]:
    """Yield every subset of ``mask``, including 0 and mask itself.

    Order: descending in the usual submask-enumeration sense, except 0 last.
    """
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def bit_index(bit: int) -> int:
    """1-based message index of a single-bit mask."""
    return bit.bit_length()


def format_set(mask: int) -> str:
    """Human-readable form, e.g. {1,3,6}; {} for the empty set."""
    return "{" + ",".join(str(k) for k in indices_of(mask)) + "}"
