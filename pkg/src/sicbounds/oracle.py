"""Exhaustive zero-error search over deterministic broadcast codes.

At toy sizes every encoder table phi: ({0,1}^t)^n -> {0..M-1} can be
enumerated up to relabelling of the output alphabet (tables are built
cell by cell with fresh symbols introduced in order, i.e. canonical set
partitions).  A table is valid when it is surjective, every receiver
can reconstruct its wanted fields from (output, side information), and
for every prohibited pair the output is count-balanced across the 2^t
values of the protected field given the observer's side information —
the exact combinatorial form of the zero-information requirement.

Rates t / log2(M) are compared exactly through integer powers, never
through floats.  The search is deliberately guarded: it exists to
cross-check the bounds at tiny scale, not to be fast.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bits import format_set, indices_of, popcount
from .lognum import LogNum
from .model import ProblemInstance

MAX_TABLE_BITS = 12  # n * t
MAX_ALPHABET = 16


class OracleLimitError(ValueError):
    """Search parameters outside the supported toy range."""


@dataclass(frozen=True)
class Rate:
    """Symmetric rate t / log2(M), compared exactly via integer powers."""

    t: int
    m: int

    def __post_init__(self):
        if self.t < 0 or self.m < 1 or (self.t > 0 and self.m < 2):
            raise ValueError("rate needs t >= 1 with M >= 2, or t = 0 with M = 1")

    def is_zero(self) -> bool:
        return self.t == 0

    def as_fraction(self) -> Fraction | None:
        """Exact value when M is a power of two (always for t = 0)."""
        if self.t == 0:
            return Fraction(0)
        k = self.m.bit_length() - 1
        return Fraction(self.t, k) if self.m == 1 << k else None

    def _cmp(self, other) -> int:
        if isinstance(other, Rate):
            if self.t == 0 or other.t == 0:
                a, b = self.t, other.t
                return (a > b) - (a < b)
            lhs = other.m**self.t
            rhs = self.m**other.t
            return (lhs > rhs) - (lhs < rhs)
        f = Fraction(other)
        if self.t == 0:
            return (0 > f) - (0 < f)
        if f <= 0:
            return 1
        lhs = 1 << (self.t * f.denominator)
        rhs = self.m**f.numerator
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        if self.t == 0:
            return 0.0
        from math import log2

        return self.t / log2(self.m)

    def __str__(self):
        return f"{self.t}/log2({self.m})"


@dataclass(frozen=True)
class CodeTable:
    n: int
    t: int
    m: int
    encode: tuple[int, ...]

    def __post_init__(self):
        if self.t >= 1 and self.m < 2:
            raise ValueError("alphabet needs at least 2 symbols when t >= 1")
        if len(self.encode) != 1 << (self.n * self.t):
            raise ValueError("encoder table has the wrong size")
        if self.encode and not all(0 <= v < self.m for v in self.encode):
            raise ValueError("encoder value outside the alphabet")
        if len(set(self.encode)) != self.m:
            raise ValueError("encoder is not surjective onto the alphabet")

    @property
    def rate(self) -> Rate:
        return Rate(self.t, self.m) if self.t else Rate(0, 1)

    def index(self, fields) -> int:
        x = 0
        for k, v in enumerate(fields):
            x |= v << (k * self.t)
        return x


def _projector(n: int, t: int, mask: int):
    """Map a packed input to the packed fields selected by mask."""
    sel = indices_of(mask)
    fmask = (1 << t) - 1

    def proj(x: int) -> int:
        out = 0
        for pos, k in enumerate(sel):
            out |= ((x >> ((k - 1) * t)) & fmask) << (pos * t)
        return out

    return proj


@dataclass(frozen=True)
class CodeVerdict:
    """Per-requirement outcome of checking one table.

    decoding carries (party, ok) for every party that wants something;
    security carries (party, prohibited message, ok) for every
    prohibited pair.
    """

    decoding: tuple[tuple[int, bool], ...]
    security: tuple[tuple[int, int, bool], ...]
    rate: Rate

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.decoding) and all(
            ok for _, _, ok in self.security
        )

    def failures(self) -> list[str]:
        out = [
            f"party {i} cannot decode its wanted messages"
            for i, ok in self.decoding
            if not ok
        ]
        out.extend(
            f"party {i} learns about prohibited message {j}"
            for i, j, ok in self.security
            if not ok
        )
        return out


def check_code(instance: ProblemInstance, table: CodeTable) -> CodeVerdict:
    """Exact decode/secrecy verdict of a candidate table.

    Decoding holds for a party when its wanted fields are a function of
    (codeword, side information); secrecy of message j from a party
    holds when the preimage counts over values of field j agree for
    every (codeword, side information) pair — with uniform inputs this
    is exactly zero mutual information.
    """
    if table.n != instance.n:
        raise ValueError("table built for a different number of messages")
    n, t = table.n, table.t
    size = 1 << (n * t)

    decoding: list[tuple[int, bool]] = []
    for i, party in enumerate(instance.parties, start=1):
        if not party.wants:
            continue
        pa = _projector(n, t, party.side_info)
        pw = _projector(n, t, party.wants)
        seen: dict[tuple[int, int], int] = {}
        good = True
        for x in range(size):
            key = (table.encode[x], pa(x))
            w = pw(x)
            prev = seen.setdefault(key, w)
            if prev != w:
                good = False
                break
        decoding.append((i, good))

    vals = 1 << t
    security: list[tuple[int, int, bool]] = []
    for i, party in enumerate(instance.parties, start=1):
        if not party.prohibited:
            continue
        pa = _projector(n, t, party.side_info)
        for j in indices_of(party.prohibited):
            counts: dict[tuple[int, int], list[int]] = {}
            fmask = vals - 1
            for x in range(size):
                key = (table.encode[x], pa(x))
                v = (x >> ((j - 1) * t)) & fmask
                counts.setdefault(key, [0] * vals)[v] += 1
            good = all(
                all(c == row[0] for c in row) for row in counts.values()
            )
            security.append((i, j, good))
    return CodeVerdict(tuple(decoding), tuple(security), table.rate)


def _search(instance: ProblemInstance, t: int, m: int) -> CodeTable | None:
    """Canonical DFS for one valid table at block length t, alphabet m."""
    n = instance.n
    size = 1 << (n * t)
    receivers = []
    for i, party in enumerate(instance.parties, start=1):
        if party.wants:
            pa = _projector(n, t, party.side_info)
            pw = _projector(n, t, party.wants)
            receivers.append(
                ([pa(x) for x in range(size)], [pw(x) for x in range(size)])
            )
    encode = [0] * size
    maps: list[dict[tuple[int, int], int]] = [dict() for _ in receivers]

    def dfs(pos: int, used: int) -> bool:
        if pos == size:
            if used != m:
                return False
            table = CodeTable(n, t, m, tuple(encode))
            return check_code(instance, table).ok
        if m - used > size - pos:
            return False
        top = used if used < m else m - 1
        for v in range(top + 1):
            encode[pos] = v
            placed = []
            ok = True
            for r, (pas, pws) in enumerate(receivers):
                key = (v, pas[pos])
                prev = maps[r].get(key)
                if prev is None:
                    maps[r][key] = pws[pos]
                    placed.append(r)
                elif prev != pws[pos]:
                    ok = False
                    break
            if ok and dfs(pos + 1, used + (1 if v == used else 0)):
                return True
            for r in placed:
                del maps[r][(v, receivers[r][0][pos])]
        return False

    if dfs(0, 0):
        return CodeTable(n, t, m, tuple(encode))
    return None


def _guard(n: int, t: int, m: int) -> None:
    if t < 1 or m < 2:
        raise OracleLimitError("need t >= 1 and M >= 2")
    if n * t > MAX_TABLE_BITS:
        raise OracleLimitError(
            f"table of 2^{n * t} cells exceeds the 2^{MAX_TABLE_BITS} limit"
        )
    if m > MAX_ALPHABET:
        raise OracleLimitError(f"alphabet larger than {MAX_ALPHABET}")


def is_feasible_at(
    instance: ProblemInstance, t: int, m: int
) -> CodeTable | None:
    """A valid table at (t, M), or None after exhausting the space."""
    _guard(instance.n, t, m)
    return _search(instance, t, m)


@dataclass(frozen=True)
class OracleSearch:
    best: Rate
    witness: CodeTable | None
    feasible: tuple[tuple[int, int], ...]
    searched: tuple[tuple[int, int], ...]


def oracle_best_rate(
    instance: ProblemInstance,
    max_t: int = 2,
    max_m: int = 8,
    find_all: bool = False,
    threads: int = 1,
) -> OracleSearch:
    """Best zero-error symmetric rate over the (t, M) grid.

    Without find_all, grid points whose rate cannot beat the current
    best are skipped.  threads > 1 fans the independent grid searches
    over a thread pool (cooperative only; the work is pure Python).
    """
    pairs = [
        (t, m)
        for t in range(1, max_t + 1)
        for m in range(2, max_m + 1)
    ]
    for t, m in pairs:
        _guard(instance.n, t, m)

    results: dict[tuple[int, int], CodeTable | None] = {}
    searched: list[tuple[int, int]] = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = pool.map(
                lambda tm: (tm, _search(instance, tm[0], tm[1])), pairs
            )
            for tm, table in found:
                results[tm] = table
                searched.append(tm)
    else:
        best: Rate | None = None
        for tm in pairs:
            if (
                not find_all
                and best is not None
                and Rate(tm[0], tm[1]) <= best
            ):
                continue
            table = _search(instance, tm[0], tm[1])
            results[tm] = table
            searched.append(tm)
            if table is not None and (best is None or table.rate > best):
                best = table.rate

    feasible = sorted(tm for tm, tab in results.items() if tab is not None)
    best_rate = Rate(0, 1)
    witness = None
    for tm in feasible:
        r = Rate(tm[0], tm[1])
        if r > best_rate:
            best_rate = r
            witness = results[tm]
    return OracleSearch(best_rate, witness, tuple(feasible), tuple(sorted(searched)))


# ----------------------------------------------------------------------
# Entropic view of a concrete table.


def entropic_g(table: CodeTable, mask: int) -> LogNum:
    """H(output | fields outside mask), exactly."""
    n, t = table.n, table.t
    size = 1 << (n * t)
    comp = ((1 << n) - 1) & ~mask
    pc = _projector(n, t, comp)
    counts: dict[tuple[int, int], int] = {}
    for x in range(size):
        key = (pc(x), table.encode[x])
        counts[key] = counts.get(key, 0) + 1
    total = LogNum(Fraction(popcount(mask) * t))
    scale = Fraction(1, size)
    for c in counts.values():
        if c > 1:
            total = total - LogNum.log2(c, scale * c)
    return total


def entropic_violations(
    instance: ProblemInstance, table: CodeTable
) -> list[str]:
    """Set-function facts the LP bound rests on, checked exactly on the
    entropies of a concrete table (scaled by log2 M, i.e. in bits)."""
    n, t = instance.n, table.t
    full = instance.full_mask

    @lru_cache(maxsize=None)
    def G(mask: int) -> LogNum:
        return entropic_g(table, mask)

    out: list[str] = []
    if not (G(0) == 0):
        out.append("empty set carries entropy")
    if G(full) > LogNum.log2(table.m):
        out.append("full set exceeds one alphabet symbol")
    for s in range(1, full + 1):
        for k in indices_of(s):
            b = 1 << (k - 1)
            if G(s ^ b) > G(s):
                out.append(f"monotonicity fails at {format_set(s)} minus {k}")
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            ba, bb = 1 << (a - 1), 1 << (b - 1)
            rest = full & ~(ba | bb)
            s = rest
            while True:
                lhs = G(s | ba) + G(s | bb)
                rhs = G(s | ba | bb) + G(s)
                if lhs < rhs:
                    out.append(
                        f"submodularity fails at {format_set(s)} with {a},{b}"
                    )
                if s == 0:
                    break
                s = (s - 1) & rest
    for i, party in enumerate(instance.parties, start=1):
        bi = instance.interfering(i)
        for j in indices_of(party.prohibited):
            if not (G(bi) == G(bi ^ (1 << (j - 1)))):
                out.append(f"security equality fails for party {i}, message {j}")
        if party.wants:
            scope = bi | party.wants
            w = party.wants
            sub = w
            while True:
                if sub:
                    wsize = popcount(sub)
                    rest = scope & ~sub
                    bmask = rest
                    while True:
                        if bmask:
                            diff = G(bmask | sub) - G(bmask)
                        else:
                            diff = G(sub)
                        if not (diff == Fraction(wsize * t)):
                            out.append(
                                f"decodable increment fails for party {i}, "
                                f"W={format_set(sub)}, base {format_set(bmask)}"
                            )
                        if bmask == 0:
                            break
                        bmask = (bmask - 1) & rest
                if sub == 0:
                    break
                sub = (sub - 1) & w
    return out
