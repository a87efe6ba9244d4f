"""Exact arithmetic for numbers of the form r + sum c_q * log2(q).

Entropies of deterministic codes over uniform bits are rational
combinations of base-2 logarithms of integers, so every quantity the
oracle needs lives in the Q-vector space spanned by 1 and log2(q) for
odd primes q.  Unique factorisation makes that family linearly
independent over Q, which gives exact equality testing by coefficient
comparison; the sign of a nonzero element is settled numerically at
escalating precision with a conservative error envelope (terminating
because the value cannot be zero).
"""

from __future__ import annotations

from fractions import Fraction

import mpmath


def _factor_log2(n: int) -> tuple[Fraction, dict[int, int]]:
    """log2(n) as (rational part, {odd prime: exponent})."""
    if n <= 0:
        raise ValueError("log2 of a nonpositive integer")
    e2 = 0
    while n % 2 == 0:
        n //= 2
        e2 += 1
    odd: dict[int, int] = {}
    d = 3
    while d * d <= n:
        while n % d == 0:
            odd[d] = odd.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        odd[n] = odd.get(n, 0) + 1
    return Fraction(e2), odd


class LogNum:
    __slots__ = ("rat", "logs")

    def __init__(self, rat: Fraction = Fraction(0), logs: dict[int, Fraction] | None = None):
        self.rat = Fraction(rat)
        self.logs: dict[int, Fraction] = {}
        if logs:
            for q, c in logs.items():
                if c:
                    self.logs[q] = Fraction(c)

    @classmethod
    def log2(cls, n: int, scale: Fraction | int = 1) -> "LogNum":
        e2, odd = _factor_log2(n)
        s = Fraction(scale)
        return cls(e2 * s, {q: Fraction(e) * s for q, e in odd.items()})

    def __add__(self, other) -> "LogNum":
        if isinstance(other, (int, Fraction)):
            return LogNum(self.rat + other, self.logs)
        logs = dict(self.logs)
        for q, c in other.logs.items():
            logs[q] = logs.get(q, Fraction(0)) + c
        return LogNum(self.rat + other.rat, logs)

    __radd__ = __add__

    def __neg__(self) -> "LogNum":
        return LogNum(-self.rat, {q: -c for q, c in self.logs.items()})

    def __sub__(self, other) -> "LogNum":
        if isinstance(other, (int, Fraction)):
            return LogNum(self.rat - other, self.logs)
        return self + (-other)

    def __rsub__(self, other) -> "LogNum":
        return (-self) + other

    def __mul__(self, scalar) -> "LogNum":
        s = Fraction(scalar)
        return LogNum(self.rat * s, {q: c * s for q, c in self.logs.items()})

    __rmul__ = __mul__

    def is_rational(self) -> bool:
        return not self.logs

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.logs and self.rat == other
        if not isinstance(other, LogNum):
            return NotImplemented
        return self.rat == other.rat and self.logs == other.logs

    def __hash__(self):
        return hash((self.rat, tuple(sorted(self.logs.items()))))

    def sign(self) -> int:
        if not self.logs:
            r = self.rat
            return (r > 0) - (r < 0)
        prec = 80
        while True:
            with mpmath.workprec(prec):
                ln2 = mpmath.log(2)
                total = mpmath.mpf(self.rat.numerator) / self.rat.denominator
                mag = abs(total)
                for q, c in self.logs.items():
                    term = (
                        mpmath.mpf(c.numerator) / c.denominator * mpmath.log(q) / ln2
                    )
                    total += term
                    mag += abs(term)
                envelope = (len(self.logs) + 2) * mag * mpmath.mpf(2) ** (8 - prec)
                if abs(total) > envelope:
                    return 1 if total > 0 else -1
            prec *= 2

    def _cmp(self, other) -> int:
        diff = self - (other if isinstance(other, LogNum) else LogNum(Fraction(other)))
        return diff.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        total = float(self.rat)
        for q, c in self.logs.items():
            total += float(c) * mpmath.log(q, 2)
        return float(total)

    def __repr__(self):
        parts = [str(self.rat)] if self.rat or not self.logs else []
        for q, c in sorted(self.logs.items()):
            parts.append(f"{c}*log2({q})")
        return " + ".join(parts)
