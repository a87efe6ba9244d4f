"""Non-finite bound values shared across the package.

Bounds are Fractions when finite. Two markers cover the rest: INFINITE for
"nothing constrains the rate" (e.g. no receiver exists) and DEGENERATE_ZERO
for "the derivation diverged, forcing rate 0" (e.g. a positive cycle in a
height recursion). They serialize as "+inf" and "degenerate-zero".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Marker:
    name: str

    def __repr__(self):
        return f"<{self.name}>"


INFINITE = Marker("+inf")
DEGENERATE_ZERO = Marker("degenerate-zero")

BoundValue = Fraction | Marker


def format_value(v: "BoundValue | None") -> str:
    """Canonical string form used in reports: p/q, +inf, degenerate-zero, n/a."""
    if v is None:
        return "n/a"
    if isinstance(v, Marker):
        return v.name
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)
