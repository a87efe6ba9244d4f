"""Problem model: parties, instances, parsing and serialization.

An instance has n binary-uniform independent messages and m parties. Party i
wants the messages W_i, already knows the side information A_i, and carries a
set P_i of prohibited messages it must learn nothing about. The interfering
set B_i = ([n] \\ (A_i u W_i)) is derived, and P_i must sit inside it. A party
with empty W is an eavesdropper.

Text format (one party per line, fields '.' or comma-separated 1-based ints)::

    # comment
    n=4
    1|4|2,3      <- W|A|P in A-form (side information listed)
    .|1,4|2,3    <- eavesdropper

B-form swaps the middle field for the interfering set: W|B|P. The canonical
serialization is A-form with sorted indices. A JSON form mirrors the same
fields: {"n": 4, "notation": "A", "parties": [{"W": [1], "A": [4], "P": [2, 3]}]}.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache

from .bits import format_set, indices_of, mask_of

MAX_MESSAGES = 24


class ProblemError(ValueError):
    """Base class for malformed or invalid problem inputs."""


class ProblemFormatError(ProblemError):
    """Syntax-level problem in the input text or JSON."""


class ProblemValidationError(ProblemError):
    """Structural rule violations; carries the violation records."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in self.violations))


@dataclass(frozen=True)
class Violation:
    """One broken rule. severity 'error' blocks use; 'note' is advisory."""

    rule: str
    message: str
    party: int | None = None  # 1-based party index, None for instance-level
    severity: str = "error"


@dataclass(frozen=True)
class Party:
    wants: int
    side_info: int
    prohibited: int

    def is_eavesdropper(self) -> bool:
        return self.wants == 0


@dataclass(frozen=True)
class ProblemInstance:
    n: int
    parties: tuple[Party, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_MESSAGES:
            raise ProblemError(
                f"n={self.n} outside the supported range 1..{MAX_MESSAGES}"
            )
        if not self.parties:
            raise ProblemError("an instance needs at least one party")
        full = self.full_mask
        for idx, p in enumerate(self.parties, start=1):
            for field, mask in (("W", p.wants), ("A", p.side_info), ("P", p.prohibited)):
                if mask & ~full:
                    raise ProblemError(
                        f"party {idx}: field {field} references a message outside 1..{self.n}"
                    )

    @property
    def m(self) -> int:
        return len(self.parties)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def interfering(self, i: int) -> int:
        """Interfering set B of party i (1-based, like diagnostics)."""
        return _interfering(self)[i - 1]

    @property
    def interfering_sets(self) -> tuple[int, ...]:
        return _interfering(self)

    @property
    def requested_mask(self) -> int:
        """Union of all wanted sets."""
        m = 0
        for p in self.parties:
            m |= p.wants
        return m

    def receivers(self) -> tuple[int, ...]:
        """1-based indices of parties with a nonempty want set."""
        return tuple(i for i, p in enumerate(self.parties, start=1) if p.wants)


@lru_cache(maxsize=None)
def _interfering(instance: ProblemInstance) -> tuple[int, ...]:
    full = instance.full_mask
    return tuple(full & ~(p.side_info | p.wants) for p in instance.parties)


def derive_interfering(instance: ProblemInstance) -> tuple[int, ...]:
    """Interfering sets B_i = complement of (A_i u W_i), one per party."""
    return instance.interfering_sets


def validate(instance: ProblemInstance) -> list[Violation]:
    """Check structural rules; returns violation records (empty iff clean).

    Party-level breaks are severity 'error'. The receiver-presence rule is a
    'note': an eavesdropper-only instance is degenerate (no decoding
    constraint, upper bounds are +inf) but still analyzable.
    """
    out: list[Violation] = []
    for idx, p in enumerate(instance.parties, start=1):
        if p.wants & p.side_info:
            out.append(
                Violation(
                    "wants-overlaps-side-info",
                    f"party {idx}: wants and side information share "
                    f"{format_set(p.wants & p.side_info)}",
                    party=idx,
                )
            )
        b = instance.interfering(idx)
        if p.prohibited & ~b:
            out.append(
                Violation(
                    "prohibited-outside-interfering",
                    f"party {idx}: prohibited set leaves the interfering set by "
                    f"{format_set(p.prohibited & ~b)}",
                    party=idx,
                )
            )
    if not any(p.wants for p in instance.parties):
        out.append(
            Violation(
                "no-receiver",
                "no party wants anything; decoding places no constraint and "
                "upper bounds degenerate to +inf",
                severity="note",
            )
        )
    return out


# ---------------------------------------------------------------------------
# text format


_N_RE = re.compile(r"^n\s*=\s*(\d+)$")


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    if pos >= 0:
        line = line[:pos]
    return line


def _parse_field(field: str, col0: int, n: int, lineno: int, label: str) -> int:
    """Parse one field; col0 is the 1-based column where it starts."""
    if field.strip() == ".":
        return 0
    if not field.strip():
        raise ProblemFormatError(
            f"line {lineno}, col {col0}: empty {label} field "
            "(use '.' for the empty set)"
        )
    mask = 0
    pos = 0
    for tok in field.split(","):
        col = col0 + pos + (len(tok) - len(tok.lstrip()))
        t = tok.strip()
        pos += len(tok) + 1
        if not t.isdigit():
            raise ProblemFormatError(
                f"line {lineno}, col {col}: bad index {t!r} in {label} field"
            )
        k = int(t)
        if not 1 <= k <= n:
            raise ProblemFormatError(
                f"line {lineno}, col {col}: index {k} out of range 1..{n} "
                f"in {label} field"
            )
        bit = 1 << (k - 1)
        if mask & bit:
            raise ProblemFormatError(
                f"line {lineno}, col {col}: duplicate index {k} in {label} field"
            )
        mask |= bit
    return mask


def parse_problem(text: str, notation: str = "A") -> ProblemInstance:
    """Parse the text (or JSON, auto-detected) form of an instance.

    ``notation`` selects how the middle field of text party lines reads:
    "A" = side information, "B" = interfering set. Raises
    ProblemFormatError on syntax trouble and ProblemValidationError when a
    party-level rule is broken.
    """
    if notation not in ("A", "B"):
        raise ValueError(f"notation must be 'A' or 'B', got {notation!r}")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(stripped)

    n = None
    parties: list[Party] = []
    violations: list[Violation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        nocmt = _strip_comment(raw)
        line = nocmt.strip()
        if not line:
            continue
        if n is None:
            m = _N_RE.match(line)
            if not m:
                raise ProblemFormatError(
                    f"line {lineno}: expected 'n=<int>' before any party line"
                )
            n = int(m.group(1))
            if not 1 <= n <= MAX_MESSAGES:
                raise ProblemFormatError(
                    f"line {lineno}: n={n} outside the supported range 1..{MAX_MESSAGES}"
                )
            continue
        fields = nocmt.split("|")
        if len(fields) != 3:
            raise ProblemFormatError(
                f"line {lineno}: expected 3 '|'-separated fields, got {len(fields)}"
            )
        cols = [1]
        for f in fields[:-1]:
            cols.append(cols[-1] + len(f) + 1)
        w = _parse_field(fields[0], cols[0], n, lineno, "W")
        mid = _parse_field(fields[1], cols[1], n, lineno, notation)
        p = _parse_field(fields[2], cols[2], n, lineno, "P")
        idx = len(parties) + 1
        full = (1 << n) - 1
        if notation == "A":
            a = mid
        else:
            if w & mid:
                violations.append(
                    Violation(
                        "wants-overlaps-interfering",
                        f"party {idx}: wants and interfering set share "
                        f"{format_set(w & mid)}",
                        party=idx,
                    )
                )
            a = full & ~(w | mid)
            if p & ~mid:
                violations.append(
                    Violation(
                        "prohibited-outside-interfering",
                        f"party {idx}: prohibited set leaves the interfering set by "
                        f"{format_set(p & ~mid)}",
                        party=idx,
                    )
                )
        parties.append(Party(wants=w, side_info=a, prohibited=p))
    if n is None:
        raise ProblemFormatError("no 'n=<int>' line found")
    if not parties:
        raise ProblemFormatError("no party lines found")
    inst = ProblemInstance(n=n, parties=tuple(parties))
    violations.extend(v for v in validate(inst) if v.severity == "error")
    # B-form overlap surfaces twice (directly and as wants/side overlap after
    # conversion is impossible, but prohibited checks can duplicate); dedupe.
    seen = set()
    uniq = []
    for v in violations:
        key = (v.rule, v.party)
        if key not in seen:
            seen.add(key)
            uniq.append(v)
    if uniq:
        raise ProblemValidationError(uniq)
    return inst


def _party_json(d: dict, n: int, idx: int, violations: list[Violation]) -> Party:
    if not isinstance(d, dict):
        raise ProblemFormatError(f"party {idx}: expected an object")
    keys = set(d)
    if "W" not in keys or "P" not in keys or not ({"A", "B"} & keys):
        raise ProblemFormatError(
            f"party {idx}: need keys W, P and one of A or B (got {sorted(keys)})"
        )

    def field(name):
        v = d.get(name)
        if v is None:
            return None
        if not isinstance(v, list) or not all(isinstance(k, int) for k in v):
            raise ProblemFormatError(f"party {idx}: field {name} must be a list of ints")
        if len(set(v)) != len(v):
            raise ProblemFormatError(f"party {idx}: duplicate index in field {name}")
        for k in v:
            if not 1 <= k <= n:
                raise ProblemFormatError(
                    f"party {idx}: index {k} out of range 1..{n} in field {name}"
                )
        return mask_of(v)

    w = field("W")
    p = field("P")
    a = field("A")
    b = field("B")
    full = (1 << n) - 1
    if a is not None and b is not None and b != full & ~(a | w):
        raise ProblemFormatError(
            f"party {idx}: fields A and B disagree (B must be the complement "
            "of A and W together)"
        )
    if a is None:
        if w & b:
            violations.append(
                Violation(
                    "wants-overlaps-interfering",
                    f"party {idx}: wants and interfering set share "
                    f"{format_set(w & b)}",
                    party=idx,
                )
            )
        if p & ~b:
            violations.append(
                Violation(
                    "prohibited-outside-interfering",
                    f"party {idx}: prohibited set leaves the interfering set by "
                    f"{format_set(p & ~b)}",
                    party=idx,
                )
            )
        a = full & ~(w | b)
    return Party(wants=w, side_info=a, prohibited=p)


def _parse_json(text: str) -> ProblemInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFormatError(f"bad JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ProblemFormatError("top-level JSON value must be an object")
    notation = doc.get("notation", "A")
    if notation not in ("A", "B"):
        raise ProblemFormatError(
            f"notation must be 'A' or 'B', got {notation!r}"
        )
    n = doc.get("n")
    if not isinstance(n, int) or not 1 <= n <= MAX_MESSAGES:
        raise ProblemFormatError(f"bad or missing n (need int in 1..{MAX_MESSAGES})")
    parties = doc.get("parties")
    if not isinstance(parties, list) or not parties:
        raise ProblemFormatError("parties must be a non-empty list")
    violations: list[Violation] = []
    inst = ProblemInstance(
        n=n,
        parties=tuple(
            _party_json(d, n, i, violations) for i, d in enumerate(parties, start=1)
        ),
    )
    violations.extend(v for v in validate(inst) if v.severity == "error")
    seen = set()
    uniq = []
    for v in violations:
        key = (v.rule, v.party)
        if key not in seen:
            seen.add(key)
            uniq.append(v)
    if uniq:
        raise ProblemValidationError(uniq)
    return inst


def _field_text(mask: int) -> str:
    if mask == 0:
        return "."
    return ",".join(str(k) for k in indices_of(mask))


def serialize_problem(instance: ProblemInstance, notation: str = "A") -> str:
    """Canonical text form; A-form with sorted indices unless notation='B'."""
    if notation not in ("A", "B"):
        raise ValueError(f"notation must be 'A' or 'B', got {notation!r}")
    lines = [f"n={instance.n}"]
    for i, p in enumerate(instance.parties, start=1):
        mid = p.side_info if notation == "A" else instance.interfering(i)
        lines.append(
            f"{_field_text(p.wants)}|{_field_text(mid)}|{_field_text(p.prohibited)}"
        )
    return "\n".join(lines) + "\n"


def problem_to_json(instance: ProblemInstance) -> dict:
    return {
        "n": instance.n,
        "notation": "A",
        "parties": [
            {
                "W": list(indices_of(p.wants)),
                "A": list(indices_of(p.side_info)),
                "P": list(indices_of(p.prohibited)),
            }
            for p in instance.parties
        ],
    }


def serialize_problem_json(instance: ProblemInstance) -> str:
    return json.dumps(problem_to_json(instance), sort_keys=True)
