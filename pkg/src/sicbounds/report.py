"""Bound assembly, cross-checking, and deterministic serialization.

The four upper bounds form a proven chain (plain acyclic >= partition
sharpened >= chain bound >= LP) whenever each is finite, with the
markers ordered as +inf on top and degenerate-zero at 0.  Any violation
among them is an implementation bug and is surfaced as an
inconsistency.  The achievable rate sits below the chain *only for
instances that admit a secure code*: an achievable value exceeding an
upper bound is therefore reported as a proof that no positive-rate
secure code exists, not as an inconsistency.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .acyclic import mais_bound
from .bits import indices_of
from .chains import sbac_bound
from .lower import security_chain_lower
from .lp import spm_symmetric
from .model import ProblemInstance, problem_to_json, validate
from .smais import smais_bound
from .values import DEGENERATE_ZERO, INFINITE, BoundValue, Marker, format_value

UPPER_ORDER = ("mais", "smais", "sbac", "spm")
ALL_BOUNDS = UPPER_ORDER + ("lower",)


def _rank(v: BoundValue) -> tuple[int, Fraction]:
    """Total order with +inf above every rational and degenerate-zero at 0."""
    if isinstance(v, Marker):
        if v is INFINITE:
            return (1, Fraction(0))
        if v is DEGENERATE_ZERO:
            return (0, Fraction(0))
        raise ValueError(f"unorderable value {v}")
    return (0, Fraction(v))


def _ge(a: BoundValue, b: BoundValue) -> bool:
    ra, rb = _rank(a), _rank(b)
    return ra >= rb


# Methodological caveats attached to a report whenever the bound they
# concern was computed.  Worded once here so tests can pin them.
CHAIN_INTERIOR_NOTE = (
    "chain rule: every interior message of a candidate chain must be "
    "requested by some party; endpoints are exempt (interpretation)"
)
CLOSURE_NOTE = (
    "closure rule: eavesdropper knowledge is closed under decoding -- a "
    "party's wanted messages are absorbed once its known set is covered "
    "(interpretation)"
)


@dataclass
class BoundReport:
    instance: ProblemInstance
    bounds: dict[str, "BoundValue | None"] = field(default_factory=dict)
    details: dict[str, dict] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    interpretations: list[str] = field(default_factory=list)
    inconsistencies: list[str] = field(default_factory=list)
    infeasible: bool = False
    # Wall-clock seconds per bound.  Shown in human output only; kept out
    # of the JSON report so identical inputs serialize byte-identically.
    times: dict[str, float] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies


def compute_bounds(
    instance: ProblemInstance, which: tuple[str, ...] = ALL_BOUNDS
) -> BoundReport:
    for name in which:
        if name not in ALL_BOUNDS:
            raise ValueError(f"unknown bound {name!r}")
    report = BoundReport(instance)
    for v in validate(instance):
        if v.severity == "note":
            report.notes.append(v.message)

    if "mais" in which:
        t0 = time.perf_counter()
        v = mais_bound(instance)
        report.times["mais"] = time.perf_counter() - t0
        report.bounds["mais"] = v
        report.details["mais"] = {
            "h": v.denominator if isinstance(v, Fraction) else None
        }
    if "smais" in which:
        t0 = time.perf_counter()
        res = smais_bound(instance)
        report.times["smais"] = time.perf_counter() - t0
        report.bounds["smais"] = res.value
        report.details["smais"] = {
            "rho": list(res.rho) if res.rho is not None else None,
            "peak_cell": res.peak_cell,
            "steps": (
                [
                    [cell, sorted(indices_of(lo)), sorted(indices_of(hi)), h]
                    for cell, lo, hi, h in res.steps
                ]
                if res.steps is not None
                else None
            ),
        }
    if "sbac" in which:
        t0 = time.perf_counter()
        res = sbac_bound(instance)
        report.times["sbac"] = time.perf_counter() - t0
        report.bounds["sbac"] = res.value
        report.details["sbac"] = {
            "chain": list(res.chain) if res.chain else None,
            "edge_heights": (
                [format_value(h) if isinstance(h, Marker) else h for h in res.edge_heights]
                if res.edge_heights
                else None
            ),
        }
        if res.value is None:
            report.notes.append("no qualifying chain: chain bound not applicable")
        report.interpretations.append(CHAIN_INTERIOR_NOTE)
    if "spm" in which:
        t0 = time.perf_counter()
        res = spm_symmetric(instance)
        report.times["spm"] = time.perf_counter() - t0
        certified = res.certified
        if (
            not certified
            and "sbac" in report.bounds
            and isinstance(res.value, Fraction)
            and report.bounds["sbac"] == res.value
        ):
            certified = True
            report.notes.append(
                "LP optimum certified by agreement with the chain bound"
            )
        report.bounds["spm"] = res.value
        report.details["spm"] = {"certified": certified}
        report.notes.extend(res.notes)
    if "lower" in which:
        t0 = time.perf_counter()
        res = security_chain_lower(instance)
        report.times["lower"] = time.perf_counter() - t0
        report.bounds["lower"] = res.value
        report.details["lower"] = {
            "chain": list(res.chain),
            "chain_parties": list(res.chain_parties),
            "complete": res.complete,
        }
        report.notes.extend(res.evidence)
        report.interpretations.append(CLOSURE_NOTE)

    # Chain of upper bounds: violations are bugs.
    present = [
        (name, report.bounds[name])
        for name in UPPER_ORDER
        if report.bounds.get(name) is not None
    ]
    for (na, va), (nb, vb) in zip(present, present[1:]):
        if not _ge(va, vb):
            report.inconsistencies.append(
                f"{na} = {format_value(va)} below {nb} = {format_value(vb)}"
            )

    # Infeasibility detection.
    zeroish = [
        name
        for name, v in report.bounds.items()
        if name != "lower" and (v is DEGENERATE_ZERO or v == 0)
    ]
    if zeroish:
        report.infeasible = True
        report.notes.append(
            "an upper bound is 0: no positive-rate secure code exists"
        )
    lower_v = report.bounds.get("lower")
    lower_detail = report.details.get("lower", {})
    evidence = lower_detail.get("complete") or any(
        "no secure code" in n or "no positive rate" in n for n in report.notes
    )
    if isinstance(lower_v, Fraction) and lower_v > 0 and present:
        min_upper = min((_rank(v) for _, v in present), default=None)
        if min_upper is not None and min_upper < _rank(lower_v):
            report.infeasible = True
            report.notes.append(
                "achievable construction exceeds an upper bound: the "
                "instance admits no positive-rate secure code, so every "
                "bound holds vacuously at capacity 0"
            )
    if evidence:
        report.infeasible = True

    return report


def _value_json(v) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, Marker):
        return v.name
    return format_value(v)


def report_to_dict(report: BoundReport, decimal: bool = False) -> dict:
    out = {
        "n": report.instance.n,
        "parties": len(report.instance.parties),
        "instance": problem_to_json(report.instance),
        "bounds": {k: _value_json(v) for k, v in report.bounds.items()},
        "details": report.details,
        "notes": list(report.notes),
        "interpretations": list(report.interpretations),
        "consistent": report.consistent,
        "inconsistencies": list(report.inconsistencies),
        "infeasible": report.infeasible,
    }
    if decimal:
        approx = {}
        for k, v in report.bounds.items():
            if isinstance(v, Fraction):
                approx[k] = float(v)
            elif v is DEGENERATE_ZERO:
                approx[k] = 0.0
            elif v is INFINITE:
                approx[k] = None
        out["approx"] = approx
    return out


def report_json(report: BoundReport, decimal: bool = False) -> str:
    return json.dumps(
        report_to_dict(report, decimal=decimal),
        sort_keys=True,
        indent=2,
        separators=(",", ": "),
    )
