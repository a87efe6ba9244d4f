"""Report assembly: cross-checks, infeasibility rules, serialization."""

import json
from fractions import Fraction

import pytest

from sicbounds.model import parse_problem, problem_to_json
from sicbounds.report import (
    CHAIN_INTERIOR_NOTE,
    CLOSURE_NOTE,
    compute_bounds,
    report_json,
    report_to_dict,
)
from sicbounds.values import DEGENERATE_ZERO


def test_example1_full(example1):
    r = compute_bounds(example1)
    assert r.bounds["mais"] == Fraction(1, 3)
    assert r.bounds["smais"] == Fraction(1, 3)
    assert r.bounds["sbac"] == Fraction(2, 7)
    assert r.bounds["spm"] == Fraction(2, 7)
    assert r.bounds["lower"] == Fraction(1, 8)
    assert r.consistent and not r.infeasible
    assert r.details["mais"]["h"] == 3
    assert r.details["smais"]["peak_cell"] == 7
    assert r.details["sbac"]["chain"] == [1, 2, 3]
    assert r.details["sbac"]["edge_heights"] == [2, 2]
    assert r.details["lower"]["chain"] == [2, 1]
    assert r.details["spm"]["certified"] is True
    assert CHAIN_INTERIOR_NOTE in r.interpretations
    assert CLOSURE_NOTE in r.interpretations
    assert set(r.times) == {"mais", "smais", "sbac", "spm", "lower"}


def test_toy_all_tight(toy):
    r = compute_bounds(toy)
    for name in ("mais", "smais", "sbac", "spm", "lower"):
        assert r.bounds[name] == Fraction(1, 2), name
    assert r.consistent and not r.infeasible


def test_subset_and_unknown(toy):
    r = compute_bounds(toy, ("mais", "smais"))
    assert set(r.bounds) == {"mais", "smais"}
    assert set(r.times) == {"mais", "smais"}
    assert r.interpretations == []  # neither caveat applies
    with pytest.raises(ValueError):
        compute_bounds(toy, ("mais", "nope"))


def test_conflict_infeasible(conflict4):
    r = compute_bounds(conflict4)
    assert r.bounds["sbac"] is DEGENERATE_ZERO
    assert r.bounds["spm"] == 0
    assert r.bounds["lower"] == Fraction(1)
    assert r.consistent  # the upper chain itself is fine
    assert r.infeasible
    assert any("no secure code exists" in n for n in r.notes)
    assert any("an upper bound is 0" in n for n in r.notes)


def test_lower_above_upper_flags_infeasible(conflict4):
    # no zero upper in this subset; the lower/upper gap alone must flag it
    r = compute_bounds(conflict4, ("mais", "lower"))
    assert r.bounds["mais"] == Fraction(1, 3)
    assert r.bounds["lower"] == Fraction(1)
    assert r.infeasible
    assert any("vacuously" in n for n in r.notes)


def test_validation_note_flows_through():
    inst = parse_problem("n=2\n.|1|2\n")
    r = compute_bounds(inst, ("mais",))
    assert any("no party wants anything" in n for n in r.notes)


def test_json_deterministic(toy):
    a = report_json(compute_bounds(toy))
    b = report_json(compute_bounds(toy))
    assert a == b
    assert '"times"' not in a
    assert a.endswith("}")


def test_json_instance_roundtrip(toy):
    out = report_to_dict(compute_bounds(toy))
    assert out["instance"] == problem_to_json(toy)
    back = parse_problem(json.dumps(out["instance"]))
    assert back == toy


def test_json_shape(example1):
    out = report_to_dict(compute_bounds(example1))
    assert out["n"] == 10 and out["parties"] == 10
    assert out["bounds"]["sbac"] == "2/7"
    assert out["consistent"] is True
    assert out["inconsistencies"] == []
    assert "approx" not in out


def test_decimal_adds_approx(conflict4):
    out = report_to_dict(compute_bounds(conflict4), decimal=True)
    assert out["approx"]["spm"] == 0.0
    assert out["approx"]["sbac"] == 0.0  # degenerate-zero maps to 0.0
    assert abs(out["approx"]["mais"] - 1 / 3) < 1e-12
    out2 = report_to_dict(
        compute_bounds(parse_problem("n=2\n.|1|2\n"), ("mais",)), decimal=True
    )
    assert out2["approx"]["mais"] is None  # +inf has no float
    assert out2["bounds"]["mais"] == "+inf"
