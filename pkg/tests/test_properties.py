"""Cross-cutting invariants on randomized instances (hypothesis)."""

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from sicbounds.acyclic import h_mais, is_acyclic_wrt, mais_bound, verify_witness
from sicbounds.bits import iter_subsets
from sicbounds.chains import sbac_bound
from sicbounds.lower import security_chain_lower
from sicbounds.lp import spm_symmetric
from sicbounds.model import problem_to_json
from sicbounds.partition import g_partition
from sicbounds.report import compute_bounds, report_json
from sicbounds.smais import smais_bound
from sicbounds.values import DEGENERATE_ZERO, INFINITE, Marker

from conftest import random_instance, random_secure_free

instances = st.integers(0, 2**32 - 1).map(
    lambda s: random_instance(random.Random(s), n_max=4, m_max=5)
)
free_instances = st.integers(0, 2**32 - 1).map(
    lambda s: random_secure_free(random.Random(s), n_max=4, m_max=5)
)


def rank(v):
    if v is INFINITE:
        return (1, Fraction(0))
    if v is DEGENERATE_ZERO:
        return (0, Fraction(0))
    return (0, Fraction(v))


@settings(max_examples=60, deadline=None)
@given(instances, st.integers(0, 2**8 - 1), st.integers(0, 2**8 - 1))
def test_h_monotone_and_superadditive(inst, a, b):
    full = inst.full_mask
    s = a & full
    sp = s | (b & full)
    assert h_mais(inst, s, sp) <= h_mais(inst, s, full)
    for mid in iter_subsets(sp & ~s):
        m = s | mid
        assert h_mais(inst, s, m) + h_mais(inst, m, sp) <= h_mais(inst, s, sp)


@settings(max_examples=60, deadline=None)
@given(instances, st.integers(0, 2**8 - 1), st.integers(0, 2**8 - 1))
def test_witness_is_valid_order(inst, a, b):
    base = a & inst.full_mask
    members = (b & inst.full_mask) & ~base
    w = is_acyclic_wrt(inst, members, base)
    whole_is_acyclic = h_mais(inst, base, base | members) == members.bit_count()
    if w is None:
        assert not whole_is_acyclic
        return
    assert whole_is_acyclic
    assert w.members == members and w.base == base
    assert verify_witness(inst, w)


@settings(max_examples=80, deadline=None)
@given(instances)
def test_partition_is_equivalence(inst):
    part = g_partition(inst)
    seen = {}
    for mask in range(1 << inst.n):
        k = part.cell_of[mask]
        assert 1 <= k <= part.gamma
        seen.setdefault(k, []).append(mask)
    for k, members in seen.items():
        assert sorted(part.cells[k - 1]) == members
    again = g_partition.__wrapped__(inst)
    assert again.cells == part.cells
    assert again.residual_id == part.residual_id
    for mask in range(1 << inst.n):
        assert part.same_cell(mask, mask)


@settings(max_examples=40, deadline=None)
@given(instances)
def test_upper_bound_chain(inst):
    mais = mais_bound(inst)
    smais = smais_bound(inst).value
    sbac = sbac_bound(inst).value
    spm = spm_symmetric(inst).value
    assert rank(mais) >= rank(smais)
    if sbac is not None:
        assert rank(smais) >= rank(sbac)
        assert rank(sbac) >= rank(spm)
    else:
        assert rank(smais) >= rank(spm)


@settings(max_examples=40, deadline=None)
@given(free_instances)
def test_no_prohibitions_collapse(inst):
    # without secrecy the sharpened bound coincides with the plain one
    assert smais_bound(inst).value == mais_bound(inst)
    assert sbac_bound(inst).value is None


@settings(max_examples=60, deadline=None)
@given(instances)
def test_lower_bound_range(inst):
    res = security_chain_lower(inst)
    if res.complete:
        assert res.value == 0
    else:
        assert Fraction(1, inst.n) <= res.value <= 1
        assert res.value == Fraction(1, inst.n - len(res.chain))


@settings(max_examples=25, deadline=None)
@given(instances)
def test_report_deterministic_and_consistent(inst):
    a = compute_bounds(inst)
    assert a.consistent, a.inconsistencies
    assert report_json(a) == report_json(compute_bounds(inst))
    assert problem_to_json(inst) == problem_to_json(inst)
