"""Acceptance gate: one test per shipped guarantee, frozen seeds.

Each test prints a single PASS line (visible with -s); the pytest -v
status column carries the same verdict.  Runtime limits are asserted,
with caches cleared first so the measured time is a cold run.
"""

import random
import time
from fractions import Fraction

import pytest

from sicbounds.acyclic import analysis, h_mais, mais_bound
from sicbounds.chains import chain_analysis, sbac_bound
from sicbounds.lower import security_chain_lower
from sicbounds.lp import spm_symmetric
from sicbounds.oracle import entropic_violations, is_feasible_at
from sicbounds.partition import g_partition
from sicbounds.smais import smais_bound
from sicbounds.values import DEGENERATE_ZERO, INFINITE

from conftest import random_instance, random_secure_free

CORPUS_SEED = 20260822
CORPUS_SIZE = 500
ORACLE_SEED = 777
ORACLE_INSTANCES = 120
REDUCTION_SEED = 4242


def _rank(v):
    """Total order: +inf on top, degenerate-zero at 0, else the value."""
    if v is INFINITE:
        return (1, Fraction(0))
    if v is DEGENERATE_ZERO:
        return (0, Fraction(0))
    return (0, Fraction(v))


def _clear_caches():
    for f in (analysis, g_partition, chain_analysis, spm_symmetric,
              security_chain_lower):
        f.cache_clear()


@pytest.fixture(scope="module")
def corpus():
    """The shared 500-instance corpus with all four upper bounds."""
    rng = random.Random(CORPUS_SEED)
    out = []
    for _ in range(CORPUS_SIZE):
        inst = random_instance(rng, n_max=6, m_max=8)
        out.append(
            (
                inst,
                mais_bound(inst),
                smais_bound(inst).value,
                sbac_bound(inst).value,
                spm_symmetric(inst),
            )
        )
    return out


def test_criterion_1_worked_example_regression(example1):
    _clear_caches()
    t0 = time.perf_counter()
    assert smais_bound(example1).value == Fraction(1, 3)
    res = sbac_bound(example1)
    assert res.value == Fraction(2, 7)
    assert res.chain == (1, 2, 3)
    assert res.edge_heights == (2, 2)
    assert h_mais(example1, 0, 0b000100100) == 2  # {3,6}
    part = g_partition(example1)
    assert part.same_cell(0b000000101, 0b000100100)  # {1,3} ~ {3,6}
    assert part.same_cell(0b000000011, 0b000100001)  # {1,2} ~ {1,6}
    elapsed = time.perf_counter() - t0
    assert elapsed < 60, f"{elapsed:.1f}s"
    print(f"\nPASS criterion 1: worked-example regression exact ({elapsed:.2f}s)")


def test_criterion_2_lp_optimum_on_worked_example(example1):
    spm_symmetric.cache_clear()
    t0 = time.perf_counter()
    res = spm_symmetric(example1)
    elapsed = time.perf_counter() - t0
    assert res.value == Fraction(2, 7)
    assert elapsed < 600, f"{elapsed:.1f}s"
    print(f"\nPASS criterion 2: LP optimum 2/7 exact ({elapsed:.2f}s)")


def test_criterion_3_bound_ordering(corpus):
    violations = 0
    for inst, mais, smais, sbac, spm in corpus:
        chain = [mais, smais]
        if sbac is not None:
            chain.append(sbac)
        chain.append(spm.value)
        ranks = [_rank(v) for v in chain]
        if any(a < b for a, b in zip(ranks, ranks[1:])):
            violations += 1
    assert violations == 0
    print(f"\nPASS criterion 3: ordering spm <= sbac <= smais <= mais on "
          f"{len(corpus)} instances, {violations} violations")


def test_criterion_4_cell_equalities_and_growth_at_optimum(corpus):
    eq_checked = ineq_checked = 0
    for idx, (inst, _, _, _, spm) in enumerate(corpus):
        if spm.solution is None:
            continue
        sol = spm.solution
        part = g_partition(inst)
        for k, members in enumerate(part.cells, start=1):
            if k == part.residual_id:
                continue
            base = members[0]
            for other in members[1:]:
                assert sol.g[other] == sol.g[base], (
                    f"instance {idx}: cell values differ"
                )
                eq_checked += 1
        rng = random.Random(CORPUS_SEED ^ idx)
        full = inst.full_mask
        for _ in range(100):
            hi = rng.randint(0, full)
            lo = hi & rng.randint(0, full)
            lhs = sol.g[hi]
            rhs = sol.g[lo] + sol.rate * h_mais(inst, lo, hi)
            assert lhs >= rhs, f"instance {idx}: growth violated"
            ineq_checked += 1
    assert ineq_checked >= 100 * 50
    print(f"\nPASS criterion 4: {eq_checked} cell equalities and "
          f"{ineq_checked} growth inequalities exact at the optimum")


@pytest.fixture(scope="module")
def oracle_runs():
    """Oracle searches over n <= 3 instances at t = 1, M in 2..4."""
    rng = random.Random(ORACLE_SEED)
    runs = []
    codes = []
    attempts = 0
    while (len(runs) < ORACLE_INSTANCES or len(codes) < 50) and attempts < 2000:
        attempts += 1
        inst = random_instance(rng, n_max=3, m_max=5)
        found = []
        for m in (2, 3, 4):
            w = is_feasible_at(inst, 1, m)
            if w is not None:
                found.append(w)
        if len(runs) < ORACLE_INSTANCES:
            runs.append((inst, found))
        codes.extend((inst, w) for w in found)
    return runs, codes


def test_criterion_5_oracle_sandwich(parity3, oracle_runs):
    t0 = time.perf_counter()
    runs, _ = oracle_runs
    assert len(runs) >= 100
    violations = 0
    for inst, found in runs:
        uppers = [
            mais_bound(inst),
            smais_bound(inst).value,
            spm_symmetric(inst).value,
        ]
        sb = sbac_bound(inst).value
        if sb is not None:
            uppers.append(sb)
        for w in found:
            for u in uppers:
                if u is INFINITE:
                    continue
                bound = Fraction(0) if u is DEGENERATE_ZERO else u
                if not (w.rate <= bound):
                    violations += 1
        if found:
            low = security_chain_lower(inst).value
            if min(_rank(u) for u in uppers) < _rank(low):
                violations += 1
    assert violations == 0

    # the parity instance is certified exactly: lower = oracle = upper = 1
    w = is_feasible_at(parity3, 1, 2)
    assert w is not None and w.rate.as_fraction() == 1
    assert security_chain_lower(parity3).value == 1
    assert mais_bound(parity3) == 1
    assert spm_symmetric(parity3).value == 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 300, f"{elapsed:.1f}s"
    print(f"\nPASS criterion 5: sandwich on {len(runs)} instances, "
          f"{violations} violations; parity capacity 1 certified "
          f"({elapsed:.2f}s)")


def test_criterion_6_entropic_constraints_of_valid_codes(oracle_runs):
    _, codes = oracle_runs
    assert len(codes) >= 50
    bad = 0
    for inst, w in codes[:50]:
        if entropic_violations(inst, w):
            bad += 1
    assert bad == 0
    print(f"\nPASS criterion 6: 50 valid codes satisfy every entropic "
          f"constraint exactly, {bad} violations")


def test_criterion_7_reduction_without_secrecy():
    rng = random.Random(REDUCTION_SEED)
    checked = 0
    for _ in range(100):
        inst = random_secure_free(rng, n_max=6, m_max=8)
        mais = mais_bound(inst)
        smais = smais_bound(inst).value
        if mais is INFINITE:
            assert smais is INFINITE
        else:
            assert smais == mais
        assert sbac_bound(inst).value is None
        checked += 1
    assert checked == 100
    print(f"\nPASS criterion 7: smais = mais and no chain on "
          f"{checked} secrecy-free instances")
