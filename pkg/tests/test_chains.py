"""Class heights and the chain bound vs brute-force referees (n <= 4)."""

import random
from fractions import Fraction
from itertools import permutations

from sicbounds.acyclic import h_mais
from sicbounds.chains import chain_height, explain_sbac, sbac_bound
from sicbounds.model import parse_problem
from sicbounds.partition import g_partition
from sicbounds.values import DEGENERATE_ZERO, INFINITE

from conftest import random_instance

BIG = 10 ** 6


def ref_heights(instance):
    """Fixpoint of h over same-cell classes; BIG stands in for infinity."""
    part = g_partition(instance)
    size = 1 << instance.n
    cap = instance.n * size + 1

    def key(mask):
        k = part.cell_of[mask]
        return ("r", mask) if k == part.residual_id else ("c", k)

    classes = {}
    for mask in range(size):
        classes.setdefault(key(mask), []).append(mask)
    val = {k: 0 for k in classes}
    changed = True
    while changed:
        changed = False
        for kk, mem in classes.items():
            for s in mem:
                rest = instance.full_mask & ~s
                sub = rest
                while True:
                    sp = s | sub
                    other = val[key(sp)]
                    cand = BIG if other >= BIG else h_mais(instance, s, sp) + other
                    if cand >= cap:
                        cand = BIG
                    if cand > val[kk]:
                        val[kk] = cand
                        changed = True
                    if sub == 0:
                        break
                    sub = (sub - 1) & rest
    return lambda mask: val[key(mask)]


def ref_sbac(instance):
    """Enumerate every chain outright; 0 stands for degenerate-zero."""
    part = g_partition(instance)
    n = instance.n
    req = instance.requested_mask
    height = ref_heights(instance)

    def terminal(a, b):
        pair = (1 << (a - 1)) | (1 << (b - 1))
        if h_mais(instance, 0, pair) == 2:
            return True  # the pair vouches for itself
        k = part.cell_of[pair]
        if k == part.residual_id:
            return False
        return max(h_mais(instance, 0, s) for s in part.cells[k - 1]) >= 2

    best = None
    winners = []
    for size in range(2, n + 1):
        for seq in permutations(range(1, n + 1), size):
            if seq[0] > seq[-1]:
                continue  # canonical orientation
            if not terminal(seq[0], seq[-1]):
                continue
            if any(not (req >> (i - 1)) & 1 for i in seq[1:-1]):
                continue
            hs = [height((1 << (a - 1)) | (1 << (b - 1)))
                  for a, b in zip(seq, seq[1:])]
            m = size - 1
            v = Fraction(0) if any(h >= BIG for h in hs) \
                else Fraction(m, 1 + m + sum(hs))
            if best is None or v < best:
                best, winners = v, [seq]
            elif v == best:
                winners.append(seq)
    if best is None:
        return None, None
    if best == 0:
        return Fraction(0), None
    min_m = min(len(w) for w in winners) - 1
    chain = min(w for w in winners if len(w) - 1 == min_m)
    return best, chain


def test_toy_frozen(toy):
    res = sbac_bound(toy)
    assert res.value == Fraction(1, 2)
    assert res.chain == (1, 2)
    assert res.edge_heights == (0,)


def test_example1_heights(example1):
    assert chain_height(example1, 0b000000011) == 2  # {1,2}
    assert chain_height(example1, 0b000000110) == 2  # {2,3}
    assert chain_height(example1, 0b000000101) == 1  # {1,3}
    assert chain_height(example1, 0b000100010) == 2  # {2,6}
    assert chain_height(example1, 0b000001001) == 0  # {1,4}


def test_example1_sbac(example1):
    res = sbac_bound(example1)
    assert res.value == Fraction(2, 7)
    assert res.chain == (1, 2, 3)
    assert res.edge_heights == (2, 2)


def test_example1_explain(example1):
    text = explain_sbac(example1)
    assert "chain 1 <-> 2 <-> 3" in text
    assert "h({1,2}) = 2" in text
    assert "h({2,3}) = 2" in text
    assert "value 2/(1 + 2 + 4) = 2/7" in text


def test_conflict_degenerate(conflict4):
    assert chain_height(conflict4, 0b0011) is INFINITE
    res = sbac_bound(conflict4)
    assert res.value is DEGENERATE_ZERO
    assert res.chain == (1, 2)
    assert res.edge_heights == (INFINITE,)
    assert "rate to zero" in explain_sbac(conflict4)


def test_no_chain_reported_absent():
    # nobody requests anything beyond singleton coverage of pairs
    inst = parse_problem("n=2\n1|2|.\n2|1|.\n")
    res = sbac_bound(inst)
    assert res.value is None and res.chain is None
    assert explain_sbac(inst) == "no qualifying chain"


def test_height_witness_random():
    rng = random.Random(41)
    for _ in range(80):
        inst = random_instance(rng, n_max=4, m_max=6)
        from sicbounds.chains import chain_analysis
        ana = chain_analysis(inst)
        for pair in range(1, 1 << inst.n):
            h = ana.height(pair)
            if h < 0:
                assert ana.height_witness(pair) is None
                continue
            steps = ana.height_witness(pair)
            cur = pair
            total = 0
            part = g_partition(inst)
            for kind, m in steps:
                if kind == "-":
                    # free hop within the current class
                    assert part.cell_of[m] == part.cell_of[cur]
                    assert part.cell_of[m] != part.residual_id or m == cur
                    cur = m
                else:
                    assert cur & ~m == 0
                    total += h_mais(inst, cur, m)
                    cur = m
            assert total == h


def test_random_against_referee():
    rng = random.Random(43)
    degenerate_seen = 0
    for _ in range(150):
        inst = random_instance(rng, n_max=4, m_max=6)
        height = ref_heights(inst)
        for pair in range(1, 1 << inst.n):
            got = chain_height(inst, pair)
            want = height(pair)
            if want >= BIG:
                assert got is INFINITE
            else:
                assert got == want
        want_val, want_chain = ref_sbac(inst)
        res = sbac_bound(inst)
        if want_val is None:
            assert res.value is None
        elif want_val == 0:
            assert res.value is DEGENERATE_ZERO
            degenerate_seen += 1
        else:
            assert res.value == want_val
            assert res.chain == want_chain
    assert degenerate_seen > 0
