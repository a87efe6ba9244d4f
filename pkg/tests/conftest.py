"""Shared fixtures: the worked instances plus a random-instance generator.

Frozen expectations for the named instances were cross-checked against
the brute-force referees in the individual test modules before being
pinned here.
"""

import random

import pytest

from sicbounds.model import Party, ProblemInstance, parse_problem

EXAMPLE1_TEXT = """\
n=10
1|.|.
2|.|.
3|6|.
4|2,3|.
5|2,3,4|.
6|.|.
7|1,2,6|2,6
8|1,6|.
9|1,6,8|.
10|1,3,6|1,6
"""

TOY_TEXT = """\
n=4
1|4|2,3
2|3|1,4
3,4|1,2|.
.|1,4|2,3
"""

PARITY_TEXT = """\
n=2
1|2|.
2|1|.
.|.|2
"""

CONFLICT_TEXT = """\
n=4
1|4|2,3
2|3|1,4
3|2|1,4
4|.|2,3
"""


@pytest.fixture(scope="session")
def example1():
    return parse_problem(EXAMPLE1_TEXT, notation="B")


@pytest.fixture(scope="session")
def toy():
    return parse_problem(TOY_TEXT)


@pytest.fixture(scope="session")
def parity3():
    return parse_problem(PARITY_TEXT)


@pytest.fixture(scope="session")
def conflict4():
    return parse_problem(CONFLICT_TEXT)


def random_instance(rng: random.Random, n_max: int = 6, m_max: int = 8) -> ProblemInstance:
    """A structurally valid instance: A and W disjoint, P inside B."""
    n = rng.randint(1, n_max)
    full = (1 << n) - 1
    parties = []
    for _ in range(rng.randint(1, m_max)):
        if rng.random() < 0.15:
            wants = 0  # eavesdropper
        else:
            wants = 1 << rng.randrange(n)
            if rng.random() < 0.3:
                wants |= 1 << rng.randrange(n)
        rest = full & ~wants
        side = 0
        for b in range(n):
            if rest >> b & 1 and rng.random() < 0.4:
                side |= 1 << b
        b_set = full & ~(wants | side)
        pro = 0
        if rng.random() < 0.6:
            for b in range(n):
                if b_set >> b & 1 and rng.random() < 0.5:
                    pro |= 1 << b
        parties.append(Party(wants=wants, side_info=side, prohibited=pro))
    return ProblemInstance(n=n, parties=tuple(parties))


def random_secure_free(rng: random.Random, n_max: int = 6, m_max: int = 8) -> ProblemInstance:
    """Like random_instance but with every prohibited set empty."""
    inst = random_instance(rng, n_max, m_max)
    return ProblemInstance(
        n=inst.n,
        parties=tuple(
            Party(p.wants, p.side_info, 0) for p in inst.parties
        ),
    )
