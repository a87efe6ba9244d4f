"""Exact log-combination numbers: identities, ordering, sign search."""

from fractions import Fraction

import pytest

from sicbounds.lognum import LogNum


def test_rational_cases():
    assert LogNum.log2(8) == 3
    assert LogNum.log2(1) == 0
    assert LogNum.log2(1024) == Fraction(10)
    assert LogNum.log2(8).is_rational()
    assert not LogNum.log2(6).is_rational()


def test_factor_identities():
    assert LogNum.log2(9) == LogNum.log2(3) * 2
    assert LogNum.log2(6) + LogNum.log2(10) == LogNum.log2(60)
    assert LogNum.log2(12) - LogNum.log2(3) == 2
    assert LogNum.log2(7, Fraction(2, 3)) * 3 == LogNum.log2(49)


def test_entropy_identity():
    # -3/4 log(3/4) - 1/4 log(1/4), written two ways
    lhs = 2 - LogNum.log2(3, Fraction(3, 4))
    rhs = (
        LogNum.log2(4, Fraction(3, 4))
        - LogNum.log2(3, Fraction(3, 4))
        + LogNum.log2(4, Fraction(1, 4))
    )
    assert lhs == rhs


def test_irrational_never_equals_fraction():
    assert LogNum.log2(3) != Fraction(8, 5)
    assert LogNum.log2(3) != 2


def test_ordering_against_convergents():
    x = LogNum.log2(3)
    assert Fraction(19, 12) < x < Fraction(8, 5)
    assert Fraction(1054, 665) < x < Fraction(24727, 15601)
    assert x.sign() == 1
    assert (-x).sign() == -1
    assert LogNum().sign() == 0
    assert (x - x).sign() == 0


def test_mixed_arithmetic():
    x = LogNum.log2(5)
    assert 1 + x - 1 == x
    assert 2 - (2 - x) == x
    assert Fraction(1, 2) * x * 2 == x
    assert hash(x + 1 - 1) == hash(x)


def test_float_and_repr():
    x = LogNum.log2(12)
    assert abs(float(x) - 3.584962500721156) < 1e-12
    assert "log2(3)" in repr(x)


def test_log_of_nonpositive():
    with pytest.raises(ValueError):
        LogNum.log2(0)
    with pytest.raises(ValueError):
        LogNum.log2(-4)
