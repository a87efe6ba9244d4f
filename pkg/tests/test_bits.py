from sicbounds.bits import (
    bit_index,
    format_set,
    indices_of,
    iter_bits,
    iter_subsets,
    mask_of,
    popcount,
)


def test_mask_roundtrip():
    assert mask_of([1, 3, 6]) == 0b100101
    assert indices_of(0b100101) == (1, 3, 6)
    assert mask_of([]) == 0
    assert indices_of(0) == ()


def test_mask_rejects_nonpositive():
    import pytest

    with pytest.raises(ValueError):
        mask_of([0])


def test_popcount():
    assert popcount(0) == 0
    assert popcount(0b1011) == 3


def test_iter_bits():
    assert list(iter_bits(0b10110)) == [0b10, 0b100, 0b10000]


def test_iter_subsets_complete():
    subs = list(iter_subsets(0b101))
    assert sorted(subs) == [0, 0b001, 0b100, 0b101]
    assert subs[-1] == 0


def test_bit_index():
    assert bit_index(1) == 1
    assert bit_index(0b10000) == 5


def test_format_set():
    assert format_set(0) == "{}"
    assert format_set(0b101) == "{1,3}"
