from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from holojet.multiindex import (block_count, bump_level, decompositions,
                                degree, enumerate_multiindices,
                                index_position, increment, decrement,
                                jet_indices, k1_constant, k2_constant)


def test_order_1d():
    assert jet_indices(1, 2) == ((0,), (1,), (2,))


def test_order_2d_frozen():
    assert jet_indices(2, 2) == ((0, 0), (1, 0), (0, 1),
                                 (2, 0), (1, 1), (0, 2))


def test_count_3d():
    assert len(jet_indices(3, 1)) == 4


def test_enumerate_alias():
    assert enumerate_multiindices is jet_indices


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("r", [0, 1, 2, 3, 4])
def test_length_binomial(n, r):
    assert len(jet_indices(n, r)) == math.comb(n + r, r)
    assert block_count(n, r) == math.comb(n + r, r)


@given(st.integers(1, 4), st.integers(0, 4))
def test_graded_lex_order(n, r):
    idx = jet_indices(n, r)
    degs = [degree(i) for i in idx]
    assert degs == sorted(degs)
    for d in range(r + 1):
        block = [i for i in idx if degree(i) == d]
        assert block == sorted(block, reverse=True)


@given(st.integers(1, 3), st.integers(0, 3))
def test_position_inverse(n, r):
    idx = jet_indices(n, r)
    pos = index_position(n, r)
    for i, index in enumerate(idx):
        assert pos[index] == i


def test_increment_decrement_round_trip():
    assert increment((1, 0), 1) == (1, 1)
    assert decrement((1, 1), 1) == (1, 0)
    assert decrement(increment((2, 3), 0), 0) == (2, 3)


def test_bad_arguments():
    with pytest.raises(ValueError):
        jet_indices(0, 1)
    with pytest.raises(ValueError):
        jet_indices(1, -1)


def test_decomposition_count_at_11():
    # (1,1) splits as (0,0)+(1,1), (1,0)+(0,1), (0,1)+(1,0), (1,1)+(0,0)
    assert len(decompositions((1, 1))) == 4


def test_k_constants_n2_r2():
    assert k1_constant(2, 2) == 4
    assert k2_constant(2, 2) == 6
    # smallest N with N^2 > 9 * 4 * 6 = 216
    assert bump_level(2, 2) == 15


@given(st.integers(1, 3), st.integers(1, 3))
def test_bump_level_formula(n, r):
    target = 9 * k1_constant(n, r) * k2_constant(n, r)
    level = bump_level(n, r)
    assert level ** 2 > target >= (level - 1) ** 2
