#!/usr/bin/env python3
"""
Tests for partitions and index sets
Conversions λ(I) <-> I, duals, composition/factoring and the text encoding
"""

import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partitions import (
    IndexSet,
    InvalidInputError,
    NotASubsetError,
    Partition,
    SchubertProblem,
    codim_condition_holds,
    compose_index,
    dual_partition,
    factor_index,
    format_partition,
    format_tuple,
    index_set_from_partition,
    index_sets,
    kernel_position_shift,
    lifted_positions,
    parse_index_tuple,
    parse_partition,
    parse_partition_tuple,
    partition_from_index_set,
    partitions_in_box,
    tilde_index_sets,
    total_codimension,
)


@st.composite
def boxed_partitions(draw, r=3, width=4):
    rows = draw(st.lists(st.integers(0, width), min_size=r, max_size=r))
    return Partition(tuple(sorted(rows, reverse=True)))


def test_partition_strips_trailing_zeros():
    assert Partition((2, 1, 0, 0)) == Partition((2, 1)), "Trailing zeros should not matter"
    assert Partition((2, 1, 0)).padded(4) == (2, 1, 0, 0)
    assert Partition().weight == 0 and Partition().width == 0


def test_partition_rejects_bad_rows():
    with pytest.raises(InvalidInputError):
        Partition((1, 2))
    with pytest.raises(InvalidInputError):
        Partition((2, -1))


def test_partition_helpers():
    lam = Partition((3, 1))
    assert lam.row(1) == 3 and lam.row(2) == 1 and lam.row(5) == 0
    assert lam.fits_box(2, 3) and not lam.fits_box(1, 3) and not lam.fits_box(2, 2)
    assert Partition((3, 2)).contains(lam)
    assert not lam.contains(Partition((1, 1, 1)))
    assert lam.scaled(3) == Partition((9, 3))
    assert Partition((3, 2, 2)).sl_normalized(3) == Partition((1,))


def test_partition_from_index_set_examples():
    lam = partition_from_index_set(IndexSet((2, 4), 4), 4, 2)
    assert lam == Partition((1,)), f"Expected (1), got {lam}"
    lam = partition_from_index_set(IndexSet((1, 3), 4), 4, 2)
    assert lam == Partition((2, 1)), f"Expected (2,1), got {lam}"
    assert partition_from_index_set(IndexSet.last(2, 4), 4, 2) == Partition()


def test_index_set_from_partition_examples():
    I = index_set_from_partition(Partition((1,)), 4, 2)
    assert I.elements == (2, 4), f"Expected (2,4), got {I}"
    with pytest.raises(InvalidInputError):
        index_set_from_partition(Partition((3,)), 4, 2)


@given(boxed_partitions())
@settings(max_examples=60, deadline=None)
def test_index_set_partition_inverse(lam):
    I = index_set_from_partition(lam, 7, 3)
    assert partition_from_index_set(I, 7, 3) == lam


@given(boxed_partitions())
@settings(max_examples=60, deadline=None)
def test_dual_is_involution_and_complements_weight(lam):
    dual = dual_partition(lam, 3, 4)
    assert dual_partition(dual, 3, 4) == lam
    assert lam.weight + dual.weight == 12


def test_index_set_partition_round_trip_exhaustive():
    for n in range(1, 9):
        for r in range(1, n + 1):
            for I in index_sets(n, r):
                lam = partition_from_index_set(I, n, r)
                assert lam.fits_box(r, n - r), f"{lam} escapes the box for {I}"
                assert index_set_from_partition(lam, n, r) == I, f"Round trip fails for {I} in [{n}]"
            for lam in partitions_in_box(r, n - r):
                dual = dual_partition(lam, r, n - r)
                assert dual_partition(dual, r, n - r) == lam
                assert lam.weight + dual.weight == r * (n - r)


def test_dual_partition_example():
    assert dual_partition(Partition((3, 2, 1)), 3, 3) == Partition((2, 1))
    assert dual_partition(Partition((2,)), 2, 2) == Partition((2,))


def test_index_set_validation():
    with pytest.raises(InvalidInputError):
        IndexSet((2, 2), 4)
    with pytest.raises(InvalidInputError):
        IndexSet((0, 2), 4)
    with pytest.raises(InvalidInputError):
        IndexSet((1, 5), 4)
    assert IndexSet.full(3).elements == (1, 2, 3)
    assert IndexSet.last(2, 5).elements == (4, 5)


def test_compose_and_factor():
    K = IndexSet((2, 3, 5), 6)
    J = compose_index(K, IndexSet((1, 3), 3))
    assert J == IndexSet((2, 5), 6), f"Expected (2,5), got {J}"
    assert factor_index(K, J) == IndexSet((1, 3), 3)
    with pytest.raises(NotASubsetError):
        factor_index(K, IndexSet((1, 2), 6))


def test_compose_is_associative_exhaustive():
    for n in range(1, 7):
        for k in range(n + 1):
            for K in index_sets(n, k):
                for j in range(k + 1):
                    for N in index_sets(k, j):
                        for i in range(j + 1):
                            for M in index_sets(j, i):
                                lhs = compose_index(K, compose_index(N, M))
                                rhs = compose_index(compose_index(K, N), M)
                                assert lhs == rhs, f"K={K}, N={N}, M={M}"
                                assert factor_index(K, lhs) == compose_index(N, M)


def test_kernel_position_shift():
    # H in [q+m] = [4], E in [m] = [2]: Y_1 = H_2 - 2 + 1
    Y = kernel_position_shift(IndexSet((2, 4), 4), IndexSet((2,), 2))
    assert Y == IndexSet((3,), 3), f"Expected (3) in [3], got {Y} in [{Y.ambient}]"
    Y = kernel_position_shift(IndexSet((2, 4), 4), IndexSet((1, 2), 2))
    assert Y == IndexSet((2, 4), 4), "Shifting by the full position is the identity"


def test_tilde_and_lifted_positions_factorwise():
    I = (IndexSet((1, 3, 5), 5),) * 3
    K = (IndexSet((1, 3), 3),) * 3
    J = (IndexSet((2,), 2),) * 3
    assert tilde_index_sets(I, K) == (IndexSet((1, 4), 4),) * 3
    assert lifted_positions(K, J) == (IndexSet((3,), 3),) * 3


def test_schubert_problem_validation():
    with pytest.raises(InvalidInputError):
        SchubertProblem.from_elements(4, 2, [(2, 4), (2, 4)])
    with pytest.raises(InvalidInputError):
        SchubertProblem.from_elements(4, 2, [(2, 4), (2, 4), (4,)])
    P = SchubertProblem.from_elements(4, 2, [(2, 3), (2, 4), (2, 4)])
    assert P.q == 2 and P.s == 3
    assert total_codimension(P) == 4
    assert codim_condition_holds(P)


def test_text_encoding():
    assert parse_partition('3,2,1') == Partition((3, 2, 1))
    assert parse_partition('0') == Partition()
    assert format_partition(Partition()) == '0'
    assert parse_partition_tuple('1:1,1:0') == (Partition((1,)), Partition((1, 1)), Partition())
    sets = parse_index_tuple('2,4:1,3', 4)
    assert format_tuple(sets) == '2,4:1,3'
    with pytest.raises(InvalidInputError):
        parse_partition('2,x')


def test_enumeration_counts():
    sets = index_sets(4, 2)
    assert len(sets) == 6
    assert sets[0].elements == (1, 2) and sets[-1].elements == (3, 4), "Expected lexicographic order"
    boxed = partitions_in_box(2, 2)
    assert len(boxed) == 6, f"Expected C(4,2)=6 partitions, got {len(boxed)}"
    assert [lam.weight for lam in boxed] == sorted(lam.weight for lam in boxed)


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
