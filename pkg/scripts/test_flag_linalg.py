#!/usr/bin/env python3
"""
Tests for prime-field linear algebra and flags
Elimination, flag positions, induced flags, constrained sampling and
subspace enumeration
"""

import sys

import pytest

from flag_linalg import (
    PrimeFlag,
    PrimeMatrix,
    check_prime,
    derive_seed,
    enumerate_subspaces,
    gaussian_binomial,
    induced_flag_on_quotient,
    induced_flag_on_subspace,
    intersect_subspaces,
    intersection_dimensions,
    is_prime,
    make_rng,
    quotient_projection,
    random_flag,
    random_matrix,
    sample_flag_with_position,
    subspace_position,
)
from partitions import IndexSet, InvalidInputError, index_sets

SMALL = 7


def test_primes():
    assert is_prime(2) and is_prime(1000003) and is_prime(2147483647)
    assert not is_prime(1) and not is_prime(91)
    assert check_prime(7) == 7
    with pytest.raises(InvalidInputError):
        check_prime(4)
    with pytest.raises(InvalidInputError):
        check_prime(2 ** 31 + 11)


def test_seeds_are_deterministic():
    assert derive_seed(0, 5) == derive_seed(0, 5)
    assert derive_seed(0, 5) != derive_seed(0, 6)
    assert derive_seed(0, 5, 1) != derive_seed(0, 5, 0)
    assert 0 <= derive_seed(123, 4) < 2 ** 63
    a = random_flag(4, 11)
    b = random_flag(4, 11)
    assert a.basis == b.basis, "Same seed must give the same flag"


def test_rank_kernel_inverse():
    A = PrimeMatrix.from_rows([[1, 2, 3], [2, 4, 6]], SMALL)
    assert A.rank() == 1
    K = A.kernel()
    assert K.cols == 2
    assert A @ K == PrimeMatrix.zeros(2, 2, SMALL)

    B = PrimeMatrix.from_rows([[1, 2], [3, 4]], SMALL)
    assert B @ B.inverse() == PrimeMatrix.identity(2, SMALL)
    with pytest.raises(InvalidInputError):
        PrimeMatrix.from_rows([[1, 2], [2, 4]], SMALL).inverse()
    with pytest.raises(InvalidInputError):
        A @ B


def test_matmul_near_largest_prime():
    p = 2147483647
    row = PrimeMatrix.from_rows([[p - 1] * 3], p)
    column = PrimeMatrix.from_rows([[p - 1]] * 3, p)
    assert (row @ column).tolist() == [[3]], "(-1)(-1) summed three times"


def test_intersect_subspaces():
    A = PrimeMatrix.from_rows([[1, 0], [0, 1], [0, 0]], 5)
    B = PrimeMatrix.from_rows([[0, 0], [1, 0], [0, 1]], 5)
    C = intersect_subspaces(A, B)
    assert C.cols == 1
    assert C.hstack(PrimeMatrix.from_rows([[0], [1], [0]], 5)).rank() == 1


def test_random_flags_are_invertible():
    for seed in range(200):
        F = random_flag(4, seed, SMALL)
        assert F.basis.is_invertible(), f"Seed {seed} gave a singular basis"
    assert random_flag(0, 1).m == 0
    with pytest.raises(InvalidInputError):
        PrimeFlag(PrimeMatrix.from_rows([[1, 1], [1, 1]], SMALL))


# ── Positions ────────────────────────────────────────────────────────────────

def test_subspace_position_standard_flag():
    F = PrimeFlag(PrimeMatrix.identity(3, SMALL))
    e2 = PrimeMatrix.from_rows([[0], [1], [0]], SMALL)
    assert subspace_position(e2, F) == IndexSet((2,), 3)
    plane = PrimeMatrix.from_rows([[1, 0], [0, 0], [0, 1]], SMALL)
    assert subspace_position(plane, F) == IndexSet((1, 3), 3)
    assert intersection_dimensions(plane, F) == [0, 1, 1, 2]
    with pytest.raises(InvalidInputError):
        subspace_position(PrimeMatrix.from_rows([[1, 1], [0, 0], [0, 0]], SMALL), F)


def test_flag_steps_have_initial_positions():
    for m in range(1, 5):
        F = random_flag(m, m, SMALL)
        for e in range(0, m + 1):
            assert subspace_position(F.step(e), F) == IndexSet(tuple(range(1, e + 1)), m)


def test_position_independent_of_basis():
    rng = make_rng(3)
    for trial in range(20):
        F = random_flag(4, trial, SMALL)
        R = random_matrix(4, 2, rng, SMALL)
        if R.rank() != 2:
            continue
        g = PrimeMatrix.from_rows([[1, 2], [0, 1]], SMALL)
        assert subspace_position(R, F) == subspace_position(R @ g, F)


def test_position_matches_intersection_dimensions():
    rng = make_rng(5)
    for trial in range(30):
        F = random_flag(4, 100 + trial, 3)
        R = random_matrix(4, 2, rng, 3)
        if R.rank() != 2:
            continue
        H = subspace_position(R, F)
        dims = intersection_dimensions(R, F)
        assert dims == [sum(1 for x in H if x <= a) for a in range(5)], f"{H} vs {dims}"


def test_generic_subspace_takes_last_position():
    F = random_flag(5, 1)
    R = random_matrix(5, 2, make_rng(2), F.prime)
    assert subspace_position(R, F) == IndexSet((4, 5), 5)


# ── Induced flags ────────────────────────────────────────────────────────────

def _check_induced_subspace_flag(F, S):
    induced = induced_flag_on_subspace(F, S)
    H = subspace_position(S, F)
    assert induced.m == S.cols
    for b in range(1, S.cols + 1):
        vectors = S @ induced.step(b)
        Hb = H.at(b)
        assert F.step(Hb).hstack(vectors).rank() == Hb, f"Step {b} is not inside F_{Hb}"


def test_induced_flag_on_subspace():
    rng = make_rng(8)
    for trial in range(20):
        F = random_flag(4, 200 + trial, SMALL)
        S = random_matrix(4, 1 + trial % 3, rng, SMALL)
        if S.rank() != S.cols:
            continue
        _check_induced_subspace_flag(F, S)


def test_induced_flag_on_whole_space_and_on_step():
    F = random_flag(4, 9, SMALL)
    whole = induced_flag_on_subspace(F, PrimeMatrix.identity(4, SMALL))
    assert whole.same_steps(F)
    _check_induced_subspace_flag(F, F.step(2))


def test_quotient_projection_dimensions():
    rng = make_rng(13)
    for trial in range(20):
        F = random_flag(4, 300 + trial, SMALL)
        S = random_matrix(4, 1 + trial % 3, rng, SMALL)
        if S.rank() != S.cols:
            continue
        projection = quotient_projection(S)
        assert projection.rows == 4 - S.cols and projection.rank() == 4 - S.cols
        assert (projection @ S) == PrimeMatrix.zeros(4 - S.cols, S.cols, SMALL)
        dims = intersection_dimensions(S, F)
        for a in range(1, 5):
            assert (projection @ F.step(a)).rank() == a - dims[a]
        assert induced_flag_on_quotient(F, S).m == 4 - S.cols


def test_quotient_flag_edge_cases():
    F = random_flag(3, 4, SMALL)
    assert induced_flag_on_quotient(F, PrimeMatrix.zeros(3, 0, SMALL)).same_steps(F)
    assert induced_flag_on_quotient(F, PrimeMatrix.identity(3, SMALL)).m == 0


# ── Constrained sampling ─────────────────────────────────────────────────────

def test_sample_flag_with_position():
    f, g = 4, 2
    T = random_matrix(f, g, make_rng(1), 1000003)
    for seed in range(30):
        N = tuple(index_sets(f, g)[(seed + k) % 6] for k in range(3))
        flags = sample_flag_with_position(f, T, N, seed)
        assert [subspace_position(T, flag) for flag in flags] == list(N)


def test_sample_flag_zero_subspace():
    T = PrimeMatrix.zeros(3, 0, 1000003)
    flags = sample_flag_with_position(3, T, (IndexSet((), 3),) * 3, seed=0)
    assert len(flags) == 3 and all(flag.m == 3 for flag in flags)


def test_sample_flag_rejects_bad_input():
    T = random_matrix(3, 2, make_rng(0), 1000003)
    with pytest.raises(InvalidInputError):
        sample_flag_with_position(3, T, (IndexSet((1,), 3),) * 3, seed=0)
    with pytest.raises(InvalidInputError):
        sample_flag_with_position(4, T, (IndexSet((1, 2), 4),) * 3, seed=0)


# ── Enumeration ──────────────────────────────────────────────────────────────

def test_enumerate_subspaces_counts():
    assert len(enumerate_subspaces(1, 3, 2)) == 7
    assert len(enumerate_subspaces(2, 4, 2)) == 35
    spaces = enumerate_subspaces(2, 3, 3)
    assert len(spaces) == 13
    assert all(S.rank() == 2 for S in spaces)
    assert len({tuple(map(tuple, S.tolist())) for S in spaces}) == 13


def test_gaussian_binomial():
    assert gaussian_binomial(4, 2) == [1, 1, 2, 1, 1]
    assert gaussian_binomial(3, 0) == [1]
    assert gaussian_binomial(2, 3) == [0]
    assert sum(c * 2 ** i for i, c in enumerate(gaussian_binomial(4, 2))) == 35


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
