#!/usr/bin/env python3
"""Tests for stabfin_matrices."""

import pytest
from hypothesis import given, settings, strategies as st

from stabfin_config import make_rng
from stabfin_errors import (
    Mismatch, NotCongruentModP, NotOneSidedPair, NotUnitriangular, ShapeMismatch
)
from stabfin_groups import cyclic, make_group
from stabfin_matrices import (
    BlockShape, ConfirmsDF, InShape, block_df_reduction_check, block_left_unit_check,
    block_upper_right_inverse, check_df_pair, diagonal, hensel_lift, hensel_sweep, identity,
    is_block_upper, is_unit_matrix, mat_arith, mat_lift, mat_reduce, matrix,
    one_sided_unit_search, random_block_unit, solve_right_inverse, subring_df_check, unit_shape,
    unitriangular_inverse, unitriangular_inverse_rounds, unitriangular_sweep
)
from stabfin_rings import group_ring, integers, make_gf, z_mod

F2 = make_gf(2)
Z = integers()
C2, C3 = make_group(cyclic(2)), make_group(cyclic(3))
ZZ = make_group(cyclic(0))
F2C2, F2C3, F2Z = group_ring(F2, C2), group_ring(F2, C3), group_ring(F2, ZZ)
ZC2 = group_ring(Z, C2)


def test_matrix_arithmetic_and_format():
    A = matrix(F2, [[1, 1], [0, 1]])
    assert A * A == identity(F2, 2)
    assert repr(A) == '[[1, 1], [0, 1]]'
    assert (A - A).rows == matrix(F2, [[0, 0], [0, 0]]).rows
    assert mat_arith('mul', A, A) == identity(F2, 2)
    with pytest.raises(ValueError):
        mat_arith('div', A, A)
    with pytest.raises(ShapeMismatch):
        matrix(F2, [[1, 0]])
    with pytest.raises(Mismatch):
        A * identity(make_gf(3), 2)


def test_check_df_pair():
    X = matrix(F2, [[1, 1], [0, 1]])
    assert isinstance(check_df_pair(X, X), ConfirmsDF)
    with pytest.raises(NotOneSidedPair):
        check_df_pair(X, identity(F2, 2))


def test_block_shape():
    shape = BlockShape((1, 2))
    assert shape.total == 3
    assert shape.block_index() == [0, 1, 1]
    assert (1, 0) not in shape.free_positions()
    assert (1, 2) in shape.free_positions() and (2, 1) in shape.free_positions()
    with pytest.raises(ValueError):
        BlockShape((0, 1))


def test_is_block_upper():
    X = matrix(F2, [[1, 0, 1], [0, 1, 1], [0, 1, 1]])
    assert is_block_upper(X, BlockShape((1, 2)))
    assert not is_block_upper(X, unit_shape(3))
    with pytest.raises(ShapeMismatch):
        is_block_upper(X, BlockShape((2, 2)))


def test_unitriangular_inverse_over_z():
    A = matrix(Z, [[1, 2, 3], [0, 1, 4], [0, 0, 1]])
    P, rounds = unitriangular_inverse_rounds(A)
    assert A * P == identity(Z, 3) and P * A == identity(Z, 3)
    assert rounds <= 2


def test_unitriangular_inverse_rejects_other_matrices():
    with pytest.raises(NotUnitriangular):
        unitriangular_inverse(matrix(Z, [[2, 0], [0, 1]]))
    with pytest.raises(NotUnitriangular):
        unitriangular_inverse(matrix(Z, [[1, 0], [1, 1]]))


def test_unitriangular_inverse_over_laurent_polynomials():
    x = F2Z.monomial(1)
    A = matrix(F2Z, [[1, x, 0], [0, 1, F2Z.one + x], [0, 0, 1]])
    P = unitriangular_inverse(A)
    assert A * P == identity(F2Z, 3)


def test_hensel_lift_over_z_c2():
    g = ZC2.monomial(1)
    Yt = matrix(ZC2, [[ZC2.one + g * 2]])
    Zt = identity(ZC2, 1)
    for m in (2, 3, 5):
        lifted = hensel_lift(Zt, Yt, 2, m)
        assert (mat_reduce(lifted, 2 ** m) * mat_reduce(Yt, 2 ** m)).is_identity()


def test_hensel_lift_needs_congruence():
    with pytest.raises(NotCongruentModP):
        hensel_lift(matrix(Z, [[2]]), matrix(Z, [[3]]), 2, 3)


def test_reduce_and_lift():
    M = matrix(Z, [[7, -1], [0, 4]])
    assert mat_lift(mat_reduce(M, 4)) == matrix(Z, [[3, 3], [0, 0]])


def test_right_inverse_over_group_rings():
    g = F2C3.monomial(1)
    Y = solve_right_inverse(matrix(F2C3, [[g]]))
    assert Y == matrix(F2C3, [[g * g]])
    assert solve_right_inverse(matrix(F2C3, [[F2C3.one + g]])) is None


def test_right_inverse_over_laurent_window():
    x = F2Z.monomial(1)
    assert solve_right_inverse(matrix(F2Z, [[x]]), window=1) == matrix(F2Z, [[F2Z.monomial(-1)]])
    assert solve_right_inverse(matrix(F2Z, [[F2Z.one + x]]), window=2) is None


def test_right_inverse_over_plain_field():
    X = matrix(F2, [[1, 1], [1, 0]])
    Y = solve_right_inverse(X)
    assert X * Y == identity(F2, 2)


@pytest.mark.parametrize('base, d, units', [
    (F2, 2, 6),
    (F2C2, 1, 2),
    (F2C3, 1, 3),
    (group_ring(z_mod(4), C2), 1, 8),
])
def test_exhaustive_search_finds_no_one_sided_units(base, d, units):
    report = one_sided_unit_search(base, d)
    assert report['mode'] == 'pairs'
    assert report['scanned'] == report['space'] ** 2
    assert report['one_sided'] == units
    assert report['witnesses'] == []
    assert report['bounded'] is False


def test_degenerate_window_search_is_bounded():
    report = one_sided_unit_search(F2Z, 1, window=0)
    assert report['bounded'] is True
    assert report['space'] == 2
    assert report['scanned'] == 4
    assert report['witnesses'] == []


def test_solve_mode_over_f2_c2_2x2():
    report = one_sided_unit_search(F2C2, 2, budget=1 << 10)
    assert report['mode'] == 'solve'
    assert report['scanned'] == 256
    assert report['witnesses'] == []


def test_block_reduction_check():
    report = block_df_reduction_check(F2, BlockShape((1, 1)))
    assert report['subring_size'] == 8
    assert report['subring_pairs'] == report['subring_two_sided'] == 2
    assert report['agrees']
    assert report['inverse_checks'] == {'checked': 2, 'violations': 0}


def test_subring_check_is_consistent():
    report = subring_df_check(F2, BlockShape((1, 1)))
    assert report['consistent'] and report['subring_df'] and report['ambient_df']


def test_block_inverse_checks_on_a_unit():
    X = matrix(F2, [[1, 1], [0, 1]])
    shape = BlockShape((1, 1))
    assert isinstance(block_left_unit_check(X, X, shape), InShape)
    assert block_upper_right_inverse(X, X, shape) == X


def test_unit_test_by_search_and_by_solving():
    g = group_ring(z_mod(4), C2).monomial(1)
    R = g.parent
    assert is_unit_matrix(matrix(R, [[R.one + g * 2]]))
    assert not is_unit_matrix(matrix(R, [[R.one + g]]))
    assert is_unit_matrix(matrix(F2C2, [[F2C2.monomial(1)]]))


def test_random_block_unit_is_a_unit():
    rng = make_rng(7)
    shape = BlockShape((1, 1))
    Y, Zm = random_block_unit(F2C2, shape, rng)
    assert (Y * Zm).is_identity() and (Zm * Y).is_identity()
    assert is_block_upper(Y, shape) and is_block_upper(Zm, shape)


@pytest.mark.parametrize('base', [F2, Z, F2Z])
def test_unitriangular_sweep(base):
    report = unitriangular_sweep(base, 40, make_rng(1))
    assert report['ok'], report['failures']
    assert report['round_excess'] <= 0


@pytest.mark.parametrize('base, p', [(ZC2, 2), (ZC2, 3), (group_ring(Z, ZZ), 2)])
def test_hensel_sweep(base, p):
    report = hensel_sweep(base, p, [2, 3, 5], 10, make_rng(2))
    assert report['ok'], report['failures']
    assert report['lifts'] == 30


def test_hensel_sweep_needs_integer_coefficients():
    with pytest.raises(Mismatch):
        hensel_sweep(F2C2, 2, [2], 1)


_entries = st.integers(-4, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda d: st.lists(_entries, min_size=d * d, max_size=d * d).map(lambda v: (d, v))))
def test_unitriangular_inverse_property(data):
    d, values = data
    rows = [[1 if i == j else (values[i * d + j] if j > i else 0) for j in range(d)]
            for i in range(d)]
    A = matrix(Z, rows)
    P, rounds = unitriangular_inverse_rounds(A)
    assert A * P == identity(Z, d) == P * A
    assert 2 ** rounds <= max(d, 1) * 2


@settings(max_examples=40, deadline=None)
@given(st.lists(_entries, min_size=3, max_size=3), st.sampled_from([2, 3]),
       st.sampled_from([2, 3, 5]))
def test_hensel_lift_property(noise, p, m):
    U = matrix(Z, [[1, noise[0]], [0, 1]])
    Yt = U + diagonal(Z, [p, p]) * matrix(Z, [[noise[1], noise[2]], [0, noise[0]]])
    lifted = hensel_lift(unitriangular_inverse(U), Yt, p, m)
    assert (mat_reduce(lifted, p ** m) * mat_reduce(Yt, p ** m)).is_identity()
    assert is_block_upper(lifted, unit_shape(2))
