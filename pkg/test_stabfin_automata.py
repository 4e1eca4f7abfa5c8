#!/usr/bin/env python3
"""Tests for stabfin_automata."""

import pytest
from hypothesis import given, settings, strategies as st

from stabfin_config import make_rng
from stabfin_errors import (
    BudgetExceeded, InfiniteGroup, InvalidEndomorphism, Mismatch, NotLinearAlphabet, Unsupported
)
from stabfin_groups import cyclic, direct_product, make_group, symmetric
from stabfin_matrices import matrix
from stabfin_automata import (
    Alphabet, apply_ca, apply_ca_window, ca_from_matrix, ca_kernel_image, check_endomorphism,
    configuration, count_automata, decompose_ca, decomposition_sweep, involution, make_ca,
    matrix_from_ca, surjunctivity_report, translate
)
from stabfin_rings import group_ring, make_gf

F2 = Alphabet.field(2)
Z4 = Alphabet.from_moduli([4])
Z6 = Alphabet.from_moduli([6])
C2, C3 = make_group(cyclic(2)), make_group(cyclic(3))
ZZ = make_group(cyclic(0))


def test_alphabet_parts_and_names():
    assert Z6.moduli == [2, 3] and str(Z6) == 'F2+F3'
    assert Z6.primes == [2, 3] and Z6.order() == 6
    mixed = Alphabet.from_moduli([4, 2])
    assert mixed.moduli == [2, 4] and str(mixed) == 'F2+Z/4'
    assert not mixed.is_vector_space()
    assert str(Alphabet.field(3, 2)) == 'F3^2' and Alphabet.field(3, 2).is_vector_space()
    with pytest.raises(ValueError):
        Alphabet(((4, 1, 1),))


def test_endomorphism_entries_respect_orders():
    mixed = Alphabet.from_moduli([2, 4])
    assert check_endomorphism(mixed, [[1, 2], [1, 3]]) == ((1, 2), (1, 3))
    with pytest.raises(InvalidEndomorphism):
        check_endomorphism(mixed, [[1, 1], [0, 1]])
    with pytest.raises(Mismatch):
        check_endomorphism(mixed, [[1]])


def test_make_ca_scalar_rules_and_repeats():
    ca = make_ca(C3, Alphabet.field(2, 2), {0: [1], 1: [0]})
    assert ca.memory == ((0, ((1, 0), (0, 1))),)
    with pytest.raises(Mismatch):
        make_ca(C3, F2, [(0, [1]), (3, [1])])


def test_apply_ca_on_c3():
    ca = make_ca(C3, F2, {0: [1], 1: [1]})
    c = configuration(C3, [1, 0, 0])
    assert apply_ca(ca, c).values == ((1,), (0,), (1,))
    with pytest.raises(Mismatch):
        configuration(C3, [1, 0])


def test_apply_ca_needs_finite_group():
    ca = make_ca(ZZ, F2, {0: [1], 1: [1]})
    with pytest.raises(InfiniteGroup):
        apply_ca(ca, configuration(C3, [0, 0, 0]))
    out = apply_ca_window(ca, {0: [1]}, 2)
    assert out['values'] == {-1: (1,), 0: (1,)}
    assert out['bounded'] is True


def test_kernel_and_image_by_both_methods():
    ca = make_ca(C3, F2, {0: [1], 1: [1]})
    brute = ca_kernel_image(ca)
    assert brute['method'] == 'brute_force'
    assert brute['kernel_order'] == 2 and brute['image_order'] == 4
    smith = ca_kernel_image(ca, limit=0)
    assert smith['method'] == 'smith'
    assert (smith['kernel_order'], smith['image_order']) == (2, 4)


def test_smith_agrees_with_brute_force_over_z4():
    ca = make_ca(C2, Z4, {0: [2], 1: [1]})
    brute, smith = ca_kernel_image(ca), ca_kernel_image(ca, limit=0)
    assert brute['kernel_order'] == smith['kernel_order']
    assert brute['image_order'] == smith['image_order']


@pytest.mark.parametrize('group, alphabet, total', [
    (C2, F2, 4), (C3, F2, 8), (C2, Z4, 16),
    (make_group(direct_product(cyclic(2), cyclic(2))), F2, 16), (C2, Z6, 36),
])
def test_count_automata(group, alphabet, total):
    assert count_automata(group, alphabet) == total


@pytest.mark.parametrize('group, alphabet, automata, bijective', [
    (C2, F2, 4, 2), (C3, F2, 8, 3), (C2, Z4, 16, 8),
    (make_group(direct_product(cyclic(2), cyclic(2))), F2, 16, 8),
    (make_group(symmetric(3)), F2, 64, 12),
])
def test_surjunctivity_sweep(group, alphabet, automata, bijective):
    report = surjunctivity_report(group, alphabet)
    assert report['automata'] == automata
    assert report['bijective'] == bijective
    assert report['violations'] == []
    if alphabet.is_vector_space():
        assert report['unit_mismatches'] == 0
    else:
        assert report['unit_mismatches'] is None


def test_surjunctivity_sweep_limits():
    with pytest.raises(BudgetExceeded):
        surjunctivity_report(C3, F2, budget=4)
    with pytest.raises(Unsupported):
        surjunctivity_report(C2, F2, scope='everything')
    with pytest.raises(InfiniteGroup):
        surjunctivity_report(ZZ, F2)
    sampled = surjunctivity_report(C3, Z4, scope='sample', budget=20, rng=make_rng(5))
    assert sampled['automata'] == 20 and sampled['violations'] == []


def test_matrix_correspondence():
    R = group_ring(make_gf(2), C3)
    g = R.monomial(1)
    Y = matrix(R, [[R.one + g]])
    ca = ca_from_matrix(Y)
    assert ca.alphabet == F2
    assert matrix_from_ca(ca) == Y
    assert involution(matrix(R, [[g]])) == matrix(R, [[g * g]])
    with pytest.raises(NotLinearAlphabet):
        matrix_from_ca(make_ca(C2, Z4, {0: [1]}))


def test_decompose_ca_over_z6():
    ca = make_ca(C2, Z6, {0: [1], 1: [[1, 0], [0, 2]]})
    info = decompose_ca(ca)
    assert [c['prime'] for c in info['components']] == [2, 3]
    assert info['kernel_product_ok'] and info['injectivity_inherited']


def test_decompose_ca_torsion_parts():
    ca = make_ca(C2, Z4, {0: [2]})
    info = decompose_ca(ca)
    (comp,) = info['components']
    assert comp['kernel_order'] == 4
    assert comp['restriction']['kernel_order'] == 4
    assert comp['quotient']['kernel_order'] == 4
    assert info['kernel_product_ok']


def test_decomposition_sweep_over_z6():
    report = decomposition_sweep(C2, Z6)
    assert report['automata'] == 36
    assert report['ok'] and report['failures'] == []


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=3),
       st.lists(st.integers(0, 3), min_size=3, max_size=3),
       st.integers(0, 2))
def test_automata_commute_with_translation(rule, values, h):
    ca = make_ca(C3, Z4, {s: [k] for s, k in enumerate(rule)})
    c = configuration(C3, values)
    assert apply_ca(ca, translate(c, h)) == translate(apply_ca(ca, c), h)
