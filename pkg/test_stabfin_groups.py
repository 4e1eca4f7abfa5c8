#!/usr/bin/env python3
"""Tests for stabfin_groups."""

import pytest
from hypothesis import given, settings, strategies as st

from stabfin_errors import InfiniteGroup, InvalidTable, Mismatch, NonCentralElement, NotAHomomorphism
from stabfin_groups import (
    GroupHom, abelianization, central_quotient, centre, commutator_subgroup, cyclic, dihedral,
    direct_product, enumerate_group, free_abelian, generated_subgroup, hom_from_generator_images,
    identity_hom, is_normal, make_group, noncentral_witness, permutation, quotient_hom, symmetric,
    table, trivial_hom, window
)


def _group(spec):
    return make_group(spec)


@pytest.mark.parametrize('spec, order', [
    (cyclic(1), 1),
    (cyclic(5), 5),
    (symmetric(3), 6),
    (dihedral(8), 8),
    (direct_product(cyclic(2), cyclic(4)), 8),
    (direct_product(cyclic(2), symmetric(3)), 12),
    (central_quotient(cyclic(4), 2), 2),
])
def test_orders(spec, order):
    G = _group(spec)
    assert G.order() == order
    assert len(enumerate_group(G)) == order


def test_enumeration_starts_with_identity_and_is_stable():
    G = _group(symmetric(3))
    first = [e.payload for e in enumerate_group(G)]
    assert first[0] == G.identity_payload
    assert first == [e.payload for e in enumerate_group(G)]


def test_make_group_is_cached_per_spec():
    assert make_group(cyclic(6)) is make_group(cyclic(6))
    assert make_group(cyclic(6)) is not make_group(cyclic(3))


def test_infinite_groups_refuse_enumeration():
    with pytest.raises(InfiniteGroup):
        _group(cyclic(0)).payloads()
    with pytest.raises(InfiniteGroup):
        _group(free_abelian(2)).payloads()


def test_cyclic_arithmetic():
    Z, C5 = _group(cyclic(0)), _group(cyclic(5))
    assert Z.mul(3, -7) == -4
    assert C5.mul(3, 4) == 2
    assert C5.inv(2) == 3
    assert C5.element_order(0) == 1
    assert C5.element_order(1) == 5
    assert Z.element_order(1, cap=50) is None


def test_free_abelian_vectors():
    Z2 = _group(free_abelian(2))
    assert Z2.mul((1, 2), (-3, 1)) == (-2, 3)
    assert Z2.generators() == [(1, 0), (0, 1)]
    assert Z2.format((1, -1)) == '(1,-1)'
    with pytest.raises(Mismatch):
        Z2.normalize((1, 2, 3))


def test_permutation_composition_is_right_to_left():
    G = _group(symmetric(3))
    a, b = (2, 1, 3), (1, 3, 2)
    ab = G.mul(a, b)
    # (a*b)(i) = a(b(i))
    assert ab == tuple(a[b[i] - 1] for i in range(3))
    assert not G.is_abelian
    assert G.mul(ab, G.inv(ab)) == G.identity_payload


def test_permutation_rejects_non_permutations():
    with pytest.raises(ValueError):
        permutation([(1, 1, 2)])


def test_table_group_validation():
    klein = table([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
    G = _group(klein)
    assert G.order() == 4 and G.is_abelian
    assert G.format(2) == '#2'
    with pytest.raises(InvalidTable):
        make_group(table([[0, 1], [0, 1]]))
    with pytest.raises(InvalidTable):
        make_group(table([[0, 1, 2], [1, 0, 0], [2, 0, 1]]))


def test_centre_and_witness():
    D8 = _group(dihedral(8))
    Z = centre(D8)
    assert len(Z) == 2
    rotation = D8.generators()[0]
    assert noncentral_witness(D8, rotation) is not None
    assert all(noncentral_witness(D8, z.payload) is None for z in Z)


def test_central_quotient_rejects_noncentral_element():
    with pytest.raises(NonCentralElement):
        make_group(central_quotient(symmetric(3), (2, 1, 3)))


def test_central_quotient_of_d8_is_klein():
    D8 = _group(dihedral(8))
    z = next(x.payload for x in centre(D8) if x.payload != D8.identity_payload)
    Q = make_group(central_quotient(dihedral(8), z))
    assert Q.order() == 4
    assert Q.is_abelian
    proj = quotient_hom(Q)
    proj.verify()
    assert len(proj.kernel()) == 2


def test_commutator_and_abelianization():
    S3 = _group(symmetric(3))
    assert len(commutator_subgroup(S3)) == 3
    assert is_normal(S3, commutator_subgroup(S3))
    Q, ab = abelianization(S3)
    assert Q.order() == 2
    assert ab.is_surjective()
    C4 = _group(cyclic(4))
    Q4, ab4 = abelianization(C4)
    assert Q4 is C4 and len(ab4.kernel()) == 1


def test_generated_subgroup():
    C6 = _group(cyclic(6))
    assert generated_subgroup(C6, [2]) == frozenset({0, 2, 4})
    assert generated_subgroup(C6, [2, 3]) == frozenset(range(6))


def test_hom_from_generator_images():
    C4, C2 = _group(cyclic(4)), _group(cyclic(2))
    phi = hom_from_generator_images(C4, C2, [1])
    assert phi.is_surjective()
    assert sorted(phi.kernel()) == [0, 2]
    with pytest.raises(NotAHomomorphism):
        hom_from_generator_images(C2, C4, [1])


def test_hom_from_infinite_cyclic():
    Z, C3 = _group(cyclic(0)), _group(cyclic(3))
    phi = hom_from_generator_images(Z, C3, [1])
    assert phi.apply(-4) == 2
    assert phi.verify() is False


def test_broken_rule_raises_with_witness():
    C4 = _group(cyclic(4))
    with pytest.raises(NotAHomomorphism) as info:
        GroupHom(C4, C4, lambda a: (a + 1) % 4, name='shift')
    assert info.value.witness is not None


def test_compose_and_trivial():
    C4, C2 = _group(cyclic(4)), _group(cyclic(2))
    phi = hom_from_generator_images(C4, C2, [1])
    both = phi.compose(identity_hom(C4))
    assert all(both.apply(a) == phi.apply(a) for a in C4.payloads())
    assert len(trivial_hom(C4, C2).kernel()) == 4


def test_window():
    assert window(_group(cyclic(0)), 1) == [-1, 0, 1]
    assert len(window(_group(free_abelian(2)), 1)) == 9
    assert window(_group(cyclic(3)), 5) == [0, 1, 2]


def test_group_element_wrappers():
    C5 = _group(cyclic(5))
    g = C5.element(2)
    assert (g * g).payload == 4
    assert (~g).payload == 3
    assert (g ** 5).is_identity()
    with pytest.raises(Mismatch):
        g * _group(cyclic(3)).element(1)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([symmetric(3), dihedral(8), direct_product(cyclic(2), cyclic(3))]),
       st.data())
def test_group_axioms(spec, data):
    G = _group(spec)
    elems = G.payloads()
    a, b, c = (data.draw(st.sampled_from(elems)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == G.identity_payload
    assert G.mul(G.identity_payload, a) == a


@settings(max_examples=50, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20))
def test_hom_law_from_z_to_c6(a, b):
    phi = hom_from_generator_images(_group(cyclic(0)), _group(cyclic(6)), [5])
    assert phi.apply(a + b) == (phi.apply(a) + phi.apply(b)) % 6
