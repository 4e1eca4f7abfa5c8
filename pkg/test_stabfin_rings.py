#!/usr/bin/env python3
"""Tests for stabfin_rings."""

import pytest
from hypothesis import given, settings, strategies as st

from stabfin_errors import Mismatch, NotAUnit, NotPrime, RingMismatch, Unsupported
from stabfin_groups import cyclic, direct_product, free_abelian, hom_from_generator_images, make_group
from stabfin_rings import (
    augmentation, change_ring, coeff_lift, coeff_reduce, field_embedding, gr_arith, group_ring,
    integers, is_irreducible_over, make_gf, poly_divmod, poly_egcd, poly_format, poly_gcd,
    poly_mul, poly_roots, pushforward, rat_fun, ring_arith, simple_extension, z_mod
)

F2 = make_gf(2)
F4 = make_gf(2, 2)
F9 = make_gf(3, 2)


def test_prime_field_arithmetic():
    F5 = make_gf(5)
    a, b = F5.element(3), F5.element(4)
    assert (a + b) == 2
    assert (a * b) == 2
    assert a.inverse() * a == 1
    assert (a / b) * b == a
    assert F5.element(-1) == 4


def test_make_gf_rejects_non_primes():
    with pytest.raises(NotPrime):
        make_gf(4)


def test_f4_modulus_and_generator():
    assert F4.format_modulus() == 'x^2 + x + 1'
    x = F4.scalar(F4.generator_payload)
    assert x * x == x + 1
    assert x ** 3 == 1
    assert str(F4) == 'F4'


def test_f9_modulus():
    assert F9.modulus_coeffs() == [1, 0, 1]
    x = F9.scalar(F9.generator_payload)
    assert x * x == -1


def test_zero_has_no_inverse():
    with pytest.raises(NotAUnit):
        F4.zero.inverse()
    with pytest.raises(NotAUnit):
        z_mod(6).element(2).inverse()
    with pytest.raises(NotAUnit):
        integers().element(2).inverse()


def test_mixed_rings_do_not_add():
    with pytest.raises(RingMismatch):
        F2.one + make_gf(3).one


def test_group_ring_scaling_checks_the_coefficient_ring():
    R = group_ring(F2, make_group(cyclic(2)))
    g = R.monomial(1)
    assert g * F2.one == g
    assert g * 3 == g
    with pytest.raises(RingMismatch):
        g.scale(make_gf(3).one)


def test_ring_arith_by_name():
    a, b = z_mod(7).element(3), z_mod(7).element(5)
    assert ring_arith('add', a, b) == 1
    assert ring_arith('mul', a, b) == 1
    assert ring_arith('inv', a) == 5
    with pytest.raises(ValueError):
        ring_arith('pow', a, b)


def test_polynomial_division_and_gcd():
    F3 = make_gf(3)
    a = poly_mul(F3, (1, 1), (2, 1))
    q, r = poly_divmod(F3, a, (1, 1))
    assert q == (2, 1) and r == ()
    assert poly_gcd(F3, a, (1, 1)) == (1, 1)
    g, s, t = poly_egcd(F3, (1, 0, 1), (1, 1))
    assert g == (1,)


def test_poly_roots_are_sorted_payloads():
    assert poly_roots(F4, (1, 1, 1)) == [2, 3]
    assert poly_roots(F2, (1, 1, 1)) == []


def test_poly_format():
    assert poly_format(F2, (1, 0, 1), 't') == 't^2 + 1'
    assert poly_format(F2, (), 't') == '0'


def test_rational_functions_reduce():
    K = rat_fun(F2)
    t = K.scalar(K.variable())
    f = (t * t + t) / (t + 1)
    assert f == t
    assert K.format((t / (t + 1)).payload) == '(t)/(t + 1)'
    assert K.evaluate((t + 1).inverse().payload, 1) is None
    assert K.evaluate((t * t).payload, 1) == 1


def test_simple_extension_matches_gf():
    E = simple_extension(F2, (1, 1, 1), 'x')
    x = E.scalar(E.generator_payload)
    assert E.order() == 4
    assert x * x == x + 1
    assert x.inverse() == x + 1
    with pytest.raises(ValueError):
        simple_extension(F2, (1, 0, 1), 'x')


def test_irreducibility_over_finite_and_tower_fields():
    assert is_irreducible_over(F2, (1, 1, 1))
    assert not is_irreducible_over(F2, (1, 0, 1))
    E = simple_extension(F2, (1, 1, 1), 'x')
    assert not is_irreducible_over(E, (E.one_payload, E.one_payload, E.one_payload))
    K = rat_fun(F2)
    assert is_irreducible_over(K, (K.one_payload, K.one_payload, K.one_payload))
    with pytest.raises(Unsupported):
        is_irreducible_over(K, (K.variable(), K.zero_payload, K.one_payload))


def test_field_embedding_f4_into_f16():
    F16 = make_gf(2, 4)
    table = field_embedding(F4, F16)
    assert table[0] == 0 and table[1] == 1
    for a in F4.payloads():
        for b in F4.payloads():
            assert table[F4.mul(a, b)] == F16.mul(table[a], table[b])
            assert table[F4.add(a, b)] == F16.add(table[a], table[b])
    with pytest.raises(Mismatch):
        field_embedding(F4, make_gf(2, 3))


def test_group_ring_multiplication_over_c3():
    R = group_ring(F2, make_group(cyclic(3)))
    g = R.monomial(1)
    one = R.one
    assert (one + g) * (one + g) == one + g * g
    assert g * g * g == one
    assert repr(one + g * g) == '1 + g^2'
    assert augmentation(one + g + g * g) == F2.one


def test_group_ring_over_z_laurent():
    R = group_ring(integers(), make_group(cyclic(0)))
    x, xi = R.monomial(1), R.monomial(-1)
    assert x * xi == R.one
    assert (R.one + x) * (R.one - x) == R.one - x * x
    assert gr_arith('sub', x, x) == R.zero


def test_group_ring_mismatch():
    R = group_ring(F2, make_group(cyclic(3)))
    S = group_ring(F2, make_group(cyclic(2)))
    with pytest.raises(Mismatch):
        R.one + S.one


def test_pushforward_is_multiplicative():
    C4, C2 = make_group(cyclic(4)), make_group(cyclic(2))
    phi = hom_from_generator_images(C4, C2, [1])
    R = group_ring(z_mod(4), C4)
    a = R.from_dict({0: 1, 1: 3, 2: 2})
    b = R.from_dict({1: 1, 3: 1})
    assert pushforward(phi, a * b) == pushforward(phi, a) * pushforward(phi, b)
    assert augmentation(pushforward(phi, a)) == augmentation(a)


def test_coefficient_reduction_and_lift():
    G = make_group(direct_product(cyclic(2), cyclic(2)))
    R = group_ring(integers(), G)
    f = R.from_dict({(0, 0): 7, (1, 0): -3})
    reduced = coeff_reduce(f, 4)
    assert reduced.terms == (((0, 0), 3), ((1, 0), 1))
    assert coeff_lift(reduced) == R.from_dict({(0, 0): 3, (1, 0): 1})
    assert change_ring(f, F2) == group_ring(F2, G).from_dict({(0, 0): 1, (1, 0): 1})
    Z8, Z4 = group_ring(z_mod(8), G), group_ring(z_mod(4), G)
    assert coeff_reduce(Z8.from_dict({(0, 0): 7}), 4) == Z4.from_dict({(0, 0): 3})
    assert coeff_reduce(group_ring(F2, G).one, 2).ring is z_mod(2)
    with pytest.raises(Mismatch):
        coeff_reduce(group_ring(z_mod(6), G).from_dict({(0, 0): 5}), 4)
    with pytest.raises(Mismatch):
        coeff_reduce(group_ring(F4, G).from_dict({(0, 0): 3}), 2)


def _gf_payloads(F):
    return st.integers(0, F.q - 1)


@settings(max_examples=100, deadline=None)
@given(_gf_payloads(F9), _gf_payloads(F9), _gf_payloads(F9))
def test_field_axioms_f9(a, b, c):
    x, y, z = F9.scalar(a), F9.scalar(b), F9.scalar(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == F9.one


_Z2 = make_group(free_abelian(2))
_ZZ2 = group_ring(integers(), _Z2)
_points = st.tuples(st.integers(-2, 2), st.integers(-2, 2))
_elements = st.dictionaries(_points, st.integers(-3, 3), max_size=4).map(_ZZ2.from_dict)


@settings(max_examples=60, deadline=None)
@given(_elements, _elements, _elements)
def test_group_ring_axioms_over_z2(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == _ZZ2.zero


@settings(max_examples=60, deadline=None)
@given(_elements, _elements, st.sampled_from([2, 3, 4]))
def test_reduction_is_a_ring_map(a, b, m):
    assert coeff_reduce(a * b, m) == coeff_reduce(a, m) * coeff_reduce(b, m)
    assert coeff_reduce(a + b, m) == coeff_reduce(a, m) + coeff_reduce(b, m)
