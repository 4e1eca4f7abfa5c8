#!/usr/bin/env python3
"""Tests for stabfin_localembed."""

import pytest
from hypothesis import given, settings, strategies as st

from stabfin_errors import Mismatch, Unsupported, UsageError
from stabfin_groups import cyclic, make_group
from stabfin_localembed import (
    FieldTowerStep, LocalEmbeddingWitness, Verified, Violation, algebraic_step, build_tower,
    compose_witnesses, embed_gf_into_matrices, inclusion_witness, local_embed_algebraic,
    local_embed_eval, local_embed_field, local_embed_pipeline, sum_closure,
    transcendental_step, transport_product_check, verify_local_embedding, witness_record
)
from stabfin_rings import group_ring, make_gf, rat_fun

F2, F3 = make_gf(2), make_gf(3)
F4, F8, F9, F16 = make_gf(2, 2), make_gf(2, 3), make_gf(3, 2), make_gf(2, 4)
K = rat_fun(F2)
t = K.scalar(K.variable())


@pytest.mark.parametrize('F, generator', [
    (F4, '[[0, 1], [1, 1]]'),
    (F9, '[[0, 1], [2, 0]]'),
])
def test_regular_representation(F, generator):
    report = embed_gf_into_matrices(F).report()
    assert report['generator_matrix'] == generator
    assert report['exhaustive'] and report['modulus_vanishes']
    assert report['pairs_checked'] == F.q ** 2


def test_regular_representation_of_f8():
    emb = embed_gf_into_matrices(F8)
    assert emb.d == 3
    w = emb.restrict(F8.payloads())
    assert len(w.checked_products) == 64
    assert str(w.target) == 'M_3(F2)'


def test_matrix_embedding_needs_a_gf_field():
    with pytest.raises(Unsupported):
        embed_gf_into_matrices(K)


def test_verifier_reports_each_condition():
    bad_one = LocalEmbeddingWitness(F2, F2, ((0, F2.scalar(0)), (1, F2.scalar(0))))
    assert verify_local_embedding(bad_one).condition == 'identity'
    not_injective = LocalEmbeddingWitness(F4, F4, ((2, F4.scalar(2)), (3, F4.scalar(2))))
    assert verify_local_embedding(not_injective).condition == 'injective'
    bad_sum = LocalEmbeddingWitness(F3, F3, ((1, F3.scalar(1)), (2, F3.scalar(0))))
    result = verify_local_embedding(bad_sum)
    assert isinstance(result, Violation) and result.condition == 'sum'


def test_frobenius_is_a_local_embedding():
    frobenius = LocalEmbeddingWitness(
        F4, F4, tuple((a, F4.scalar(F4.mul(a, a))) for a in F4.payloads()))
    result = verify_local_embedding(frobenius)
    assert isinstance(result, Verified)
    assert len(result.sums) == 16 and len(result.products) == 16


def test_inclusion_into_larger_field():
    w = inclusion_witness(F4, F4.payloads(), F16)
    assert w.target is F16
    assert w.apply(1) == F16.one
    assert witness_record(w)['domain_size'] == 4


def test_eval_constants_use_zero():
    w = local_embed_eval(K, [K.zero_payload, K.one_payload])
    assert w.info['alpha_payload'] == 0
    assert w.info['extended'] is False


def test_eval_without_numerator_roots_stays_in_f2():
    w = local_embed_eval(K, [t.payload, (t + 1).payload], avoid_numerator_roots=False)
    assert w.info['alpha_payload'] == 0
    assert w.target is F2


def test_eval_avoiding_numerator_roots_extends_to_f4():
    w = local_embed_eval(K, [t.payload, (t + 1).payload])
    assert w.target is F4
    assert w.info['alpha_payload'] == 2
    assert w.apply(t.payload).payload == 2
    assert w.apply((t + 1).payload).payload == 3


def test_eval_avoids_denominator_roots():
    w = local_embed_eval(K, [t.inverse().payload, (t + 1).inverse().payload])
    assert w.target is F4 and w.info['alpha_payload'] == 2


def test_eval_needs_rational_functions_over_gf():
    with pytest.raises(Unsupported):
        local_embed_eval(F4, F4.payloads())


def test_algebraic_step_over_f2():
    tower = build_tower(2, [algebraic_step((1, 1, 1), 'x')])
    w = local_embed_algebraic(tower.top, tower.top.payloads())
    assert w.target is F4
    assert w.info['stage'] == 'algebraic'
    with pytest.raises(Unsupported):
        local_embed_algebraic(K, [])


def test_field_strategy_dispatch():
    assert local_embed_field(F4, [0, 1]).info['stage'] == 'inclusion'
    assert local_embed_field(K, [t.payload]).info['stage'] == 'evaluation'
    with pytest.raises(Unsupported):
        local_embed_field(object(), [])


def test_pipeline_for_f4_tower():
    tower = build_tower(2, [algebraic_step((1, 1, 1), 'x')])
    w = local_embed_pipeline(tower, tower.top.payloads())
    assert w.info['field'] == 'F4' and w.info['d'] == 2
    assert w.info['composition_agrees']
    assert isinstance(verify_local_embedding(w), Verified)


def test_pipeline_for_mixed_tower():
    tower = build_tower(2, [algebraic_step((1, 1, 1), 'x'), transcendental_step('t')])
    top = tower.top
    E = tower.rings[1]
    tt = top.scalar(top.variable())
    x = top.scalar(top.constant(E.generator_payload))
    w = local_embed_pipeline(tower, [tt.payload, tt.inverse().payload, (x * tt).payload])
    assert w.info['field'] == 'F4'
    assert w.target.d == 2
    assert len(w.mapping) == 3


def test_build_tower_rejects_unknown_steps():
    with pytest.raises(ValueError):
        build_tower(2, [FieldTowerStep('weird', 'z')])
    with pytest.raises(ValueError):
        build_tower(2, [algebraic_step((1, 0, 1), 'x')])
    with pytest.raises(UsageError) as info:
        build_tower(2, [transcendental_step('t'),
                        algebraic_step((K.variable(), K.zero_payload, K.one_payload), 'x')])
    assert info.value.parameter == 'tower'


def test_compose_needs_cover():
    first = inclusion_witness(F4, [0, 1, 2])
    second = inclusion_witness(F4, [0, 1])
    with pytest.raises(Mismatch):
        compose_witnesses(first, second)


def test_sum_closure():
    assert sum_closure(F2, {1}, 3) == {0, 1}
    assert sum_closure(F9, {1}, 2) == {0, 1, 2}


def test_transport_of_group_ring_products():
    tower = build_tower(2, [algebraic_step((1, 1, 1), 'x')])
    E = tower.top
    R = group_ring(E, make_group(cyclic(2)))
    a = R.from_dict({0: E.generator_payload, 1: E.one_payload})
    b = R.from_dict({1: E.generator_payload})
    report = transport_product_check(tower, a, b)
    assert report['transported_product_ok']
    assert report['d'] == 2
    g = R.monomial(1)
    unit = transport_product_check(tower, g, g)
    assert unit['one_sided_unit_transported']
    with pytest.raises(Mismatch):
        transport_product_check(tower, group_ring(F4, make_group(cyclic(2))).one, b)


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(0, 15), min_size=1, max_size=6))
def test_restricted_regular_representation_verifies(domain):
    w = embed_gf_into_matrices(F16).restrict(domain)
    assert isinstance(verify_local_embedding(w), Verified)
    assert len(w.mapping) == len(domain)
