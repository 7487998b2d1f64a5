import numpy as np
import pytest

from conftest import dense_cq, random_cq_state

from extraction_lab.cq_states import (
    CqState,
    MarkovScenario,
    apply_classical_function,
    build_cq,
    classical_state,
    distance_to_uniform,
    extractor_output_from_joint,
    extractor_output_state,
    full_alphabet,
    markov_block_state,
    marginal_side,
    product,
    to_dense,
    validate_cq,
)
from extraction_lab.extractors import deor_extractor, ip_extractor
from extraction_lab.gf2 import build_field_family
from extraction_lab.operators import (
    conditional_mutual_information,
    partial_trace,
    trace_distance,
)

KET0 = np.array([[1, 0], [0, 0]], dtype=complex)
KETPLUS = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


def bb84_state():
    return build_cq({(0,): 0.5, (1,): 0.5}, {(0,): KET0, (1,): KETPLUS})


def test_build_cq_validation():
    with pytest.raises(ValueError, match="sums to"):
        build_cq({(0,): 0.6, (1,): 0.6}, {(0,): KET0, (1,): KET0})
    with pytest.raises(ValueError, match="not normalized"):
        build_cq({(0,): 1.0}, {(0,): 2 * KET0})
    bad = np.array([[1.0, 2.0], [2.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError, match="not PSD"):
        validate_cq(CqState(side_dim=2, blocks={(0,): bad}))


def test_point_mass_and_uniform():
    point = classical_state({(1, 0): 1.0})
    assert point.symbols() == [(1, 0)]
    uni = classical_state({b: 0.25 for b in full_alphabet(2)})
    assert abs(uni.total_trace() - 1.0) < 1e-12
    assert uni.probabilities()[(0, 1)] == 0.25


def test_marginal_side():
    st = bb84_state()
    assert np.allclose(marginal_side(st), 0.5 * (KET0 + KETPLUS))
    assert np.allclose(marginal_side(classical_state({(0,): 1.0})), [[1.0]])


def test_apply_classical_function():
    uni = classical_state({b: 0.25 for b in full_alphabet(2)})
    same = apply_classical_function(uni, lambda s: s)
    assert same.probabilities() == uni.probabilities()
    const = apply_classical_function(uni, lambda s: (0,))
    assert const.probabilities() == {(0,): 1.0}
    parity = apply_classical_function(uni, lambda s: (sum(s) & 1,))
    assert parity.probabilities() == {(0,): 0.5, (1,): 0.5}


def test_apply_function_commutes_with_marginal(rng):
    st = random_cq_state(2, 3, rng)
    mapped = apply_classical_function(st, lambda s: (s[0],))
    assert np.allclose(marginal_side(mapped), marginal_side(st))


def test_product_probabilities(rng):
    s1 = random_cq_state(2, 2, rng)
    s2 = random_cq_state(1, 3, rng)
    joint = product(s1, s2)
    assert joint.side_dim == 6
    p1, p2 = s1.probabilities(), s2.probabilities()
    for (a, b), p in joint.probabilities().items():
        assert abs(p - p1[a] * p2[b]) < 1e-12


def test_product_marginalization_recovers_factor(rng):
    s1 = random_cq_state(1, 2, rng)
    s2 = random_cq_state(1, 2, rng)
    joint = product(s1, s2)
    first = apply_classical_function(joint, lambda s: s[0])
    for sym in first.symbols():
        reduced = partial_trace(first.blocks[sym], (2, 2), keep=(0,))
        assert np.allclose(reduced, s1.blocks[sym], atol=1e-12)


def test_markov_single_block_is_product(rng):
    s1 = random_cq_state(1, 2, rng)
    s2 = random_cq_state(2, 2, rng)
    scn = MarkovScenario(weights=(1.0,), factors=((s1, s2),))
    assert_same = markov_block_state(scn)
    ref = product(s1, s2)
    assert assert_same.side_dim == ref.side_dim
    for sym in ref.symbols():
        assert np.allclose(assert_same.blocks[sym], ref.blocks[sym])


def test_markov_block_state_has_zero_cmi(rng):
    for _ in range(5):
        scn = MarkovScenario(
            weights=(0.3, 0.7),
            factors=((random_cq_state(1, 2, rng), random_cq_state(1, 2, rng)),
                     (random_cq_state(1, 2, rng), random_cq_state(1, 2, rng))),
        )
        joint = markov_block_state(scn)
        symbols = [(a, b) for a in full_alphabet(1) for b in full_alphabet(1)]
        dense = to_dense(joint, symbols)
        cmi = conditional_mutual_information(dense, (2, 2, joint.side_dim))
        assert abs(cmi) <= 1e-9


def test_markov_weight_validation(rng):
    s = random_cq_state(1, 1, rng)
    with pytest.raises(ValueError):
        MarkovScenario(weights=(0.5, 0.2), factors=((s, s), (s, s)))
    with pytest.raises(ValueError):
        MarkovScenario(weights=(), factors=())


def test_extractor_output_point_mass():
    fam = build_field_family(3, 2)
    ext = deor_extractor(fam)
    x1, x2 = (1, 0, 0), (0, 1, 0)
    s1, s2 = classical_state({x1: 1.0}), classical_state({x2: 1.0})
    out = extractor_output_state(ext, s1, s2, "x1")
    assert out.symbols() == [(ext(x1, x2), x1)]
    weak = extractor_output_state(ext, s1, s2, None)
    assert weak.symbols() == [ext(x1, x2)]


def test_extractor_output_anchor_value():
    # Uniform 4-bit sources, trivial side info, single-bit field family:
    # only x1 = 0000 contributes, delta = (1/16) * (1/2) = 1/32.
    fam = build_field_family(4, 1)
    ext = deor_extractor(fam)
    uni = classical_state({b: 1 / 16 for b in full_alphabet(4)})
    out = extractor_output_state(ext, uni, uni, "x1")
    delta = distance_to_uniform(out, 2, strong=True)
    assert abs(delta - 1 / 32) < 1e-12


def test_weak_output_matches_brute_force(rng):
    fam = build_field_family(3, 2)
    ext = deor_extractor(fam)
    s1 = random_cq_state(3, 1, rng)
    s2 = random_cq_state(3, 1, rng)
    out = extractor_output_state(ext, s1, s2, None)
    brute = {}
    p1, p2 = s1.probabilities(), s2.probabilities()
    for a, pa in p1.items():
        for b, pb in p2.items():
            z = ext(a, b)
            brute[z] = brute.get(z, 0.0) + pa * pb
    got = out.probabilities()
    assert set(got) == set(brute)
    for z, p in brute.items():
        assert abs(got[z] - p) < 1e-12


def test_output_from_joint_matches_pair_version(rng):
    fam = build_field_family(3, 1)
    ext = deor_extractor(fam)
    s1 = random_cq_state(3, 2, rng)
    s2 = random_cq_state(3, 1, rng)
    direct = extractor_output_state(ext, s1, s2, "x1")
    via_joint = extractor_output_from_joint(ext, product(s1, s2), "x1")
    assert set(direct.blocks) == set(via_joint.blocks)
    for key in direct.blocks:
        assert np.allclose(direct.blocks[key], via_joint.blocks[key], atol=1e-12)


def test_distance_trivial_cases():
    uni = classical_state({b: 0.25 for b in full_alphabet(2)})
    out = apply_classical_function(uni, lambda s: (s[0],))
    assert distance_to_uniform(out, 2) < 1e-12
    det = classical_state({(0,): 1.0})
    assert abs(distance_to_uniform(det, 2) - 0.5) < 1e-12
    # Missing output symbols count with their uniform target weight.
    half = classical_state({(0, 0): 1.0})
    assert abs(distance_to_uniform(half, 4) - 0.75) < 1e-12


def test_blockwise_distance_equals_dense(rng):
    fam = build_field_family(3, 2)
    ext = deor_extractor(fam)
    for strong in (False, True):
        s1 = random_cq_state(3, 2, rng)
        s2 = random_cq_state(3, 2, rng)
        out = extractor_output_state(ext, s1, s2, "x1" if strong else None)
        blockwise = distance_to_uniform(out, 4, strong=strong)
        # Dense oracle: materialize the state and the uniform target over
        # the union alphabet and take the plain trace distance.
        if strong:
            rests = sorted({k[1] for k in out.blocks})
            keys = [(z, x) for z in full_alphabet(2) for x in rests]
            target = {}
            for x in rests:
                tot = sum(out.blocks.get((z, x), 0) for z in full_alphabet(2))
                for z in full_alphabet(2):
                    target[(z, x)] = tot / 4
        else:
            keys = full_alphabet(2)
            tot = sum(out.blocks.values())
            target = {z: tot / 4 for z in keys}
        dense_state = dense_cq(out, keys)
        dense_target = dense_cq(CqState(side_dim=out.side_dim, blocks=target), keys)
        oracle = trace_distance(dense_state, dense_target, check_trace=False)
        assert abs(blockwise - oracle) < 1e-9


def test_strong_distance_equals_expectation_form(rng):
    fam = build_field_family(3, 1)
    ext = deor_extractor(fam)
    s1 = random_cq_state(3, 1, rng)
    s2 = random_cq_state(3, 2, rng)
    out = extractor_output_state(ext, s1, s2, "x1")
    blockwise = distance_to_uniform(out, 2, strong=True)
    # E_{x1}[ delta(rho_{Ext(x1, X2) C2}, omega (x) rho_{C2}) ]
    rho_c2 = marginal_side(s2)
    expectation = 0.0
    for x1, p in s1.probabilities().items():
        per_z = {}
        for x2 in s2.symbols():
            z = ext(x1, x2)
            per_z[z] = per_z.get(z, 0) + s2.blocks[x2]
        cond = CqState(side_dim=2, blocks=per_z)
        expectation += p * distance_to_uniform(cond, 2)
    assert abs(blockwise - expectation) < 1e-9


def test_extractor_output_rejects_bad_alphabet(rng):
    ext = ip_extractor(3)
    s1 = random_cq_state(2, 1, rng)
    s2 = random_cq_state(3, 1, rng)
    with pytest.raises(ValueError):
        extractor_output_state(ext, s1, s2, None)
    with pytest.raises(ValueError):
        extractor_output_state(ext, s2, s2, "x3")
