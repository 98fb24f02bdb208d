import numpy as np
import pytest
from oracles import random_complex

from usampling.abelian_group import coset_decompose, make_group
from usampling.convops import ConvMatrix, convolve, invert, translate
from usampling.errors import ContractError, DegenerateGeneratorsError, NotRecoverableError
from usampling.frames import frame_analysis, is_dual_pair, random_bounded_field
from usampling.hmodels import (
    GeneratorSet,
    RieszSequence,
    average_samplers,
    box,
    build_sampler,
    hat,
    make_periodized_shift_model,
    make_regular_model,
    pointwise_samplers,
    riesz_check,
    sample,
    synthesize,
)
from usampling.sampler import (
    consistency_residual,
    design,
    design_from,
    instability_witness,
    interpolation_check,
    reconstruct,
    reconstruct_general,
    regroup,
    stability_constants,
    subgroup_lift,
    take_samples,
    ungroup,
)
from usampling.spectral import norm2


def delta(K, k=0):
    v = np.zeros(K)
    v[k] = 1.0
    return v


def rel(a, b):
    return np.linalg.norm(np.ravel(a) - np.ravel(b)) / np.linalg.norm(np.ravel(b))


def shift_setup(s=8, q=4, starts=(0, 2)):
    model = make_periodized_shift_model(s, q)
    gens = GeneratorSet(model, hat(s * q, q))
    samp = average_samplers(model, np.stack([box(s * q, t, q) for t in starts]))
    return gens, samp


def random_recoverable(rng, G, M, N):
    while True:
        A = ConvMatrix(G, random_complex(rng, M, N, G.cardinality))
        if frame_analysis(A).delta > 1e-6:
            return A


def test_take_samples_examples(rng):
    G = make_group([4])
    x = random_complex(rng, 2, 4)
    assert np.array_equal(take_samples(ConvMatrix.identity(G, 2), x), convolve(ConvMatrix.identity(G, 2), x))
    assert np.allclose(take_samples(ConvMatrix.identity(G, 2), x), x)
    gens, samp = shift_setup()
    A = build_sampler(gens, samp)
    xs = random_complex(rng, 1, 8)
    assert np.allclose(take_samples(A, xs), sample(samp, synthesize(gens, xs)), atol=1e-12)
    assert np.all(take_samples(A, np.zeros((1, 8))) == 0)


def test_round_trip_shift_model(rng):
    gens, samp = shift_setup()
    kit = design_from(gens, samp)
    x = random_complex(rng, 1, 8)
    f = synthesize(gens, x)
    xr, fr = reconstruct(kit, sample(samp, f))
    assert rel(xr, x) <= 1e-9 and rel(fr, f) <= 1e-9
    assert kit.report.alpha == pytest.approx(5) and kit.report.beta == pytest.approx(32)


def test_square_design_is_inverse(rng):
    G = make_group([8])
    A = random_recoverable(rng, G, 2, 2)
    gens = GeneratorSet(make_regular_model(G, channels=2), np.eye(16)[[0, 8]])
    kit = design(A, gens)
    assert np.allclose(kit.B.entries, invert(A).entries, atol=1e-10)
    assert interpolation_check(kit) <= 1e-9


def test_averaging_dual():
    G = make_group([4])
    model = make_regular_model(G)
    gens = GeneratorSet(model, delta(4))
    kit = design_from(gens, average_samplers(model, np.stack([delta(4), delta(4)])))
    assert np.allclose(kit.B.transfer.matrices, [[0.5, 0.5]])
    assert np.allclose(kit.S, [delta(4) / 2, delta(4) / 2])
    assert kit.noise_amplification == pytest.approx(1 / kit.report.alpha)


def test_random_design_duality(rng):
    G = make_group([8])
    gens = GeneratorSet(make_regular_model(G, channels=2), np.eye(16)[[0, 8]])
    for M in (2, 3, 4):
        A = random_recoverable(rng, G, M, 2)
        assert design(A, gens).duality_deviation <= 1e-10
        C = random_bounded_field(G, 2, M, rng)
        kit = design(A, gens, C=C)
        assert kit.duality_deviation <= 1e-10 and is_dual_pair(A, kit.B)[0]


def test_zero_samples():
    gens, samp = shift_setup()
    x, f = reconstruct(design_from(gens, samp), np.zeros((2, 8)))
    assert np.all(x == 0) and np.all(f == 0)


def test_interpolation_examples(rng):
    G = make_group([4])
    model = make_regular_model(G)
    kit = design_from(GeneratorSet(model, delta(4)), average_samplers(model, delta(4)))
    assert interpolation_check(kit) == 0.0
    gens, samp = shift_setup()
    with pytest.raises(ContractError):
        interpolation_check(design_from(gens, samp))


def test_interpolation_samples_are_delta_pattern(rng):
    model = make_periodized_shift_model(8, 3)
    gens = GeneratorSet(model, random_complex(rng, 2, 24))
    samp = average_samplers(model, random_complex(rng, 2, 24))
    kit = design_from(gens, samp)
    assert interpolation_check(kit) <= 1e-9
    # f = U(g0) S_1 samples to the delta at (channel 0, g0)
    s = sample(samp, model.apply(3, kit.S[0]))
    ref = np.zeros((2, 8))
    ref[0, 3] = 1
    assert np.max(np.abs(s - ref)) <= 1e-9


def test_refuses_undersampled(rng):
    G = make_group([8])
    gens = GeneratorSet(make_regular_model(G, channels=2), np.eye(16)[[0, 8]])
    with pytest.raises(NotRecoverableError) as exc:
        design(ConvMatrix(G, random_complex(rng, 1, 2, 8)), gens)
    assert exc.value.delta == 0.0


def test_refuses_degenerate_generators():
    G = make_group([4])
    model = make_regular_model(G)
    gens = GeneratorSet(model, np.ones(4))
    with pytest.raises(DegenerateGeneratorsError):
        design(ConvMatrix.identity(G, 1), gens)


def test_ill_conditioned_flag():
    G = make_group([2])
    eps = 3.5e-6  # delta_A = eps**2 sits between the threshold and ten times it
    A = ConvMatrix(G, [[[1, 1 - eps]]])  # A_hat(1) = eps
    kit = design(A, GeneratorSet(make_regular_model(G), delta(2)))
    assert kit.ill_conditioned
    assert kit.noise_amplification == pytest.approx(1 / kit.report.alpha, rel=1e-6)
    assert not design(ConvMatrix.identity(G, 1), GeneratorSet(make_regular_model(G), delta(2))).ill_conditioned


def test_consistency_residual(rng):
    gens, samp = shift_setup()
    kit = design_from(gens, samp)
    s = sample(samp, synthesize(gens, random_complex(rng, 1, 8)))
    assert consistency_residual(kit, s) <= 1e-12
    s[1] = 0
    assert consistency_residual(kit, s) > 1e-3


def test_translation_covariance(rng):
    gens, samp = shift_setup()
    kit = design_from(gens, samp)
    G = kit.group
    s = sample(samp, synthesize(gens, random_complex(rng, 1, 8)))
    _, f = reconstruct(kit, s)
    for h in range(8):
        _, fh = reconstruct(kit, translate(s, h, G))
        assert np.max(np.abs(fh - gens.model.apply(h, f))) <= 1e-10


def test_instability_witness(rng):
    G = make_group([8])
    for N, M in [(1, 1), (2, 2), (2, 3)]:
        A = ConvMatrix(G, random_complex(rng, M, N, 8))
        x, ratio = instability_witness(A)
        d = frame_analysis(A).delta
        assert norm2(convolve(A, x)) / norm2(x) == pytest.approx(ratio)
        assert ratio <= d ** (1 / N) + 1e-8
    A = ConvMatrix(make_group([2]), [[[1, 1]]])
    _, ratio = instability_witness(A)
    assert ratio <= 1e-24


def test_stability_sandwich_scaled(rng):
    gens, samp = shift_setup()
    A = build_sampler(gens, samp)
    lo, hi = stability_constants(frame_analysis(A), riesz_check(gens))
    for _ in range(100):
        f = synthesize(gens, random_complex(rng, 1, 8))
        e, n = norm2(sample(samp, f)), norm2(f)
        assert lo * n * (1 - 1e-9) <= e <= hi * n * (1 + 1e-9)


def test_regroup_bijective(rng):
    D = coset_decompose(make_group([12]), 3)
    x = random_complex(rng, 2, 12)
    y = regroup(x, D)
    assert y.shape == (6, 4)
    assert np.array_equal(y[1], x[0, [1, 4, 7, 10]])
    assert np.array_equal(ungroup(y, D), x)
    assert np.array_equal(np.sort(y.ravel()), np.sort(x.ravel()))


def test_subgroup_trivial_reduces(rng):
    model = make_periodized_shift_model(12, 1)
    gens = GeneratorSet(model, random_complex(rng, 1, 12))
    samp = average_samplers(model, random_complex(rng, 2, 12))
    A_H, _, _ = subgroup_lift(gens, samp, coset_decompose(model.group, 1))
    assert np.allclose(A_H.entries, build_sampler(gens, samp).entries)


def test_subgroup_round_trip(rng):
    model = make_periodized_shift_model(12, 1)
    gens = GeneratorSet(model, random_complex(rng, 1, 12))
    samp = average_samplers(model, random_complex(rng, 4, 12))
    D = coset_decompose(model.group, 3)
    A_H, gens_h, samp_h = subgroup_lift(gens, samp, D)
    assert A_H.shape[:2] == (4, 3) and A_H.group.orders == (4,)
    x = random_complex(rng, 1, 12)
    f = synthesize(gens, x)
    s = sample(samp_h, f)  # samples on H only
    # direct formula a_{m,nl}(h) = <phi, U(h - g_l) psi_m>
    for m in range(4):
        for l, rep in enumerate(D.representatives):
            for k, h in enumerate(D.subgroup.elements):
                g = model.group.sub(D.embed(h), rep)
                ref = np.sum(gens.vectors[0] * np.conj(model.apply(g, samp.vectors[m])))
                assert A_H.entries[m, l, k] == pytest.approx(ref)
    kit = design(A_H, gens_h, samplers=samp_h)
    xr, fr = reconstruct(kit, s)
    assert rel(ungroup(xr, D), x) <= 1e-9 and rel(fr, f) <= 1e-9


def test_subgroup_refuses_too_few_channels(rng):
    model = make_periodized_shift_model(12, 1)
    gens = GeneratorSet(model, random_complex(rng, 1, 12))
    samp = average_samplers(model, random_complex(rng, 2, 12))
    A_H, gens_h, _ = subgroup_lift(gens, samp, coset_decompose(model.group, 3))
    with pytest.raises(NotRecoverableError) as exc:
        design(A_H, gens_h)
    assert exc.value.delta == 0.0


def test_subgroup_pointwise(rng):
    model = make_periodized_shift_model(8, 2)
    gens = GeneratorSet(model, hat(16, 2))
    samp = pointwise_samplers(model, [0, 1, 2, 3])
    D = coset_decompose(model.group, 2)
    A_H, gens_h, samp_h = subgroup_lift(gens, samp, D)
    x = random_complex(rng, 1, 8)
    f = synthesize(gens, x)
    s = sample(samp_h, f)
    assert np.array_equal(s[0], f[0::4])
    xr, fr = reconstruct(design(A_H, gens_h, samplers=samp_h), s)
    assert rel(fr, f) <= 1e-9


def test_reconstruct_general(rng):
    G = make_group([6])
    # a Riesz sequence with no translation structure
    table = random_complex(rng, 1, 6, 10)
    F = RieszSequence(G, table)
    A = random_recoverable(rng, G, 2, 1)
    x = random_complex(rng, 1, 6)
    s = convolve(A, x)
    xr, f, S = reconstruct_general(F, A, s)
    assert rel(xr, x) <= 1e-9
    assert rel(f, synthesize(F, x)) <= 1e-9
    assert S.shape == (2, 6, 10)
