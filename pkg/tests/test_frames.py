import numpy as np
import pytest
from oracles import random_complex

from usampling.abelian_group import make_group
from usampling.convops import ConvMatrix, adjoint, convolve, operator_norm, translate
from usampling.errors import NotRecoverableError
from usampling.frames import (
    FrameReport,
    bessel_bound,
    extremal_bundle,
    frame_analysis,
    is_dual_pair,
    left_inverse,
    random_bounded_field,
)
from usampling.spectral import TransferField, inner, norm2


def rand_system(rng, G, M, N):
    return ConvMatrix(G, random_complex(rng, M, N, G.cardinality))


def test_bessel_bound_examples(rng):
    G = make_group([8])
    assert bessel_bound(ConvMatrix.identity(G, 2)) == pytest.approx(1)
    e = np.zeros((1, 1, 8))
    e[0, 0, 0] = 3
    assert bessel_bound(ConvMatrix(G, e)) == pytest.approx(9)


def test_bessel_bound_rayleigh(rng):
    G = make_group([8])
    B = rand_system(rng, G, 2, 3)
    beta = bessel_bound(B)
    ratios = []
    for _ in range(1000):
        x = random_complex(rng, 3, 8)
        ratios.append(norm2(convolve(B, x)) / norm2(x))
    assert max(ratios) <= beta * (1 + 1e-12)
    # power iteration on the dense operator built element by element
    D = np.array([[B.entries[m, n, (g - h) % 8] for n in range(3) for h in range(8)] for m in range(2) for g in range(8)])
    v = random_complex(rng, 24)
    for _ in range(500):
        v = D.conj().T @ (D @ v)
        v /= np.linalg.norm(v)
    est = np.linalg.norm(D @ v) ** 2
    assert abs(est - beta) <= 0.02 * beta
    x, lam = extremal_bundle(adjoint(B), "upper")  # synthesis norm of B = analysis norm of B*
    assert lam == pytest.approx(beta, rel=1e-10)


def test_frame_analysis_examples():
    G = make_group([4])
    r = frame_analysis(ConvMatrix.identity(G, 2))
    assert (r.alpha, r.beta, r.delta) == pytest.approx((1, 1, 1))
    assert r.is_frame and r.is_riesz
    col = np.zeros((2, 1, 4))
    col[:, 0, 0] = 1.0
    r = frame_analysis(ConvMatrix(G, col))
    assert (r.alpha, r.beta) == pytest.approx((2, 2))
    assert r.is_frame and not r.is_riesz
    r = frame_analysis(ConvMatrix(make_group([2]), [[[1, 1]]]))
    assert r.alpha == pytest.approx(0, abs=1e-15) and not r.is_frame
    assert r.worst_xi == (1,)


def test_report_invariants(rng):
    for M, N in [(1, 1), (3, 2), (2, 2), (1, 2)]:
        r = frame_analysis(rand_system(rng, make_group([6]), M, N))
        assert 0 <= r.alpha <= r.beta
        assert not r.is_frame or r.is_bessel
        assert not r.is_riesz or (r.is_frame and M == N)
        assert FrameReport.from_json(r.to_json()) == r


def test_frame_inequality_and_tightness(rng):
    G = make_group([8])
    A = rand_system(rng, G, 3, 2)
    r = frame_analysis(A)
    for _ in range(200):
        x = random_complex(rng, 2, 8)
        e, n = norm2(convolve(A, x)), norm2(x)
        assert r.alpha * n - 1e-10 * n <= e <= r.beta * n + 1e-10 * n
    for which, bound in (("lower", r.alpha), ("upper", r.beta)):
        x, _ = extremal_bundle(A, which)
        assert norm2(convolve(A, x)) / norm2(x) == pytest.approx(bound, rel=1e-8)


def test_analysis_synthesis_consistency(rng):
    G = make_group([2, 4])
    A = rand_system(rng, G, 2, 3)
    As = adjoint(A)
    x = random_complex(rng, 3, 8)
    out = convolve(A, x)
    for m in range(2):
        col = As.entries[:, m, :]  # a*_m in l^2_N(G)
        for g in G.elements:
            assert out[m, G.index(g)] == pytest.approx(inner(x, translate(col, g, G)), abs=1e-12)


def test_left_inverse_examples(rng):
    G = make_group([8])
    e = random_complex(rng, 2, 2, 8) * 0.2
    e[0, 0, 0] += 3
    e[1, 1, 0] += 3
    A = ConvMatrix(G, e)
    from usampling.convops import invert

    assert np.allclose(left_inverse(A).entries, invert(A).entries, atol=1e-12)

    col = np.zeros((2, 1, 8))
    col[:, 0, 0] = 1.0
    A = ConvMatrix(G, col)
    B = left_inverse(A)
    assert np.allclose(B.transfer.matrices, [[0.5, 0.5]], atol=1e-15)
    assert bessel_bound(B) == pytest.approx(0.5)
    assert bessel_bound(B) == pytest.approx(1 / frame_analysis(A).alpha, rel=1e-8)


def test_left_inverse_family(rng):
    G = make_group([8])
    A = rand_system(rng, G, 4, 2)
    alpha = frame_analysis(A).alpha
    B0 = left_inverse(A)
    assert is_dual_pair(A, B0)[0]
    assert bessel_bound(B0) == pytest.approx(1 / alpha, rel=1e-8)
    for _ in range(50):
        C = random_bounded_field(G, 2, 4, rng)
        B = left_inverse(A, C)
        ok, dev = is_dual_pair(A, B)
        assert ok and dev <= 1e-10
        assert bessel_bound(B) >= bessel_bound(B0) - 1e-10


def test_dual_pair_tight_frame():
    G = make_group([4])
    col = np.zeros((3, 1, 4))
    col[:, 0, 0] = 1.0
    A = ConvMatrix(G, col)  # A_hat* A_hat = 3
    B = ConvMatrix(G, adjoint(A).entries / 3)
    assert is_dual_pair(A, B)[0]


def test_dual_pair_unrelated(rng):
    G = make_group([8])
    ok, dev = is_dual_pair(rand_system(rng, G, 3, 2), rand_system(rng, G, 2, 3))
    assert not ok and dev > 0.1


def test_left_inverse_not_recoverable():
    with pytest.raises(NotRecoverableError) as exc:
        left_inverse(ConvMatrix(make_group([2]), [[[1, 1]]]))
    assert exc.value.worst_xi == (1,)


def test_operator_norm_is_sqrt_beta(rng):
    A = rand_system(rng, make_group([5]), 2, 2)
    assert operator_norm(A) ** 2 == pytest.approx(frame_analysis(A).beta, rel=1e-10)
