import numpy as np
import pytest
from oracles import dense_operator_by_columns, direct_system, random_complex

from usampling import matrixcore as mc
from usampling.abelian_group import make_group
from usampling.convops import (
    ConvMatrix,
    adjoint,
    compose,
    convolve,
    dense_operator,
    injectivity_margin,
    invert,
    is_injective,
    is_surjective,
    operator_norm,
    surjectivity_margin,
    translate,
)
from usampling.errors import ContractError, SingularSystemError
from usampling.spectral import inner


def rand_system(rng, G, M, N):
    return ConvMatrix(G, random_complex(rng, M, N, G.cardinality))


def test_translate_examples(rng):
    G = make_group([4])
    x = random_complex(rng, 4)
    assert np.array_equal(translate(x, 0, G), x)
    assert np.array_equal(translate([1, 0, 0, 0], 1, G), [0, 1, 0, 0])
    G2 = make_group([3, 4])
    y = random_complex(rng, 12)
    g, h = (1, 2), (2, 3)
    assert np.array_equal(translate(translate(y, h, G2), g, G2), translate(y, G2.add(g, h), G2))


def test_convolve_examples():
    G = make_group([2])
    x = np.array([[2.0, 5.0]])
    assert np.allclose(convolve(ConvMatrix.identity(G, 1), x), x)
    a0, a1 = 3.0, -1.5
    out = convolve(ConvMatrix(G, [[[a0, a1]]]), x)
    assert np.allclose(out, [[a0 * 2 + a1 * 5, a1 * 2 + a0 * 5]])


def test_convolve_matches_double_loop(rng):
    G = make_group([8])
    A = rand_system(rng, G, 2, 3)
    x = random_complex(rng, 3, 8)
    assert np.max(np.abs(convolve(A, x) - direct_system(A.entries, x, (8,)))) <= 1e-10


def test_convolve_dimension_mismatch(rng):
    A = rand_system(rng, make_group([4]), 2, 3)
    with pytest.raises(ContractError):
        convolve(A, np.zeros((2, 4)))


def test_translation_commuting(rng):
    G = make_group([2, 4])
    A = rand_system(rng, G, 3, 2)
    x = random_complex(rng, 2, 8)
    for g in G.elements:
        assert np.allclose(convolve(A, translate(x, g, G)), translate(convolve(A, x), g, G), atol=1e-12)


def test_dense_operator_equivalence(rng):
    for orders in ([8], [2, 4], [16]):
        G = make_group(orders)
        A = rand_system(rng, G, 2, 3)
        n = G.cardinality
        ref = dense_operator_by_columns(lambda e: convolve(A, e), n, 3, 2 * n)
        assert np.max(np.abs(dense_operator(A) - ref)) <= 1e-12
        assert np.max(np.abs(dense_operator(adjoint(A)) - dense_operator(A).conj().T)) <= 1e-12


def test_adjoint_examples(rng):
    G = make_group([6])
    sym = rng.standard_normal((2, 3, 6))
    sym = 0.5 * (sym + sym[..., G.neg_indices])
    A = ConvMatrix(G, sym)
    assert np.allclose(adjoint(A).entries, np.swapaxes(sym, 0, 1))
    B = rand_system(rng, G, 2, 3)
    assert adjoint(adjoint(B)) == B
    assert np.allclose(adjoint(B).transfer.matrices, B.transfer.adjoint().matrices, atol=1e-12)


def test_adjoint_inner_products(rng):
    G = make_group([8])
    A = rand_system(rng, G, 3, 2)
    x, y = random_complex(rng, 2, 8), random_complex(rng, 3, 8)
    lhs, rhs = inner(convolve(A, x), y), inner(x, convolve(adjoint(A), y))
    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_compose(rng):
    G = make_group([4])
    A = rand_system(rng, G, 3, 2)
    B = rand_system(rng, G, 2, 3)
    I = ConvMatrix.identity(G, 3)
    assert np.allclose(compose(I, A).entries, A.entries, atol=1e-12)
    x = random_complex(rng, 2, 4)
    BA = compose(B, A)
    assert np.allclose(convolve(BA, x), convolve(B, convolve(A, x)), atol=1e-10)
    for k in range(4):
        assert np.allclose(BA.transfer.matrices[k], B.transfer.matrices[k] @ A.transfer.matrices[k], atol=1e-10)
    with pytest.raises(ContractError):
        compose(A, A)


def test_operator_norm(rng):
    G = make_group([8])
    assert operator_norm(ConvMatrix.identity(G, 2)) == pytest.approx(1)
    e = np.zeros((1, 1, 8), dtype=complex)
    e[0, 0, 0] = 3 - 4j
    assert operator_norm(ConvMatrix(G, e)) == pytest.approx(5)
    A = rand_system(rng, G, 2, 1)
    ref = np.linalg.svd(dense_operator(A), compute_uv=False)[0]
    assert abs(operator_norm(A) - ref) <= 1e-8 * ref
    lam = mc.hermitian_eigenvalues(mc.gram(A.transfer.matrices))
    assert operator_norm(A) ** 2 == pytest.approx(np.max(lam), rel=1e-10)


def test_injectivity_margin(rng):
    G = make_group([4])
    assert injectivity_margin(ConvMatrix.identity(G, 2)) == pytest.approx(1)
    A = ConvMatrix(make_group([2]), [[[1, 1]]])
    assert injectivity_margin(A) == pytest.approx(0, abs=1e-15)
    assert not is_injective(A)
    A = rand_system(rng, G, 3, 2)
    scan = [np.linalg.det(A.transfer.matrices[k].conj().T @ A.transfer.matrices[k]).real for k in range(4)]
    assert injectivity_margin(A) == pytest.approx(min(scan), rel=1e-12)
    assert injectivity_margin(rand_system(rng, G, 1, 2)) == 0.0


def test_surjectivity_margin(rng):
    G = make_group([4])
    assert surjectivity_margin(ConvMatrix.identity(G, 3)) == pytest.approx(1)
    row = np.zeros((1, 2, 4))
    row[0, :, 0] = 1.0
    assert surjectivity_margin(ConvMatrix(G, row)) == pytest.approx(2)
    A = rand_system(rng, G, 2, 3)
    scan = [np.linalg.det(A.transfer.matrices[k] @ A.transfer.matrices[k].conj().T).real for k in range(4)]
    assert surjectivity_margin(A) == pytest.approx(min(scan), rel=1e-12)
    assert is_surjective(A)


def test_invert(rng):
    G = make_group([4])
    I = ConvMatrix.identity(G, 2)
    assert np.allclose(invert(I).entries, I.entries, atol=1e-15)
    shift = ConvMatrix(G, [[[0, 1, 0, 0]]])
    assert np.allclose(invert(shift).entries, [[[0, 0, 0, 1]]], atol=1e-15)

    G8 = make_group([8])
    e = random_complex(rng, 2, 2, 8) * 0.3
    e[0, 0, 0] += 4
    e[1, 1, 0] += 4
    A = ConvMatrix(G8, e)
    Ai = invert(A)
    assert np.allclose(compose(Ai, A).entries, ConvMatrix.identity(G8, 2).entries, atol=1e-9)
    x = random_complex(rng, 2, 8)
    assert np.max(np.abs(convolve(Ai, convolve(A, x)) - x)) <= 1e-9
    lam_min = np.min(mc.hermitian_eigenvalues(mc.gram(A.transfer.matrices))[:, 0])
    assert operator_norm(Ai) == pytest.approx(lam_min ** -0.5, rel=1e-8)


def test_invert_singular():
    G = make_group([2])
    with pytest.raises(SingularSystemError) as exc:
        invert(ConvMatrix(G, [[[1, 1]]]))
    assert exc.value.characters == [(1,)]
    with pytest.raises(ContractError):
        invert(ConvMatrix(G, np.ones((2, 1, 2))))


def test_convmatrix_json_roundtrip(rng):
    A = rand_system(rng, make_group([2, 3]), 2, 2)
    assert ConvMatrix.from_json(A.to_json()) == A
