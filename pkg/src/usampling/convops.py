"""Convolution systems ``A : l^2_N(G) -> l^2_M(G)`` and their spectral criteria.

A system is stored by its ``M x N`` matrix of filters ``a_{m,n}``. Boundedness,
adjoints, products, inverses, injectivity and surjectivity are all read from the
transfer field ``xi -> A_hat(xi)``. On a finite group the essential inf/sup of
those criteria is an exact min/max over the characters.

Strict positivity tests (``delta_A > 0`` and the like) need a threshold in floating
point. They are made scale-free: a quantity that is a product of ``N``
eigenvalues of ``A_hat* A_hat`` is compared with ``tol * beta_A**N``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import matrixcore
from .abelian_group import GroupSpec
from .errors import ContractError, SingularSystemError
from .spectral import TransferField, as_signal, fourier, inverse_fourier, transfer_field


@dataclass(frozen=True, eq=False)
class ConvMatrix:
    """Matrix of filters with ``entries[m, n]`` the signal ``a_{m,n}``."""

    group: GroupSpec
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 3:
            raise ContractError(f"entries must have shape (M, N, |G|), got {e.shape}")
        e = as_signal(e, self.group).copy()
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple:
        return self.entries.shape[:2]

    @cached_property
    def transfer(self) -> TransferField:
        return transfer_field(self)

    @classmethod
    def from_transfer(cls, field: TransferField) -> "ConvMatrix":
        return cls(field.group, field.entries())

    @classmethod
    def identity(cls, G: GroupSpec, n: int) -> "ConvMatrix":
        e = np.zeros((n, n, G.cardinality), dtype=complex)
        e[np.arange(n), np.arange(n), 0] = 1.0
        return cls(G, e)

    def __eq__(self, other):
        return (
            isinstance(other, ConvMatrix)
            and other.group == self.group
            and np.array_equal(other.entries, self.entries)
        )

    def to_json(self) -> dict:
        from .serialize import complex_to_json

        M, N = self.shape
        return {
            "group": self.group.to_json(),
            "M": M,
            "N": N,
            "entries": [complex_to_json(self.entries[m, n]) for m in range(M) for n in range(N)],
        }

    @classmethod
    def from_json(cls, obj) -> "ConvMatrix":
        from .serialize import complex_from_json

        G = GroupSpec.from_json(obj["group"])
        M, N = int(obj["M"]), int(obj["N"])
        flat = [complex_from_json(e) for e in obj["entries"]]
        if len(flat) != M * N:
            raise ContractError(f"expected {M * N} entries, got {len(flat)}")
        return cls(G, np.array(flat).reshape(M, N, -1))


def translate(x, g, G: GroupSpec) -> np.ndarray:
    """``(T_g x)(h) = x(h - g)`` along the last axis (works for bundles too)."""
    x = as_signal(x, G)
    return x[..., G.shifted_indices(g)]


def _bundle(x, G: GroupSpec, channels: int) -> np.ndarray:
    x = as_signal(x, G)
    if x.ndim == 1 and channels == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[0] != channels:
        raise ContractError(f"expected a bundle of {channels} channels on |G|={G.cardinality}, got shape {x.shape}")
    return x


def convolve(A: ConvMatrix, x) -> np.ndarray:
    """``(A * x)_m = sum_n a_{m,n} * x_n``; returns an ``(M, |G|)`` bundle."""
    x = _bundle(x, A.group, A.cols)
    X = fourier(x, A.group)
    Y = np.einsum("mnk,nk->mk", fourier(A.entries, A.group), X)
    return inverse_fourier(Y, A.group)


def adjoint(A: ConvMatrix) -> ConvMatrix:
    """The system of the adjoint operator: entries ``conj(a_{m,n}(-g))``, transposed."""
    e = np.conj(A.entries[..., A.group.neg_indices])
    return ConvMatrix(A.group, np.swapaxes(e, 0, 1))


def compose(B: ConvMatrix, A: ConvMatrix) -> ConvMatrix:
    """The system ``B A`` with transfer field ``B_hat(xi) A_hat(xi)``."""
    if B.group != A.group:
        raise ContractError("systems live on different groups")
    if B.cols != A.rows:
        raise ContractError(f"cannot compose {B.shape} with {A.shape}")
    return ConvMatrix.from_transfer(B.transfer @ A.transfer)


def dense_operator(A: ConvMatrix) -> np.ndarray:
    """Explicit ``(M|G|) x (N|G|)`` matrix; row ``m*|G| + g``, column ``n*|G| + h``."""
    G = A.group
    n = G.cardinality
    # entry (g, h) of block (m, n) is a_{m,n}(g - h)
    diff = np.stack([G.shifted_indices(G.element(h)) for h in range(n)], axis=1)
    blocks = A.entries[:, :, diff]
    return blocks.transpose(0, 2, 1, 3).reshape(A.rows * n, A.cols * n)


def operator_norm(A: ConvMatrix) -> float:
    return float(np.max(matrixcore.spectral_norm(A.transfer.matrices)))


def gram_eigenvalues(A: ConvMatrix) -> np.ndarray:
    """``(|G|, N)`` ascending eigenvalues of ``A_hat(xi)* A_hat(xi)``."""
    return matrixcore.hermitian_eigenvalues(matrixcore.gram(A.transfer.matrices), tol=np.inf)


def injectivity_scan(A: ConvMatrix) -> np.ndarray:
    """``det[A_hat(xi)* A_hat(xi)]`` for every character (zero when ``M < N``)."""
    if A.rows < A.cols:
        return np.zeros(A.group.cardinality)
    return matrixcore.det(matrixcore.gram(A.transfer.matrices)).real


def surjectivity_scan(A: ConvMatrix) -> np.ndarray:
    if A.cols < A.rows:
        return np.zeros(A.group.cardinality)
    return matrixcore.det(matrixcore.cogram(A.transfer.matrices)).real


def injectivity_margin(A: ConvMatrix) -> float:
    """``delta_A = min_xi det[A_hat(xi)* A_hat(xi)]``."""
    return float(np.min(injectivity_scan(A)))


def surjectivity_margin(A: ConvMatrix) -> float:
    return float(np.min(surjectivity_scan(A)))


def positivity_threshold(A: ConvMatrix, power: int, tol: float) -> float:
    """``tol * beta_A**power``, the floor a product of ``power`` Gram eigenvalues must exceed."""
    beta = operator_norm(A) ** 2
    return tol * beta ** power


def is_injective(A: ConvMatrix, tol: float = matrixcore.RANK_TOL) -> bool:
    """Injective with closed range."""
    if A.rows < A.cols:
        return False
    delta = injectivity_margin(A)
    return bool(delta > positivity_threshold(A, A.cols, tol))


def is_surjective(A: ConvMatrix, tol: float = matrixcore.RANK_TOL) -> bool:
    if A.cols < A.rows:
        return False
    return bool(surjectivity_margin(A) > positivity_threshold(A, A.rows, tol))


def invert(A: ConvMatrix, tol: float = matrixcore.RANK_TOL) -> ConvMatrix:
    """Inverse system, with transfer field ``A_hat(xi)^{-1}``.

    Raises :class:`SingularSystemError` listing every character where
    ``lambda_min <= tol * lambda_max`` of ``A_hat* A_hat``.
    """
    if A.rows != A.cols:
        raise ContractError(f"only square systems can be inverted, got {A.shape}")
    lam = gram_eigenvalues(A)
    bad = np.flatnonzero(~(lam[:, 0] > tol * lam[:, -1]))
    if bad.size:
        xis = [A.group.element(int(i)) for i in bad]
        raise SingularSystemError(f"system is singular at characters {xis}", characters=xis)
    inv = np.linalg.inv(A.transfer.matrices)
    return ConvMatrix.from_transfer(TransferField(A.group, inv))
