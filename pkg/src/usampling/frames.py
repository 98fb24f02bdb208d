"""Translate frames ``{T_g a*_m}`` / ``{T_g b_m}`` in ``l^2_N(G)`` and left inverses.

A system ``A`` is the analysis operator of ``{T_g a*_m}`` and a system ``B`` is
the synthesis operator of ``{T_g b_m}`` (``b_m`` the columns of ``B``), so frame
bounds, Riesz-basis tests and duality reduce to the transfer fields.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import matrixcore
from .abelian_group import GroupSpec
from .convops import (
    ConvMatrix,
    gram_eigenvalues,
    injectivity_scan,
    positivity_threshold,
)
from .errors import ContractError, NotRecoverableError
from .spectral import TransferField, inverse_fourier

DUALITY_TOL = 1e-9


@dataclass(frozen=True)
class FrameReport:
    """Optimal bounds of ``{T_g a*_m}`` together with the recoverability constant.

    ``worst_xi`` is the character where ``det[A_hat* A_hat]`` is smallest.
    """

    M: int
    N: int
    lower_bound: float
    bessel_bound: float
    delta: float
    is_bessel: bool
    is_frame: bool
    is_riesz: bool
    worst_xi: tuple
    threshold: float

    @property
    def alpha(self) -> float:
        return self.lower_bound

    @property
    def beta(self) -> float:
        return self.bessel_bound

    def to_json(self) -> dict:
        d = asdict(self)
        d["worst_xi"] = list(self.worst_xi)
        return d

    @classmethod
    def from_json(cls, obj) -> "FrameReport":
        obj = dict(obj)
        obj["worst_xi"] = tuple(obj["worst_xi"])
        return cls(**obj)


def bessel_bound(B: ConvMatrix) -> float:
    """``max_xi ||B_hat(xi)||_2^2``, the optimal Bessel bound of ``{T_g b_m}``."""
    return float(np.max(matrixcore.spectral_norm(B.transfer.matrices)) ** 2)


def frame_analysis(A: ConvMatrix, tol: float = matrixcore.RANK_TOL) -> FrameReport:
    lam = gram_eigenvalues(A)
    dets = injectivity_scan(A)
    worst = int(np.argmin(dets))
    M, N = A.shape
    alpha = max(float(np.min(lam[:, 0])), 0.0) if M >= N else 0.0
    beta = float(np.max(lam[:, -1]))
    delta = float(dets[worst])
    threshold = positivity_threshold(A, N, tol)
    is_frame = bool(M >= N and delta > threshold and alpha > tol * beta)
    is_riesz = False
    if is_frame and M == N:
        absdet = np.abs(matrixcore.det(A.transfer.matrices))
        is_riesz = bool(np.min(absdet) ** 2 > threshold)
    return FrameReport(
        M=M,
        N=N,
        lower_bound=alpha,
        bessel_bound=beta,
        delta=delta,
        is_bessel=bool(np.isfinite(beta)),
        is_frame=is_frame,
        is_riesz=is_riesz,
        worst_xi=A.group.element(worst),
        threshold=threshold,
    )


def duality_deviation(A: ConvMatrix, B: ConvMatrix) -> float:
    """``max_xi ||B_hat(xi) A_hat(xi) - I_N||_max``."""
    if A.group != B.group or B.shape != (A.cols, A.rows):
        raise ContractError(f"incompatible shapes {A.shape} and {B.shape} for a dual pair")
    P = B.transfer.matrices @ A.transfer.matrices
    return float(np.max(np.abs(P - np.eye(A.cols))))


def is_dual_pair(A: ConvMatrix, B: ConvMatrix, tol: float = DUALITY_TOL):
    """Return ``(ok, deviation)`` for the duality of ``{T_g a*_m}`` and ``{T_g b_m}``."""
    dev = duality_deviation(A, B)
    return dev <= tol, dev


def left_inverse(
    A: ConvMatrix,
    C: Optional[TransferField] = None,
    tol: float = matrixcore.RANK_TOL,
) -> ConvMatrix:
    """A synthesis system ``B`` with ``B_hat A_hat = I_N``.

    ``B_hat = A_hat^+ + C (I_M - A_hat A_hat^+)``; ``C = None`` gives the
    pseudo-inverse, whose Bessel bound ``1/alpha_A`` is the smallest possible.
    """
    report = frame_analysis(A, tol=tol)
    if not report.is_frame:
        raise NotRecoverableError(
            f"delta_A={report.delta:.3e} is not above {report.threshold:.3e} (worst character {report.worst_xi})",
            delta=report.delta,
            worst_xi=report.worst_xi,
        )
    Ahat = A.transfer.matrices
    pinv = matrixcore.pseudo_inverse(Ahat, tol=tol)
    Bhat = pinv
    if C is not None:
        if C.group != A.group or (C.rows, C.cols) != (A.cols, A.rows):
            raise ContractError(f"C must be an {A.cols}x{A.rows} field on the same group")
        Bhat = pinv + C.matrices @ (np.eye(A.rows) - Ahat @ pinv)
    return ConvMatrix.from_transfer(TransferField(A.group, Bhat))


def random_bounded_field(G: GroupSpec, rows: int, cols: int, rng, scale: float = 1.0) -> TransferField:
    """A random field ``C(xi)`` (complex Gaussian entries)."""
    m = rng.standard_normal((G.cardinality, rows, cols)) + 1j * rng.standard_normal((G.cardinality, rows, cols))
    return TransferField(G, scale * m)


def extremal_bundle(A: ConvMatrix, which: str = "lower"):
    """A bundle attaining the lower (or upper) frame bound.

    Puts a single character ``xi*`` along the extremal eigenvector ``v`` of
    ``A_hat(xi*)* A_hat(xi*)``: ``x_n(g) = v_n <g, xi*>``. Returns ``(x, lam)`` with
    ``||A * x||^2 = lam ||x||^2``.
    """
    if which not in ("lower", "upper"):
        raise ValueError("which must be 'lower' or 'upper'")
    G = A.group
    lam, vecs = np.linalg.eigh(matrixcore.gram(A.transfer.matrices))
    if which == "lower":
        k, col = int(np.argmin(lam[:, 0])), 0
    else:
        k, col = int(np.argmax(lam[:, -1])), -1
    return _character_bundle(G, k, vecs[k][:, col]), float(lam[k, col])


def null_witness(A: ConvMatrix):
    """Bundle built from the near-null direction at the character minimising the determinant.

    Its Rayleigh quotient is ``lambda_min`` there, which never exceeds ``delta_A**(1/N)``.
    """
    G = A.group
    dets = injectivity_scan(A)
    k = int(np.argmin(dets))
    lam, vecs = np.linalg.eigh(matrixcore.gram(A.transfer.matrices[k]))
    return _character_bundle(G, k, vecs[:, 0]), float(lam[0])


def _character_bundle(G: GroupSpec, k: int, v: np.ndarray) -> np.ndarray:
    spectrum = np.zeros((v.size, G.cardinality), dtype=complex)
    spectrum[:, k] = v * G.cardinality
    return inverse_fourier(spectrum, G)
