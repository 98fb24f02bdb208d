"""Sample, design, reconstruct.

For ``f = sum_n sum_g x_n(g) U(g) phi_n`` the samples are the output ``A * x`` of
a convolution system. Any left inverse ``B`` (``B_hat A_hat = I_N``) recovers
``x = B * samples``, and with ``S_m = T_{U,Phi} b_m`` also
``f = sum_m sum_g L_m f(g) U(g) S_m``. :func:`reconstruct` evaluates both and
insists that they agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import matrixcore
from .abelian_group import CosetDecomposition
from .convops import ConvMatrix, convolve
from .errors import (
    ContractError,
    DegenerateGeneratorsError,
    NotRecoverableError,
    ReconstructionMismatchError,
)
from .frames import FrameReport, bessel_bound, frame_analysis, is_dual_pair, left_inverse, null_witness
from .hmodels import (
    GeneratorSet,
    RieszSequence,
    SamplerSet,
    build_sampler,
    restrict,
    restrict_samplers,
    riesz_check,
    sample,
    synthesize,
)
from .spectral import TransferField, as_signal, norm2

ROUTE_TOL = 1e-9
ILL_CONDITIONED_FACTOR = 10.0


@dataclass(frozen=True, eq=False)
class ReconstructionKit:
    """Everything needed to go from samples back to ``x`` and ``f``."""

    A: ConvMatrix
    B: ConvMatrix
    generators: GeneratorSet
    S: np.ndarray
    report: FrameReport
    duality_deviation: float
    ill_conditioned: bool
    noise_amplification: float
    samplers: Optional[SamplerSet] = None

    @property
    def group(self):
        return self.A.group

    @property
    def sampling_functions(self) -> GeneratorSet:
        """``{S_m}`` packaged as generators of the same model (so ``U(g) S_m`` is a table read)."""
        return GeneratorSet(self.generators.model, self.S)


def take_samples(A: ConvMatrix, x) -> np.ndarray:
    """``L f = A * x`` as an ``(M, |G|)`` array."""
    return convolve(A, x)


def design(
    A: ConvMatrix,
    generators: GeneratorSet,
    C: Optional[TransferField] = None,
    samplers: Optional[SamplerSet] = None,
    tol: float = matrixcore.RANK_TOL,
) -> ReconstructionKit:
    """Build ``B = left_inverse(A, C)`` and the reconstruction elements ``S_m``.

    Raises :class:`NotRecoverableError` when ``delta_A`` is not above tolerance
    and :class:`DegenerateGeneratorsError` when ``{U(g) phi_n}`` is not a Riesz
    sequence.
    """
    if A.group != generators.group:
        raise ContractError("system and generators live on different groups")
    if A.cols != generators.N:
        raise ContractError(f"system has {A.cols} columns but there are {generators.N} generators")
    report = frame_analysis(A, tol=tol)
    if not report.is_frame:
        raise NotRecoverableError(
            f"not recoverable: delta_A={report.delta:.6e} <= {report.threshold:.3e} "
            f"at character {report.worst_xi} (M={A.rows}, N={A.cols})",
            delta=report.delta,
            worst_xi=report.worst_xi,
        )
    riesz = riesz_check(generators, tol=tol)
    if not riesz.is_riesz:
        raise DegenerateGeneratorsError(
            f"generator translates are not a Riesz sequence (alpha_Phi={riesz.lower_bound:.3e})",
            lower_bound=riesz.lower_bound,
        )
    B = left_inverse(A, C, tol=tol)
    S = np.stack([synthesize(generators, B.entries[:, m, :]) for m in range(A.rows)])
    ok, dev = is_dual_pair(A, B)
    if not ok:
        raise ReconstructionMismatchError(f"designed B is not a left inverse (deviation {dev:.3e})")
    return ReconstructionKit(
        A=A,
        B=B,
        generators=generators,
        S=S,
        report=report,
        duality_deviation=dev,
        ill_conditioned=bool(report.delta <= ILL_CONDITIONED_FACTOR * report.threshold),
        noise_amplification=bessel_bound(B),
        samplers=samplers,
    )


def design_from(generators: GeneratorSet, samplers: SamplerSet, C=None, tol=matrixcore.RANK_TOL) -> ReconstructionKit:
    """Convenience: build the sampling system from the model ingredients, then design."""
    return design(build_sampler(generators, samplers), generators, C=C, samplers=samplers, tol=tol)


def _samples(kit: ReconstructionKit, samples) -> np.ndarray:
    s = as_signal(samples, kit.group)
    if s.ndim == 1 and kit.A.rows == 1:
        s = s[None, :]
    if s.shape != (kit.A.rows, kit.group.cardinality):
        raise ContractError(f"expected samples of shape {(kit.A.rows, kit.group.cardinality)}, got {s.shape}")
    return s


def reconstruct(kit: ReconstructionKit, samples, tol: float = ROUTE_TOL):
    """Return ``(x, f)`` with ``x = B * samples`` and ``f = sum L_m f(g) U(g) S_m``.

    ``f`` is also computed as ``T_{U,Phi} x``; a disagreement beyond ``tol``
    (relative) raises :class:`ReconstructionMismatchError`.
    """
    s = _samples(kit, samples)
    x = convolve(kit.B, s)
    f_coeff = synthesize(kit.generators, x)
    f_frame = synthesize(kit.sampling_functions, s)
    scale = max(np.linalg.norm(f_coeff), np.linalg.norm(f_frame))
    gap = np.linalg.norm(f_coeff - f_frame)
    if gap > tol * scale:
        raise ReconstructionMismatchError(f"reconstruction routes disagree: {gap:.3e} vs scale {scale:.3e}")
    return x, f_frame


def consistency_residual(kit: ReconstructionKit, samples) -> float:
    """Relative distance of ``samples`` from the range of ``A`` (zero for genuine samples)."""
    s = _samples(kit, samples)
    proj = convolve(kit.A, convolve(kit.B, s))
    n = np.sqrt(norm2(s))
    return float(np.sqrt(norm2(s - proj)) / n) if n > 0 else 0.0


def interpolation_check(kit: ReconstructionKit) -> float:
    """``max |L_n S_{n'}(g) - delta_{n,n'} delta_{g,0}|`` for a square kit."""
    M, N = kit.A.shape
    if M != N:
        raise ContractError(f"interpolation property needs M = N, got M={M}, N={N}")
    if kit.samplers is not None:
        L = np.stack([sample(kit.samplers, kit.S[m]) for m in range(M)])  # [n', n, g]
    else:
        L = np.stack([convolve(kit.A, kit.B.entries[:, m, :]) for m in range(M)])
    target = np.zeros_like(L)
    target[np.arange(N), np.arange(N), 0] = 1.0
    return float(np.max(np.abs(L - target)))


def stability_constants(report: FrameReport, riesz: FrameReport):
    """Constants ``(c, C)`` with ``c ||f||^2 <= sum |L_m f(g)|^2 <= C ||f||^2`` on ``V_Phi``.

    With ``alpha_Phi, beta_Phi`` the Riesz bounds of ``{U(g) phi_n}``
    (``alpha_Phi ||x||^2 <= ||f||^2 <= beta_Phi ||x||^2``) these are
    ``alpha_A / beta_Phi`` and ``beta_A / alpha_Phi``.
    """
    return report.lower_bound / riesz.bessel_bound, report.bessel_bound / riesz.lower_bound


def instability_witness(A: ConvMatrix):
    """Bundle ``x`` with ``||A * x||^2 <= delta_A**(1/N) ||x||^2`` (up to rounding).

    Returns ``(x, ratio)``; the ratio is ``lambda_min`` of ``A_hat* A_hat`` at the
    character minimising the determinant.
    """
    x, _ = null_witness(A)
    ratio = norm2(convolve(A, x)) / norm2(x)
    return x, ratio


# ---------------------------------------------------------------- subgroup sampling


def regroup(x, D: CosetDecomposition) -> np.ndarray:
    """``x_{nl}(h) = x_n(g_l + h)`` with flat index ``n*L + l``; returns ``(N L, |H|)``."""
    x = np.atleast_2d(as_signal(x, D.parent))
    G = D.parent
    out = []
    for xn in x:
        for rep in D.representatives:
            idx = [G.index(G.add(rep, D.embed(h))) for h in D.subgroup.elements]
            out.append(xn[idx])
    return np.array(out)


def ungroup(y, D: CosetDecomposition) -> np.ndarray:
    """Inverse of :func:`regroup`."""
    y = np.atleast_2d(as_signal(y, D.subgroup))
    L = D.index
    if y.shape[0] % L:
        raise ContractError(f"{y.shape[0]} channels is not a multiple of the index {L}")
    G = D.parent
    x = np.zeros((y.shape[0] // L, G.cardinality), dtype=complex)
    for j, row in enumerate(y):
        n, l = divmod(j, L)
        for k, h in enumerate(D.subgroup.elements):
            x[n, G.index(G.add(D.representatives[l], D.embed(h)))] = row[k]
    return x


def subgroup_lift(generators: GeneratorSet, samplers: SamplerSet, D: CosetDecomposition):
    """Sampling on a subgroup ``H`` of index ``L``.

    Returns ``(A_H, generators_H, samplers_H)``: the ``M x NL`` system with
    ``a_{m,nl}(h) = <phi_n, U(h - g_l) psi_m>`` (or ``[U(-h + g_l) phi_n](t_m)``
    for pointwise samplers), and the restricted ingredients it was built from.
    """
    if generators.model != samplers.model:
        raise ContractError("generators and samplers live in different models")
    gens_h = restrict(generators, D)
    samp_h = restrict_samplers(samplers, gens_h.model)
    return build_sampler(gens_h, samp_h), gens_h, samp_h


# ---------------------------------------------------------------- unstructured Riesz sequences


def reconstruct_general(F: RieszSequence, A: ConvMatrix, samples, C=None, tol=matrixcore.RANK_TOL):
    """Recover ``f`` in ``V_F`` from ``L f = A * x`` by ``f = sum L_m f(g) S_{g,m}``.

    Returns ``(x, f, S)`` with ``S`` the ``(M, |G|, K)`` frame ``S_{g,m} = T_F(T_g b_m)``.
    """
    if A.group != F.group or A.cols != F.N:
        raise ContractError("system does not match the Riesz sequence")
    B = left_inverse(A, C, tol=tol)
    s = np.atleast_2d(as_signal(samples, A.group))
    x = convolve(B, s)
    S = F.sampling_frame(B)
    f = np.einsum("mg,mgk->k", s, S)
    return x, f, S
