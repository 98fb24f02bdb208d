"""Finite-dimensional Hilbert spaces carrying a unitary representation of ``G``.

Three kinds of model are provided:

``regular``
    ``H = l^2_C(G)`` (``C`` channels), ``U(g)`` translates every channel.
``periodized_shift``
    ``L^2(R)`` replaced by ``s`` unit cells with ``q`` samples each
    (``K = s q`` grid points) and ``G = Z_s`` acting by shifts of ``q`` steps.
    Continuous-domain statements are only approximated by this torus grid.
``crystallographic``
    The same construction on the ``sq x sq`` torus with ``G = Z_s^2`` and a
    finite point group ``Gamma`` acting by ``U(p, gamma) f(t) = f(gamma^T (t - q p))``.

Every ``U(g)`` is a coordinate permutation, stored as a source map:
``(U(g) v)[k] = v[src[g, k]]``. Coordinates are grid samples, so pointwise
sampling is a grid read. Inner products are the unweighted grid dot product,
linear in the first argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import matrixcore
from .abelian_group import CosetDecomposition, GroupSpec, PointAction
from .convops import ConvMatrix, translate
from .errors import ContractError, DomainError, InvalidActionError, InvalidSpecError
from .frames import FrameReport
from .spectral import as_signal

KINDS = ("regular", "periodized_shift", "crystallographic")


@dataclass(frozen=True, eq=False)
class HModel:
    group: GroupSpec
    kind: str
    src: np.ndarray
    grid_shape: tuple
    cell: int = 1
    point_action: Optional[PointAction] = None
    point_src: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpecError(f"unknown model kind {self.kind!r}")
        src = np.asarray(self.src, dtype=np.int64)
        if src.ndim != 2 or src.shape[0] != self.group.cardinality:
            raise ContractError(f"source map must have shape (|G|, K), got {src.shape}")
        src.setflags(write=False)
        object.__setattr__(self, "src", src)

    @property
    def dim(self) -> int:
        return self.src.shape[1]

    def apply(self, g, v) -> np.ndarray:
        """``U(g) v``; ``v`` may carry leading batch axes."""
        v = self._vector(v)
        return v[..., self.src[self.group.index(g)]]

    def orbit(self, v) -> np.ndarray:
        """``(..., |G|, K)`` table of ``U(g) v`` over all ``g`` in enumeration order."""
        v = self._vector(v)
        return v[..., self.src]

    def matrix(self, g) -> np.ndarray:
        """Dense unitary matrix of ``U(g)``."""
        K = self.dim
        U = np.zeros((K, K))
        U[np.arange(K), self.src[self.group.index(g)]] = 1.0
        return U

    def _vector(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape[-1:] != (self.dim,):
            raise ContractError(f"vector length {v.shape[-1:]} does not match model dimension {self.dim}")
        return v

    def __eq__(self, other):
        return (
            isinstance(other, HModel)
            and self.group == other.group
            and self.kind == other.kind
            and np.array_equal(self.src, other.src)
        )

    __hash__ = object.__hash__

    def grid_index(self, t) -> int:
        """Flat coordinate of a grid point given as an int or a tuple."""
        if np.ndim(t) == 0:
            t = int(t)
            if not 0 <= t < self.dim:
                raise DomainError(f"grid point {t} outside [0, {self.dim})")
            return t
        t = tuple(int(v) for v in t)
        if len(t) != len(self.grid_shape) or any(not 0 <= v < n for v, n in zip(t, self.grid_shape)):
            raise DomainError(f"grid point {t} outside grid {self.grid_shape}")
        return int(np.ravel_multi_index(t, self.grid_shape))


def make_regular_model(G: GroupSpec, channels: int = 1) -> HModel:
    """``l^2(G)`` (or ``channels`` copies of it) with translations."""
    n = G.cardinality
    src = np.stack([G.shifted_indices(G.element(g)) for g in range(n)])
    src = np.concatenate([src + c * n for c in range(channels)], axis=1)
    return HModel(G, "regular", src, grid_shape=(channels * n,))


def make_periodized_shift_model(s: int, q: int) -> HModel:
    if s < 1 or q < 1:
        raise InvalidSpecError(f"s and q must be >= 1, got s={s}, q={q}")
    K = s * q
    k = np.arange(K)
    src = np.stack([(k - p * q) % K for p in range(s)])
    return HModel(GroupSpec((s,)), "periodized_shift", src, grid_shape=(K,), cell=q)


def _grid_points(n: int) -> np.ndarray:
    return GroupSpec((n, n)).elements


def make_crystallographic_model(s: int, q: int, gamma: Sequence) -> HModel:
    """Quasi-regular representation of ``Z_s^2 x| Gamma`` on the ``sq x sq`` torus.

    The returned model represents the abelian translation subgroup; the point
    group is kept on the model for :func:`crystal_operator` and
    :func:`crystal_generators`.
    """
    if s < 1 or q < 1:
        raise InvalidSpecError(f"s and q must be >= 1, got s={s}, q={q}")
    n = s * q
    try:
        action = PointAction(gamma, GroupSpec((s, s)))
        grid_action = PointAction(gamma, GroupSpec((n, n)))
    except InvalidActionError:
        raise
    except Exception as exc:  # malformed matrices
        raise InvalidActionError(f"invalid point group: {exc}") from exc
    T = _grid_points(n)
    lattice = GroupSpec((s, s)).elements
    src = np.stack([np.ravel_multi_index(tuple(((T - q * p) % n).T), (n, n)) for p in lattice])
    # U(0, gamma) f(t) = f(gamma^T t)
    point_src = np.stack([grid_action.permutation(grid_action.inverse(i)) for i in range(len(grid_action))])
    return HModel(
        GroupSpec((s, s)),
        "crystallographic",
        src,
        grid_shape=(n, n),
        cell=q,
        point_action=action,
        point_src=point_src,
    )


def crystal_operator(model: HModel, p, i: int) -> np.ndarray:
    """Source map of ``U(p, gamma_i)``: ``(U f)[t] = f[src[t]]`` with ``src[t] = gamma_i^T (t - q p)``."""
    if model.kind != "crystallographic":
        raise ContractError("crystal_operator needs a crystallographic model")
    p = model.group.coords(p)
    return model.point_src[i][model.src[model.group.index(p)]]


def compose_sources(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Source map of the product ``U_first U_second``."""
    return second[first]


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Generators ``phi_1..phi_N`` of ``V_Phi`` as an ``(N, K)`` array."""

    model: HModel
    vectors: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
        if v.ndim != 2 or v.shape[1] != self.model.dim:
            raise ContractError(f"generators must have shape (N, {self.model.dim}), got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def N(self) -> int:
        return self.vectors.shape[0]

    @property
    def group(self) -> GroupSpec:
        return self.model.group

    @cached_property
    def table(self) -> np.ndarray:
        """``(N, |G|, K)`` table of ``U(g) phi_n``."""
        return self.model.orbit(self.vectors)

    @cached_property
    def riesz(self) -> FrameReport:
        return riesz_check(self)


@dataclass(frozen=True, eq=False)
class SamplerSet:
    """Average samplers ``psi_m`` (``(M, K)`` array) or pointwise grid indices ``t_m``."""

    model: HModel
    mode: str
    vectors: Optional[np.ndarray] = None
    points: Optional[tuple] = None

    def __post_init__(self):
        if self.mode == "average":
            v = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
            if v.shape[1:] != (self.model.dim,) or v.shape[0] < 1:
                raise ContractError(f"average samplers must have shape (M, {self.model.dim}), got {v.shape}")
            v.setflags(write=False)
            object.__setattr__(self, "vectors", v)
        elif self.mode == "pointwise":
            if self.points is None or len(self.points) < 1:
                raise ContractError("pointwise sampling needs at least one point")
            pts = tuple(self.model.grid_index(t) for t in self.points)
            object.__setattr__(self, "points", pts)
        else:
            raise InvalidSpecError(f"unknown sampling mode {self.mode!r}")

    @property
    def M(self) -> int:
        return self.vectors.shape[0] if self.mode == "average" else len(self.points)


def average_samplers(model: HModel, vectors) -> SamplerSet:
    return SamplerSet(model, "average", vectors=vectors)


def pointwise_samplers(model: HModel, points) -> SamplerSet:
    return SamplerSet(model, "pointwise", points=tuple(points))


def crystal_generators(model: HModel, phi) -> GeneratorSet:
    """Generators ``phi_n = U(0, gamma_n) phi`` reducing the crystal problem to ``Z_s^2``."""
    if model.kind != "crystallographic":
        raise ContractError("crystal_generators needs a crystallographic model")
    phi = model._vector(phi)
    return GeneratorSet(model, np.stack([phi[src] for src in model.point_src]))


def build_average_sampler(gens: GeneratorSet, samplers: SamplerSet) -> ConvMatrix:
    """``a_{m,n}(g) = <phi_n, U(g) psi_m>``."""
    if gens.model != samplers.model:
        raise ContractError("generators and samplers live in different models")
    if samplers.mode != "average":
        raise ContractError("expected average samplers")
    orbits = samplers.model.orbit(samplers.vectors)  # (M, |G|, K)
    entries = np.einsum("mgk,nk->mng", np.conj(orbits), gens.vectors)
    return ConvMatrix(gens.group, entries)


def build_pointwise_sampler(gens: GeneratorSet, points) -> ConvMatrix:
    """``a_{m,n}(g) = [U(-g) phi_n](t_m)``."""
    if isinstance(points, SamplerSet):
        if points.model != gens.model or points.mode != "pointwise":
            raise ContractError("expected pointwise samplers on the generators' model")
        pts = points.points
    else:
        pts = tuple(gens.model.grid_index(t) for t in points)
    neg = gens.group.neg_indices
    tab = gens.table[:, neg, :]  # U(-g) phi_n
    entries = np.stack([tab[:, :, t] for t in pts])
    return ConvMatrix(gens.group, entries)


def build_sampler(gens: GeneratorSet, samplers: SamplerSet) -> ConvMatrix:
    if samplers.mode == "average":
        return build_average_sampler(gens, samplers)
    if samplers.model != gens.model:
        raise ContractError("generators and samplers live in different models")
    return build_pointwise_sampler(gens, samplers.points)


def sample(samplers: SamplerSet, f) -> np.ndarray:
    """Direct samples ``L_m f(g)`` of a vector ``f``; returns ``(M, |G|)``."""
    model = samplers.model
    f = model._vector(f)
    if samplers.mode == "average":
        orbits = model.orbit(samplers.vectors)
        return np.einsum("mgk,k->mg", np.conj(orbits), f)
    orb = model.orbit(f)[model.group.neg_indices]
    return orb[:, list(samplers.points)].T


def boundedness_check(gens: GeneratorSet) -> np.ndarray:
    """``max_t sum_g |[U(g) phi_n](t)|^2`` for each generator."""
    return np.max(np.sum(np.abs(gens.table) ** 2, axis=1), axis=1)


def gram_system(gens: GeneratorSet) -> ConvMatrix:
    """``N x N`` system with entries ``<phi_{n'}, U(g) phi_n>`` at position ``(n, n')``."""
    return build_average_sampler(gens, SamplerSet(gens.model, "average", vectors=gens.vectors))


def riesz_check(gens: GeneratorSet, tol: float = matrixcore.RANK_TOL) -> FrameReport:
    """Riesz bounds of ``{U(g) phi_n}``: min/max eigenvalues of the Gram transfer field."""
    Gs = gram_system(gens)
    Ghat = Gs.transfer.matrices
    Ghat = 0.5 * (Ghat + np.conj(np.swapaxes(Ghat, 1, 2)))
    lam = matrixcore.hermitian_eigenvalues(Ghat)
    dets = matrixcore.det(Ghat).real
    lo, hi = float(np.min(lam[:, 0])), float(np.max(lam[:, -1]))
    threshold = tol * hi
    ok = bool(lo > threshold)
    return FrameReport(
        M=gens.N,
        N=gens.N,
        lower_bound=max(lo, 0.0),
        bessel_bound=hi,
        delta=float(np.min(dets)),
        is_bessel=True,
        is_frame=ok,
        is_riesz=ok,
        worst_xi=gens.group.element(int(np.argmin(lam[:, 0]))),
        threshold=threshold,
    )


def synthesize(gens, x) -> np.ndarray:
    """``f = sum_n sum_g x_n(g) U(g) phi_n`` (``gens`` may also be a :class:`RieszSequence`)."""
    x = as_signal(x, gens.group)
    if x.ndim == 1 and gens.N == 1:
        x = x[None, :]
    if x.shape != (gens.N, gens.group.cardinality):
        raise ContractError(f"expected coefficients of shape ({gens.N}, {gens.group.cardinality}), got {x.shape}")
    return np.einsum("ng,ngk->k", x, gens.table)


@dataclass(frozen=True, eq=False)
class RieszSequence:
    """An arbitrary Riesz sequence ``{f_{g,n}}`` with no representation behind it.

    ``table[n, g]`` is ``f_{g,n}``. Synthesis is the natural isomorphism from
    ``l^2_N(G)``; reconstruction elements are ``S_{g,m} = T_F(T_g b_m)``.
    """

    group: GroupSpec
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=complex)
        if t.ndim != 3 or t.shape[1] != self.group.cardinality:
            raise ContractError(f"table must have shape (N, |G|, K), got {t.shape}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def N(self) -> int:
        return self.table.shape[0]

    @property
    def dim(self) -> int:
        return self.table.shape[2]

    def riesz_bounds(self):
        """Extreme eigenvalues of the dense ``N|G| x N|G|`` Gram matrix."""
        V = self.table.reshape(-1, self.dim)
        lam = np.linalg.eigvalsh(np.conj(V) @ V.T)
        return float(lam[0]), float(lam[-1])

    def sampling_frame(self, B: ConvMatrix) -> np.ndarray:
        """``(M, |G|, K)`` table of ``S_{g,m} = T_F(T_g b_m)``."""
        G = self.group
        out = np.empty((B.cols, G.cardinality, self.dim), dtype=complex)
        for m in range(B.cols):
            for g in range(G.cardinality):
                out[m, g] = synthesize(self, translate(B.entries[:, m, :], G.element(g), G))
        return out


def restrict(gens: GeneratorSet, D: CosetDecomposition) -> GeneratorSet:
    """The same subspace seen over a subgroup ``H``: generators ``U(g_l) phi_n``, flat index ``n*L + l``."""
    model = gens.model
    if D.parent != model.group:
        raise ContractError("decomposition is not of the model's group")
    sub = HModel(
        D.subgroup,
        model.kind,
        model.src[D.embedded_indices],
        grid_shape=model.grid_shape,
        cell=model.cell,
        point_action=model.point_action,
        point_src=model.point_src,
    )
    vecs = [model.apply(rep, phi) for phi in gens.vectors for rep in D.representatives]
    return GeneratorSet(sub, np.stack(vecs))


def restrict_samplers(samplers: SamplerSet, sub_model: HModel) -> SamplerSet:
    if samplers.mode == "average":
        return SamplerSet(sub_model, "average", vectors=samplers.vectors)
    return SamplerSet(sub_model, "pointwise", points=samplers.points)


# ---------------------------------------------------------------- presets


def _periodic_distance(K: int, center: float) -> np.ndarray:
    k = np.arange(K, dtype=float)
    d = np.abs(k - center) % K
    return np.minimum(d, K - d)


def hat(K: int, q: int, center: float = 0.0) -> np.ndarray:
    """Linear B-spline of half-width one unit cell (``q`` grid steps), periodized."""
    return np.maximum(0.0, 1.0 - _periodic_distance(K, center) / q)


def box(K: int, start: int, width: int) -> np.ndarray:
    """Indicator of ``width`` consecutive grid points from ``start`` (wrapping)."""
    v = np.zeros(K)
    v[(start + np.arange(width)) % K] = 1.0
    return v


def discrete_gaussian(K: int, sigma: float, center: float = 0.0) -> np.ndarray:
    return np.exp(-0.5 * (_periodic_distance(K, center) / sigma) ** 2)


def bump2d(n: int, center=(0.0, 0.0), sigma: float = 1.0) -> np.ndarray:
    """Periodized Gaussian bump on the ``n x n`` torus, flattened row-major."""
    d1 = _periodic_distance(n, center[0])
    d2 = _periodic_distance(n, center[1])
    return np.exp(-0.5 * (d1[:, None] ** 2 + d2[None, :] ** 2) / sigma**2).ravel()


def box2d(n: int, start=(0, 0), width=(1, 1)) -> np.ndarray:
    v = np.zeros((n, n))
    rows = (start[0] + np.arange(width[0])) % n
    cols = (start[1] + np.arange(width[1])) % n
    v[np.ix_(rows, cols)] = 1.0
    return v.ravel()
