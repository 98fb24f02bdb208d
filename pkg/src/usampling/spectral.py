"""Fourier analysis on ``l^2(G)`` and transfer fields of convolution systems.

Signals are complex arrays whose *last* axis has length ``|G|`` and follows the
group enumeration order, so a bundle of ``N`` signals is an ``(N, |G|)`` array
and the entries of an ``M x N`` convolution matrix form an ``(M, N, |G|)``
array. The transform is

    X(xi) = sum_g x(g) conj(<g, xi>),      x(g) = |G|^{-1} sum_xi X(xi) <g, xi>,

i.e. exactly the multidimensional DFT, which is what ``numpy.fft.fftn`` computes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian_group import GroupSpec
from .errors import ContractError


def as_signal(x, G: GroupSpec) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim == 0 or x.shape[-1] != G.cardinality:
        raise ContractError(f"signal length {x.shape[-1:] or 0} does not match |G|={G.cardinality}")
    if not np.all(np.isfinite(x)):
        raise ContractError("signal has non-finite entries")
    return x


def _grid(x: np.ndarray, G: GroupSpec) -> np.ndarray:
    return x.reshape(x.shape[:-1] + G.orders)


def _axes(x: np.ndarray, G: GroupSpec) -> tuple:
    return tuple(range(x.ndim - 1, x.ndim - 1 + G.rank))


def fourier(x, G: GroupSpec) -> np.ndarray:
    """Fourier transform along the last axis."""
    x = as_signal(x, G)
    X = np.fft.fftn(_grid(x, G), axes=_axes(x, G))
    return X.reshape(x.shape)


def inverse_fourier(X, G: GroupSpec) -> np.ndarray:
    X = as_signal(X, G)
    x = np.fft.ifftn(_grid(X, G), axes=_axes(X, G))
    return x.reshape(X.shape)


def norm2(x) -> float:
    """Squared ``l^2`` norm over every axis (the norm of ``l^2_N(G)`` for bundles)."""
    return float(np.vdot(x, x).real)


def inner(x, y) -> complex:
    """``<x, y>``, linear in the first argument."""
    return complex(np.vdot(y, x))


def group_convolve(a, x, G: GroupSpec) -> np.ndarray:
    """Scalar convolution ``(a * x)(g) = sum_h a(g - h) x(h)`` via the transform."""
    return inverse_fourier(fourier(a, G) * fourier(x, G), G)


@dataclass(frozen=True)
class TransferField:
    """The matrices ``A_hat(xi)`` for every character ``xi``, stored as ``(|G|, M, N)``."""

    group: GroupSpec
    matrices: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=complex)
        if m.ndim != 3 or m.shape[0] != self.group.cardinality:
            raise ContractError(f"transfer field needs shape (|G|, M, N) with |G|={self.group.cardinality}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def rows(self) -> int:
        return self.matrices.shape[1]

    @property
    def cols(self) -> int:
        return self.matrices.shape[2]

    def at(self, xi) -> np.ndarray:
        return self.matrices[self.group.index(xi)]

    def adjoint(self) -> "TransferField":
        return TransferField(self.group, np.conj(np.swapaxes(self.matrices, 1, 2)))

    def __matmul__(self, other: "TransferField") -> "TransferField":
        if other.group != self.group or self.cols != other.rows:
            raise ContractError("transfer fields are not composable")
        return TransferField(self.group, self.matrices @ other.matrices)

    def entries(self) -> np.ndarray:
        """Inverse transform back to the ``(M, N, |G|)`` convolution-matrix entries."""
        return inverse_fourier(np.moveaxis(self.matrices, 0, -1), self.group)


def transfer_field(A) -> TransferField:
    """Entrywise Fourier transform of a convolution matrix (anything with ``group`` and ``entries``)."""
    F = fourier(A.entries, A.group)
    return TransferField(A.group, np.moveaxis(F, -1, 0))
