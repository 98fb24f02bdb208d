"""Finite abelian groups ``Z_{s_1} x ... x Z_{s_d}``.

Elements and characters share the index space ``{0..s_1-1} x ... x {0..s_d-1}``
and are enumerated lexicographically (last coordinate fastest). That order is
the flat layout of every signal, spectrum and file in the package.

Infinite lattices such as ``Z^d`` are modelled by periodization, so every
"essential inf/sup over the dual group" elsewhere in the package is an exact
min/max over the ``|G|`` characters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError, InvalidActionError, InvalidSpecError, InvalidSubgroupError

Coords = Union[int, Sequence[int]]


@dataclass(frozen=True)
class GroupSpec:
    """The group ``Z_{s_1} x ... x Z_{s_d}`` given by its cyclic orders."""

    orders: tuple

    def __post_init__(self):
        try:
            orders = tuple(int(s) for s in self.orders)
        except (TypeError, ValueError) as exc:
            raise InvalidSpecError(f"orders must be integers, got {self.orders!r}") from exc
        if not orders:
            raise InvalidSpecError("a group needs at least one cyclic factor")
        if any(s < 1 for s in orders):
            raise InvalidSpecError(f"every order must be >= 1, got {orders}")
        object.__setattr__(self, "orders", orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def cardinality(self) -> int:
        return int(np.prod(self.orders))

    def __len__(self):
        return self.cardinality

    @cached_property
    def elements(self) -> np.ndarray:
        """``(|G|, d)`` integer array of all coordinates in enumeration order."""
        grids = np.meshgrid(*[np.arange(s) for s in self.orders], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def coords(self, g: Coords) -> tuple:
        """Validate ``g`` and return it as a coordinate tuple."""
        c = (int(g),) if np.ndim(g) == 0 else tuple(int(v) for v in g)
        if len(c) != self.rank:
            raise DomainError(f"expected {self.rank} coordinates, got {c}")
        for v, s in zip(c, self.orders):
            if not 0 <= v < s:
                raise DomainError(f"coordinate {v} out of range [0, {s}) in {c}")
        return c

    def reduce(self, g: Coords) -> tuple:
        """Reduce arbitrary integer coordinates modulo the orders."""
        c = (int(g),) if np.ndim(g) == 0 else tuple(int(v) for v in g)
        if len(c) != self.rank:
            raise DomainError(f"expected {self.rank} coordinates, got {c}")
        return tuple(v % s for v, s in zip(c, self.orders))

    def index(self, g: Coords) -> int:
        """Flat (lexicographic) index of an element."""
        return int(np.ravel_multi_index(self.coords(g), self.orders))

    def element(self, i: int) -> tuple:
        if not 0 <= i < self.cardinality:
            raise DomainError(f"flat index {i} out of range for |G|={self.cardinality}")
        return tuple(int(v) for v in np.unravel_index(i, self.orders))

    def add(self, g: Coords, h: Coords) -> tuple:
        return self.reduce(np.add(self.coords(g), self.coords(h)))

    def neg(self, g: Coords) -> tuple:
        return self.reduce(np.negative(self.coords(g)))

    def sub(self, g: Coords, h: Coords) -> tuple:
        return self.reduce(np.subtract(self.coords(g), self.coords(h)))

    @cached_property
    def neg_indices(self) -> np.ndarray:
        """``neg_indices[i]`` is the flat index of ``-g_i``."""
        neg = (-self.elements) % np.asarray(self.orders)
        return np.ravel_multi_index(tuple(neg.T), self.orders)

    def shifted_indices(self, g: Coords) -> np.ndarray:
        """Flat indices of ``h - g`` for every ``h`` (the source map of ``T_g``)."""
        src = (self.elements - np.asarray(self.coords(g))) % np.asarray(self.orders)
        return np.ravel_multi_index(tuple(src.T), self.orders)

    def to_json(self) -> dict:
        return {"orders": list(self.orders)}

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if not isinstance(obj, dict) or "orders" not in obj:
            raise InvalidSpecError(f"group must be an object with 'orders', got {obj!r}")
        return cls(tuple(obj["orders"]))


def make_group(orders) -> GroupSpec:
    if np.ndim(orders) == 0:
        orders = [orders]
    return GroupSpec(tuple(orders))


def character_value(G: GroupSpec, g: Coords, xi: Coords) -> complex:
    """``<g, xi> = prod_i exp(2 pi i g_i xi_i / s_i)``."""
    g, xi = G.coords(g), G.coords(xi)
    phase = sum((gi * xii % s) / s for gi, xii, s in zip(g, xi, G.orders))
    return complex(np.exp(2j * np.pi * phase))


def character_table(G: GroupSpec) -> np.ndarray:
    """Dense ``|G| x |G|`` table ``T[g, xi] = <g, xi>`` built from the direct formula."""
    E = G.elements
    phase = np.zeros((G.cardinality, G.cardinality))
    for i, s in enumerate(G.orders):
        phase += np.mod(np.outer(E[:, i], E[:, i]), s) / s
    return np.exp(2j * np.pi * phase)


def haar_integral(G: GroupSpec, X: Union[Callable, Sequence[complex], np.ndarray]) -> complex:
    """Integral over the dual group for the normalized Haar measure (total mass 1)."""
    if callable(X):
        vals = np.array([X(tuple(int(v) for v in xi)) for xi in G.elements], dtype=complex)
    else:
        vals = np.asarray(X, dtype=complex).ravel()
        if vals.size != G.cardinality:
            raise DomainError(f"expected {G.cardinality} values, got {vals.size}")
    return complex(vals.mean())


@dataclass(frozen=True)
class CosetDecomposition:
    """``G = (g_1 + H) u ... u (g_L + H)`` for ``H = t_1 Z_{s_1} x ... x t_d Z_{s_d}``.

    ``steps`` are the ``t_i``; the subgroup is isomorphic to the group with orders
    ``s_i / t_i`` and the canonical representatives have ``coords[i] in [0, t_i)``.
    """

    parent: GroupSpec
    steps: tuple
    subgroup: GroupSpec = field(init=False)
    representatives: tuple = field(init=False)

    def __post_init__(self):
        steps = tuple(int(t) for t in self.steps)
        if len(steps) != self.parent.rank:
            raise InvalidSubgroupError(f"need {self.parent.rank} steps, got {steps}")
        for t, s in zip(steps, self.parent.orders):
            if t < 1 or s % t:
                raise InvalidSubgroupError(f"step {t} does not divide order {s}")
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "subgroup", GroupSpec(tuple(s // t for s, t in zip(self.parent.orders, steps))))
        reps = [tuple(int(v) for v in r) for r in GroupSpec(steps).elements]
        object.__setattr__(self, "representatives", tuple(reps))

    @property
    def index(self) -> int:
        return len(self.representatives)

    def embed(self, h: Coords) -> tuple:
        """Coordinates in ``G`` of the subgroup element with ``H``-coordinates ``h``."""
        h = self.subgroup.coords(h)
        return tuple(t * v for t, v in zip(self.steps, h))

    @cached_property
    def embedded_indices(self) -> np.ndarray:
        """Flat ``G``-indices of the subgroup elements, in ``H`` enumeration order."""
        E = self.subgroup.elements * np.asarray(self.steps)
        return np.ravel_multi_index(tuple(E.T), self.parent.orders)

    def locate(self, g: Coords) -> tuple:
        """Return ``(l, h)`` with ``g = g_l + embed(h)``."""
        g = self.parent.coords(g)
        rep = tuple(v % t for v, t in zip(g, self.steps))
        h = tuple(v // t for v, t in zip(g, self.steps))
        return self.representatives.index(rep), h


def coset_decompose(G: GroupSpec, steps) -> CosetDecomposition:
    if np.ndim(steps) == 0:
        steps = [steps]
    return CosetDecomposition(G, tuple(steps))


class PointAction:
    """A finite group of integer orthogonal matrices acting on ``G`` coordinates.

    The first matrix must be the identity. The set must be closed under matrix
    products and every matrix must induce a well-defined bijection of ``G``.
    """

    def __init__(self, matrices, group: GroupSpec):
        mats = []
        for m in matrices:
            a = np.asarray(m)
            if a.shape != (group.rank, group.rank):
                raise InvalidActionError(f"matrix shape {a.shape} does not match rank {group.rank}")
            if not np.all(np.equal(np.mod(a, 1), 0)):
                raise InvalidActionError(f"non-integer matrix {a.tolist()}")
            mats.append(a.astype(np.int64))
        if not mats:
            raise InvalidActionError("a point group needs at least the identity")
        self.group = group
        self.matrices = tuple(mats)
        self._validate()
        self._table = np.stack([self._image_indices(m) for m in self.matrices])

    def _validate(self):
        d = self.group.rank
        if not np.array_equal(self.matrices[0], np.eye(d, dtype=np.int64)):
            raise InvalidActionError("the first element must be the identity")
        orders = np.asarray(self.group.orders)
        for m in self.matrices:
            if not np.array_equal(m.T @ m, np.eye(d, dtype=np.int64)):
                raise InvalidActionError(f"matrix {m.tolist()} is not orthogonal")
            # gamma must respect g ~ g + s_j e_j in every target coordinate
            if np.any(np.mod(m * orders[None, :], orders[:, None])):
                raise InvalidActionError(f"matrix {m.tolist()} does not preserve the group {self.group.orders}")
        keys = {m.tobytes() for m in self.matrices}
        if len(keys) != len(self.matrices):
            raise InvalidActionError("duplicate point-group elements")
        for a in self.matrices:
            for b in self.matrices:
                if (a @ b).tobytes() not in keys:
                    raise InvalidActionError("point group is not closed under composition")

    def _image_indices(self, m) -> np.ndarray:
        img = (self.group.elements @ m.T) % np.asarray(self.group.orders)
        idx = np.ravel_multi_index(tuple(img.T), self.group.orders)
        if len(np.unique(idx)) != self.group.cardinality:
            raise InvalidActionError(f"matrix {m.tolist()} is not a bijection of the group")
        return idx

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def position(self, m) -> int:
        """Position of matrix ``m`` in the element list."""
        key = np.asarray(m, dtype=np.int64).tobytes()
        for i, a in enumerate(self.matrices):
            if a.tobytes() == key:
                return i
        raise InvalidActionError(f"{np.asarray(m).tolist()} is not an element of the point group")

    def compose(self, i: int, j: int) -> int:
        """Position of ``gamma_i gamma_j``."""
        return self.position(self.matrices[i] @ self.matrices[j])

    def inverse(self, i: int) -> int:
        return self.position(self.matrices[i].T)

    def act(self, i: int, g: Coords, transpose: bool = False) -> tuple:
        """``gamma_i g`` (or ``gamma_i^T g``) reduced modulo the orders."""
        m = self.matrices[i].T if transpose else self.matrices[i]
        return self.group.reduce(m @ np.asarray(self.group.coords(g)))

    def permutation(self, i: int) -> np.ndarray:
        """Flat indices ``perm[k] = index(gamma_i g_k)``."""
        return self._table[i]

    def to_json(self) -> list:
        return [m.tolist() for m in self.matrices]


def act(gamma: np.ndarray, g: Coords, G: GroupSpec, transpose: bool = False) -> tuple:
    """Apply a single integer matrix to ``g`` modulo the orders of ``G``."""
    m = np.asarray(gamma, dtype=np.int64)
    if transpose:
        m = m.T
    return G.reduce(m @ np.asarray(G.coords(g)))


def cyclic_rotations(n: int) -> list:
    """Integer rotation matrices of the planar cyclic group ``C_n`` (``n`` in 1, 2, 4)."""
    if n not in (1, 2, 4):
        raise InvalidActionError(f"C_{n} has no integer representation on Z^2")
    r = np.array([[0, -1], [1, 0]])
    step = np.linalg.matrix_power(r, 4 // n)
    return [np.linalg.matrix_power(step, k) for k in range(n)]


def dihedral_group(n: int) -> list:
    """``D_n`` for ``n`` in 1, 2, 4: rotations followed by their products with a reflection."""
    rots = cyclic_rotations(n)
    flip = np.array([[1, 0], [0, -1]])
    return rots + [r @ flip for r in rots]
