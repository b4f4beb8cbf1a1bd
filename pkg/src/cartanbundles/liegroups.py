"""Matrix Lie groups presented by a basis of their Lie algebra.

A group is never described by defining equations: membership of a matrix in
the algebra means "lies in the span of the basis within tolerance", and
coordinates are recovered by least squares with a residual gate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import numkit
from .errors import ClosureViolationError, InvalidInputError, InvalidTangentError
from .numkit import DEFAULT_TOL, Tolerances


class MatrixLieGroup:
    """A connected matrix group given by ``algebra_basis`` inside gl(n).

    Elements are handled as raw ``n x n`` arrays by the array-level methods
    (``hat``, ``vee``, ``Ad``, ...); the wrapped ``GroupElement`` and
    ``AlgebraElement`` types are used by the module-level operations.
    """

    def __init__(self, name: str, algebra_basis: Sequence, membership_tol: float = 1e-9,
                 check_closure: bool = True):
        basis = np.array([numkit.as_matrix(b, "basis element") for b in algebra_basis], dtype=float)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
            raise InvalidInputError("algebra basis must be a list of square matrices")
        self.name = name
        self.n = basis.shape[1]
        self.dim = basis.shape[0]
        self.basis = basis
        self.membership_tol = membership_tol
        self._flat = basis.reshape(self.dim, -1).T  # n^2 x dim
        if self.dim:
            rank, _ = numkit.rank_nullspace(self._flat)
            if rank != self.dim:
                raise InvalidInputError(f"{name}: algebra basis is linearly dependent")
        self._pinv = np.linalg.pinv(self._flat) if self.dim else np.zeros((0, self.n * self.n))
        self._structure = np.zeros((self.dim, self.dim, self.dim))
        for i in range(self.dim):
            for j in range(self.dim):
                comm = basis[i] @ basis[j] - basis[j] @ basis[i]
                if check_closure:
                    self._structure[:, i, j] = self.vee(comm)
                else:
                    self._structure[:, i, j] = self._pinv @ comm.ravel()

    def __repr__(self):
        return f"MatrixLieGroup({self.name!r}, n={self.n}, dim={self.dim})"

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.n)

    @property
    def structure_constants(self) -> np.ndarray:
        """``c[k, i, j]`` with ``[b_i, b_j] = sum_k c[k, i, j] b_k``."""
        return self._structure

    # -- algebra -----------------------------------------------------------
    def hat(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=float).reshape(self.dim)
        return np.tensordot(c, self.basis, axes=1) if self.dim else np.zeros((self.n, self.n))

    def vee(self, x, tol: float | None = None) -> np.ndarray:
        """Coordinates of ``x`` in the algebra basis; raises if ``x`` leaves the span."""
        x = np.asarray(x, dtype=float)
        coords = self._pinv @ x.ravel()
        residual = np.linalg.norm(self._flat @ coords - x.ravel())
        gate = self.membership_tol if tol is None else tol
        if residual > gate * max(1.0, np.linalg.norm(x)):
            raise ClosureViolationError(
                f"{self.name}: matrix is {residual:.3e} away from the algebra span"
            )
        return coords

    def in_algebra(self, x) -> float:
        x = np.asarray(x, dtype=float)
        coords = self._pinv @ x.ravel()
        return float(np.linalg.norm(self._flat @ coords - x.ravel()))

    def bracket_coords(self, a, b) -> np.ndarray:
        return np.einsum("kij,i,j->k", self._structure, np.asarray(a, float), np.asarray(b, float))

    def ad(self, coords) -> np.ndarray:
        """Matrix of ad_X on algebra coordinates."""
        return np.einsum("kij,i->kj", self._structure, np.asarray(coords, float))

    # -- group -------------------------------------------------------------
    def Ad(self, g) -> np.ndarray:
        """Matrix of Ad_g on algebra coordinates."""
        g = np.asarray(g, dtype=float)
        ginv = np.linalg.inv(g)
        flat = (g @ self.basis @ ginv).reshape(self.dim, -1).T
        coords = self._pinv @ flat
        residual = np.linalg.norm(self._flat @ coords - flat)
        if residual > self.membership_tol * max(1.0, np.linalg.norm(flat)) * max(1, self.dim):
            raise ClosureViolationError(f"{self.name}: Ad_g does not preserve the algebra")
        return coords

    def exp(self, coords) -> np.ndarray:
        return numkit.matrix_exp(self.hat(coords))

    def log(self, g, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        x = numkit.matrix_log(g, tol)
        return self.vee(x, tol=max(self.membership_tol, 1e-8))

    def right_dexp(self, coords) -> np.ndarray:
        """Matrix J(c) with (d/dt exp(c + t e_j)) exp(c)^-1 = hat(J(c) e_j)."""
        x = self.hat(coords)
        einv = numkit.matrix_exp(-x)
        cols = [self.vee(numkit.matrix_exp_derivative(x, self.basis[j]) @ einv, tol=1e-7)
                for j in range(self.dim)]
        return np.array(cols).T if cols else np.zeros((0, 0))

    def tangent_to_coords(self, g, xi) -> np.ndarray:
        """Right-translated coordinates of a tangent matrix ``xi`` at ``g``."""
        g = np.asarray(g, dtype=float)
        xi = np.asarray(xi, dtype=float)
        y = xi @ np.linalg.inv(g)
        if self.in_algebra(y) > self.membership_tol * max(1.0, np.linalg.norm(y)):
            raise InvalidTangentError(f"{self.name}: vector is not tangent at the given element")
        return self.vee(y)

    def coords_to_tangent(self, g, eta) -> np.ndarray:
        return self.hat(eta) @ np.asarray(g, dtype=float)

    def random_coords(self, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
        return rng.uniform(-scale, scale, size=self.dim)

    def random_element(self, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
        return self.exp(self.random_coords(rng, scale))


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: MatrixLieGroup
    value: np.ndarray

    def __post_init__(self):
        v = numkit.as_matrix(self.value, "group element")
        if v.shape != (self.group.n, self.group.n):
            raise InvalidInputError("group element has the wrong size")
        if abs(np.linalg.det(v)) < 1e-14:
            raise InvalidInputError("group element is not invertible")
        object.__setattr__(self, "value", v)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        _same_group(self.group, other.group)
        return GroupElement(self.group, self.value @ other.value)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, np.linalg.inv(self.value))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    group: MatrixLieGroup
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=float).reshape(self.group.dim))

    @property
    def value(self) -> np.ndarray:
        return self.group.hat(self.coords)

    @classmethod
    def from_matrix(cls, group: MatrixLieGroup, x) -> "AlgebraElement":
        return cls(group, group.vee(x))


@dataclass(frozen=True, eq=False)
class SubgroupInclusion:
    """H inside G: ``algebra_injection`` maps h-coordinates to g-coordinates and
    ``embed`` maps H matrices to G matrices."""

    sub: MatrixLieGroup
    ambient: MatrixLieGroup
    algebra_injection: np.ndarray
    embed: Callable[[np.ndarray], np.ndarray] = lambda h: np.asarray(h, dtype=float)

    def __post_init__(self):
        inj = np.asarray(self.algebra_injection, dtype=float).reshape(self.ambient.dim, self.sub.dim)
        rank, _ = numkit.rank_nullspace(inj)
        if rank != self.sub.dim:
            raise InvalidInputError("algebra injection is not injective")
        object.__setattr__(self, "algebra_injection", inj)


def _same_group(a: MatrixLieGroup, b: MatrixLieGroup):
    if a is not b:
        raise InvalidInputError(f"elements belong to different groups ({a.name}, {b.name})")


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _same_group(x.group, y.group)
    return AlgebraElement.from_matrix(x.group, x.value @ y.value - y.value @ x.value)


def adjoint(g: GroupElement, x: AlgebraElement) -> AlgebraElement:
    _same_group(g.group, x.group)
    return AlgebraElement.from_matrix(x.group, g.value @ x.value @ np.linalg.inv(g.value))


def maurer_cartan(g: GroupElement, v) -> AlgebraElement:
    """Left Maurer-Cartan form: g^-1 v for a tangent vector v at g."""
    y = np.linalg.inv(g.value) @ np.asarray(v, dtype=float)
    grp = g.group
    if grp.in_algebra(y) > grp.membership_tol * max(1.0, np.linalg.norm(y)):
        raise InvalidTangentError("vector is not tangent to the group at g")
    return AlgebraElement.from_matrix(grp, y)


def group_exp(x: AlgebraElement) -> GroupElement:
    return GroupElement(x.group, numkit.matrix_exp(x.value))


def group_log(g: GroupElement, tol: Tolerances = DEFAULT_TOL) -> AlgebraElement:
    return AlgebraElement(g.group, g.group.log(g.value, tol))


def build_semidirect(h: MatrixLieGroup, translation_dim: int | None = None,
                     name: str | None = None) -> tuple[MatrixLieGroup, SubgroupInclusion]:
    """H acting on R^n by its matrices, realized as {[[A, t], [0, 1]]} in GL(n+1)."""
    n = h.n if translation_dim is None else translation_dim
    if n != h.n:
        raise InvalidInputError("H must act on R^n by its own n x n matrices")
    basis = []
    for b in h.basis:
        e = np.zeros((n + 1, n + 1))
        e[:n, :n] = b
        basis.append(e)
    for i in range(n):
        e = np.zeros((n + 1, n + 1))
        e[i, n] = 1.0
        basis.append(e)
    g = MatrixLieGroup(name or f"{h.name}|x|R^{n}", basis, h.membership_tol)
    inj = np.vstack([np.eye(h.dim), np.zeros((n, h.dim))])

    def embed(a):
        out = np.eye(n + 1)
        out[:n, :n] = a
        return out

    incl = SubgroupInclusion(h, g, inj, embed)
    return g, incl


# -- standard algebras ------------------------------------------------------

def _unit(n, i, j):
    e = np.zeros((n, n))
    e[i, j] = 1.0
    return e


def so_basis(n: int) -> list[np.ndarray]:
    """E_ji - E_ij for i < j; for n = 3 the standard generators E_x, E_y, E_z."""
    if n == 3:
        return [_unit(3, 2, 1) - _unit(3, 1, 2),
                _unit(3, 0, 2) - _unit(3, 2, 0),
                _unit(3, 1, 0) - _unit(3, 0, 1)]
    return [_unit(n, j, i) - _unit(n, i, j) for i in range(n) for j in range(i + 1, n)]


def gl_basis(n: int) -> list[np.ndarray]:
    return [_unit(n, i, j) for i in range(n) for j in range(n)]


def so21_basis() -> list[np.ndarray]:
    """Rotation in the (x, y) plane followed by the two boosts; preserves diag(1, 1, -1)."""
    return [_unit(3, 1, 0) - _unit(3, 0, 1),
            _unit(3, 0, 2) + _unit(3, 2, 0),
            _unit(3, 1, 2) + _unit(3, 2, 1)]


def SO(n: int) -> MatrixLieGroup:
    return MatrixLieGroup(f"SO({n})", so_basis(n))


def GL(n: int) -> MatrixLieGroup:
    return MatrixLieGroup(f"GL({n})", gl_basis(n))


def SE(n: int) -> tuple[MatrixLieGroup, SubgroupInclusion]:
    return build_semidirect(SO(n), n, name=f"SE({n})")


def Aff(n: int) -> tuple[MatrixLieGroup, SubgroupInclusion]:
    return build_semidirect(GL(n), n, name=f"Aff({n})")


def named_group(name: str) -> MatrixLieGroup:
    """Parse labels such as ``SO(2)``, ``GL(3)`` or ``SO(2,1)``."""
    label = name.replace(" ", "")
    try:
        if label.startswith("SO(") and label.endswith(")"):
            args = label[3:-1].split(",")
            if len(args) == 1:
                return SO(int(args[0]))
            if args == ["2", "1"]:
                return MatrixLieGroup("SO(2,1)", so21_basis())
        if label.startswith("GL(") and label.endswith(")"):
            return GL(int(label[3:-1]))
    except ValueError:
        pass
    raise InvalidInputError(f"unknown group label {name!r}")

