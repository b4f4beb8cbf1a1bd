"""Dense linear algebra and finite differences with explicit tolerances.

Matrices are plain ``numpy`` float arrays. Subspaces carry an orthonormal
basis so that sums, intersections and comparisons reduce to projector
arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import DomainError, InvalidInputError

LOG_SQRT_BUDGET = 16


@dataclass(frozen=True)
class Tolerances:
    exact_tol: float = 1e-9
    fd_tol: float = 1e-4
    fd_step: float = 1e-5
    rank_rel_tol: float = 1e-10

    def __post_init__(self):
        for name in ("exact_tol", "fd_tol", "fd_step", "rank_rel_tol"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be strictly positive")
        if not self.fd_tol > self.exact_tol:
            raise InvalidInputError("fd_tol must exceed exact_tol")


DEFAULT_TOL = Tolerances()


def as_matrix(m, name="matrix") -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise InvalidInputError(f"{name} must be two-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return a


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of the orthonormal columns of ``basis`` inside R^ambient_dim."""

    ambient_dim: int
    basis: np.ndarray
    tol: float = DEFAULT_TOL.exact_tol
    _projector: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float).reshape(self.ambient_dim, -1)
        if b.shape[1] > self.ambient_dim:
            raise InvalidInputError("more basis vectors than the ambient dimension")
        if b.shape[1] and not np.allclose(b.T @ b, np.eye(b.shape[1]), atol=max(self.tol, 1e-12) * 10):
            raise InvalidInputError("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "_projector", b @ b.T)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self._projector

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        """Orthonormalize the columns of ``vectors`` (rank-revealing)."""
        v = np.asarray(vectors, dtype=float)
        if ambient_dim is None:
            ambient_dim = v.shape[0]
        v = v.reshape(ambient_dim, -1)
        if v.shape[1] == 0:
            return cls.zero(ambient_dim, tol.exact_tol)
        u, s, _ = np.linalg.svd(v, full_matrices=False)
        r = _numerical_rank(s, v.shape, tol)
        return cls(ambient_dim, u[:, :r], tol.exact_tol)

    @classmethod
    def zero(cls, ambient_dim: int, tol: float = DEFAULT_TOL.exact_tol) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)), tol)

    @classmethod
    def full(cls, ambient_dim: int, tol: float = DEFAULT_TOL.exact_tol) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim), tol)

    def contains(self, v) -> float:
        """Distance of ``v`` from the subspace (0 when inside)."""
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self._projector @ v))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _numerical_rank(s: np.ndarray, shape, tol: Tolerances) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = tol.rank_rel_tol * max(shape) * s[0]
    return int(np.count_nonzero(s > cutoff))


def rank_nullspace(m, tol: Tolerances = DEFAULT_TOL) -> tuple[int, Subspace]:
    """Numerical rank and kernel of ``m``.

    Kernel columns are ordered by ascending singular value.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return 0, Subspace.full(cols, tol.exact_tol)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    r = _numerical_rank(s, a.shape, tol)
    kernel = vt[r:].T[:, ::-1]
    return r, Subspace(cols, np.ascontiguousarray(kernel), tol.exact_tol)


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise InvalidInputError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )


def max_principal_angle(a: Subspace, b: Subspace) -> float:
    """Largest principal angle; pi/2 when the dimensions differ and one is empty."""
    _check_ambient(a, b)
    if a.dim == 0 and b.dim == 0:
        return 0.0
    if a.dim == 0 or b.dim == 0:
        return float(np.pi / 2)
    return float(np.max(scipy.linalg.subspace_angles(a.basis, b.basis)))


def subspace_compare(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float]:
    angle = max_principal_angle(a, b)
    return (a.dim == b.dim and angle < tol.exact_tol), angle


def subspace_distance(a: Subspace, b: Subspace) -> float:
    """Residual for subspace equality: the max angle, or pi/2 on dim mismatch."""
    _check_ambient(a, b)
    if a.dim != b.dim:
        return float(np.pi / 2)
    return max_principal_angle(a, b)


def subspace_sum(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    _check_ambient(a, b)
    return Subspace.span(np.hstack([a.basis, b.basis]), a.ambient_dim, tol)


def subspace_intersection(a: Subspace, b: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    _check_ambient(a, b)
    n = a.ambient_dim
    stacked = np.vstack([np.eye(n) - a.projector, np.eye(n) - b.projector])
    _, kernel = rank_nullspace(stacked, tol)
    return kernel


def matrix_exp(x) -> np.ndarray:
    a = as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError("matrix_exp needs a square matrix")
    return scipy.linalg.expm(a)


def matrix_exp_derivative(x, direction) -> np.ndarray:
    """d/dt exp(x + t*direction) at t = 0 (Frechet derivative, no differencing)."""
    return scipy.linalg.expm_frechet(np.asarray(x, float), np.asarray(direction, float),
                                     compute_expm=False)


def matrix_log(g, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Principal real logarithm by inverse scaling and squaring."""
    a = as_matrix(g)
    n = a.shape[0]
    if a.shape[1] != n:
        raise InvalidInputError("matrix_log needs a square matrix")
    eye = np.eye(n)
    k = 0
    while np.linalg.norm(a - eye, 2) >= 0.25:
        if k == LOG_SQRT_BUDGET:
            raise DomainError("matrix_log: square-root budget exhausted; sample closer to the identity")
        root = scipy.linalg.sqrtm(a)
        if np.iscomplexobj(root):
            if np.max(np.abs(root.imag)) > 1e-8 * max(1.0, np.max(np.abs(root.real))):
                raise DomainError("matrix_log: no real principal logarithm")
            root = root.real
        if not np.all(np.isfinite(root)):
            raise DomainError("matrix_log: square root diverged")
        a = root
        k += 1
    # log(a) = 2 artanh(z), z = (a - I)(a + I)^-1, ||z|| < 1/7
    z = np.linalg.solve((a + eye).T, (a - eye).T).T
    z2 = z @ z
    term = z.copy()
    total = z.copy()
    for j in range(3, 61, 2):
        term = term @ z2
        inc = term / j
        total += inc
        if np.linalg.norm(inc) < 1e-18 * max(1.0, np.linalg.norm(total)):
            break
    out = 2.0 * total * (2.0 ** k)
    if np.linalg.norm(matrix_exp(out) - as_matrix(g)) > max(tol.exact_tol, 1e-9) * max(1.0, np.linalg.norm(g)):
        raise DomainError("matrix_log: roundtrip check failed")
    return out


def fd_partial(f: Callable[[np.ndarray], object], x, direction, step: float = DEFAULT_TOL.fd_step):
    """Central difference of ``f`` at ``x`` along ``direction``."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)
    plus = np.asarray(f(x + step * d), dtype=float)
    minus = np.asarray(f(x - step * d), dtype=float)
    return (plus - minus) / (2.0 * step)


def fd_jacobian(f: Callable[[np.ndarray], object], x, step: float = DEFAULT_TOL.fd_step) -> list:
    """Central differences along every coordinate axis of ``x``."""
    x = np.asarray(x, dtype=float)
    eye = np.eye(x.size)
    return [fd_partial(f, x, eye[i], step) for i in range(x.size)]


def row_space_projector(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the row space of ``m``; smooth where rank is constant."""
    a = as_matrix(m)
    _, s, vt = np.linalg.svd(a, full_matrices=False)
    r = _numerical_rank(s, a.shape, tol)
    vr = vt[:r].T
    return vr @ vr.T


def kernel_projector(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    a = as_matrix(m)
    return np.eye(a.shape[1]) - row_space_projector(a, tol)
