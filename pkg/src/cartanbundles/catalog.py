"""Ready-made geometries with golden verdicts.

Names accept a parameter suffix, e.g. ``euclidean`` with ``{"n": 3}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cartan import (CartanBundle, CartanGauge, ChartBundle, Coefficients, GStructure,
                     gstructure_bundle, model_to_cartan)
from .errors import CatalogError, InvalidInputError
from .klein import ModelGeometry, ReductiveSplitting
from .liegroups import Aff, MatrixLieGroup, SE, SO, SubgroupInclusion, so21_basis, so_basis


def _translations(model: ModelGeometry) -> ReductiveSplitting:
    d, D = model.pair.h_dim, model.g.dim
    return ReductiveSplitting(model.pair.h_coords, np.vstack([np.zeros((d, D - d)), np.eye(D - d)]))


def _planar_rotation_in(n3_basis, name: str, radius: float) -> CartanBundle:
    """G in GL(3) whose first generator rotates the (x, y) plane; H = SO(2) there."""
    G = MatrixLieGroup(name, n3_basis)
    H = SO(2)

    def embed(h):
        out = np.eye(3)
        out[:2, :2] = h
        return out

    incl = SubgroupInclusion(H, G, np.array([[1.0], [0.0], [0.0]]), embed)
    model = ModelGeometry.from_inclusion(incl, name=name)
    split = ReductiveSplitting(incl.algebra_injection, np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    return model_to_cartan(model, split, radius, name)


def euclidean(n: int = 2) -> CartanBundle:
    G, incl = SE(n)
    model = ModelGeometry.from_inclusion(incl, name=f"euclidean{n}", semidirect=True)
    return model_to_cartan(model, _translations(model), 1.0, f"euclidean{n}")


def affine(n: int = 2) -> CartanBundle:
    G, incl = Aff(n)
    model = ModelGeometry.from_inclusion(incl, name=f"affine{n}", semidirect=True)
    return model_to_cartan(model, _translations(model), 1.0, f"affine{n}")


def sphere2() -> CartanBundle:
    # so(3) ordered (E_z, E_x, E_y): E_z rotates the (x, y) plane
    b = so_basis(3)
    return _planar_rotation_in([b[2], b[0], b[1]], "sphere2", 0.5)


def hyperbolic2() -> CartanBundle:
    return _planar_rotation_in(so21_basis(), "hyperbolic2", 0.5)


def _box(n: int, radius: float = 1.0):
    return -radius * np.ones(n), radius * np.ones(n)


def riemannian_flat(n: int = 2) -> CartanBundle:
    lo, hi = _box(n)
    return gstructure_bundle(GStructure(ChartBundle(lo, hi, SO(n)), lambda x: np.eye(n)),
                             f"riemannian_flat{n}")


def default_metric(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.eye(x.size) + np.outer(x, x)


def riemannian(metric: Callable[[np.ndarray], np.ndarray] = default_metric, n: int = 2) -> CartanBundle:
    """O(n)-structure of orthonormal frames; coframe L^T from g = L L^T."""
    lo, hi = _box(n)

    def coframe(x):
        return np.linalg.cholesky(np.asarray(metric(x), dtype=float)).T

    return gstructure_bundle(GStructure(ChartBundle(lo, hi, SO(n)), coframe), "riemannian")


def perturbed_euclidean(f: Callable[[np.ndarray], float] | None = None) -> CartanBundle:
    """Euclidean gauge plus f(x) J dx; with f = y the curvature is -J - y e1."""
    f = (lambda x: x[1]) if f is None else f
    base = euclidean(2)
    A0 = base.gauge.A

    def A(x):
        a = np.array(A0(x), dtype=float)
        a[0, 0] += f(x)
        return a

    return CartanBundle(base.bundle, base.V, CartanGauge(A, base.gauge.lam), base.model, base.split,
                        "perturbed_euclidean")


def _connection_bundle(gamma, name) -> CartanBundle:
    H = SO(2)
    lo, hi = _box(2)
    return CartanBundle(ChartBundle(lo, hi, H), Coefficients(1, lambda h: np.eye(1)),
                        CartanGauge(gamma, np.eye(1)), name=name)


def connection_counterexample() -> CartanBundle:
    """A flat so(2)-connection used as theta: kernel is horizontal, not vertical."""
    return _connection_bundle(lambda x: np.array([[x[1], x[0]]]), "connection_counterexample")


def connection_counterexample_curved() -> CartanBundle:
    """Same with a curved connection: the kernel is not involutive either."""
    return _connection_bundle(lambda x: np.array([[0.0, x[0]]]), "connection_counterexample_curved")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable[..., CartanBundle]
    params: dict = field(default_factory=dict)
    geometry: bool = True  # a Cartan geometry (theta valued in g, pointwise iso)
    symbol_dim: int | None = 0  # dim of the symbol space, None when not a Cartan bundle
    flat: bool | None = None
    torsion_free: bool | None = None
    failing: tuple = ()  # checks of the bundle suite expected to fail
    description: str = ""


ENTRIES = {
    "euclidean": CatalogEntry("euclidean", euclidean, {"n": 2}, flat=True, torsion_free=True,
                              description="SE(n)/SO(n) model geometry"),
    "affine": CatalogEntry("affine", affine, {"n": 2}, flat=True, torsion_free=True,
                           description="Aff(n)/GL(n) model geometry"),
    "sphere2": CatalogEntry("sphere2", sphere2, flat=True, description="SO(3)/SO(2) model geometry"),
    "hyperbolic2": CatalogEntry("hyperbolic2", hyperbolic2, flat=True,
                                description="SO(2,1)/SO(2) model geometry"),
    "riemannian_flat": CatalogEntry("riemannian_flat", riemannian_flat, {"n": 2}, geometry=False,
                                    symbol_dim=-1, description="O(n)-structure of the flat metric"),
    "riemannian": CatalogEntry("riemannian", riemannian, geometry=False, symbol_dim=-1,
                               description="O(2)-structure of the metric I + x x^T"),
    "perturbed_euclidean": CatalogEntry("perturbed_euclidean", perturbed_euclidean, flat=False,
                                        description="euclidean gauge plus y J dx"),
    "connection_counterexample": CatalogEntry(
        "connection_counterexample", connection_counterexample, geometry=False, symbol_dim=None,
        failing=("ker_theta_vertical",), description="flat connection form used as theta"),
    "connection_counterexample_curved": CatalogEntry(
        "connection_counterexample_curved", connection_counterexample_curved, geometry=False,
        symbol_dim=None, failing=("ker_theta_vertical", "ker_theta_involutive"),
        description="curved connection form used as theta"),
}


def entry(name: str) -> CatalogEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}") from None


def names() -> list[str]:
    return list(ENTRIES)


def build(name: str, params: dict | None = None) -> CartanBundle:
    e = entry(name)
    kwargs = dict(e.params)
    kwargs.update(params or {})
    try:
        return e.builder(**kwargs)
    except TypeError as exc:
        raise InvalidInputError(f"bad parameters for {name}: {exc}") from None


def expected_symbol_dim(name: str, cb: CartanBundle) -> int | None:
    """-1 in the table stands for dim h."""
    s = entry(name).symbol_dim
    return cb.d if s == -1 else s


def expected_report(name: str) -> list[tuple[str, str]]:
    """Golden verdicts for the default suites (bundle, then groupoid when applicable)."""
    from .verify import default_check_names

    e = entry(name)
    cb_checks = default_check_names("bundle", geometry=e.geometry)
    out = [(c, "fail" if c in e.failing else "pass") for c in cb_checks]
    if not e.failing:
        out += [(c, "pass") for c in default_check_names("pfaffian")]
    return out
