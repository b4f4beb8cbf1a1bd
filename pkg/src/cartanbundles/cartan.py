"""Chart-trivialized principal bundles with equivariant vector-valued 1-forms.

Points of P = U x H are pairs ``(x, h)``. A tangent vector at ``(x, h)`` is a
pair ``(v, eta)`` flattened to one array of length ``m + d``: ``v`` is the
chart component and ``eta`` the coordinates of the right translate
``xi h^-1`` of the vertical component ``xi``. Right translation by ``k``
leaves ``(v, eta)`` unchanged, which keeps every pushforward explicit.

The form theta is stored along the section ``h = e`` as a gauge ``A(x)`` plus
a constant map ``lam`` on h, and extended by

    theta_(x, h)(v, eta) = rho(h^-1) (A(x) v + lam eta).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import numkit
from .errors import DomainError, InvalidInputError, StencilError, UnsupportedModelError
from .klein import ModelGeometry, ReductiveSplitting
from .liegroups import MatrixLieGroup, build_semidirect
from .numkit import DEFAULT_TOL, Subspace, Tolerances
from .report import CheckReport
from .sampling import Check, Sampler, algebra_coords, run_check, tangent, uniform_in_box


@dataclass(frozen=True, eq=False)
class ChartBundle:
    """The trivial bundle over the open box ``lower < x < upper``."""

    lower: np.ndarray
    upper: np.ndarray
    H: MatrixLieGroup

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float).ravel()
        hi = np.asarray(self.upper, dtype=float).ravel()
        if lo.shape != hi.shape or not np.all(lo < hi):
            raise InvalidInputError("chart box needs lower < upper in every coordinate")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def m(self) -> int:
        return self.lower.size

    def contains(self, x, margin: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x > self.lower + margin) and np.all(x < self.upper - margin))

    @staticmethod
    def project(x, h):
        return np.asarray(x, dtype=float)

    @staticmethod
    def act(x, h, k):
        return x, np.asarray(h) @ np.asarray(k)


@dataclass(frozen=True, eq=False)
class Coefficients:
    dim: int
    rho: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class CartanGauge:
    A: Callable[[np.ndarray], np.ndarray]
    lam: np.ndarray
    closed_form: bool = True


@dataclass(frozen=True, eq=False)
class CartanBundle:
    bundle: ChartBundle
    V: Coefficients
    gauge: CartanGauge
    model: ModelGeometry | None = None
    split: ReductiveSplitting | None = None
    name: str = ""

    def __post_init__(self):
        lam = np.asarray(self.gauge.lam, dtype=float).reshape(self.V.dim, self.H.dim)
        object.__setattr__(self, "gauge", CartanGauge(self.gauge.A, lam, self.gauge.closed_form))

    @property
    def H(self) -> MatrixLieGroup:
        return self.bundle.H

    @property
    def m(self) -> int:
        return self.bundle.m

    @property
    def d(self) -> int:
        return self.H.dim

    @property
    def r(self) -> int:
        return self.V.dim

    @property
    def tangent_dim(self) -> int:
        return self.m + self.d

    def A(self, x) -> np.ndarray:
        a = np.asarray(self.gauge.A(np.asarray(x, dtype=float)), dtype=float).reshape(self.r, self.m)
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("gauge is not finite at the requested point")
        return a

    def rho(self, h) -> np.ndarray:
        return np.asarray(self.V.rho(np.asarray(h, dtype=float)), dtype=float).reshape(self.r, self.r)

    def theta_matrix(self, x, h) -> np.ndarray:
        """theta at (x, h) as an r x (m + d) matrix acting on (v, eta)."""
        local = np.hstack([self.A(x), self.gauge.lam])
        return self.rho(np.linalg.inv(h)) @ local

    def theta(self, x, h, w) -> np.ndarray:
        return self.theta_matrix(x, h) @ np.asarray(w, dtype=float)

    def fundamental(self, h, w) -> np.ndarray:
        """Tangent (0, eta) of the fundamental vector field of ``w`` in h at ``h``."""
        xi = np.asarray(h) @ self.H.hat(w)
        return np.concatenate([np.zeros(self.m), self.H.tangent_to_coords(h, xi)])

    def theta_chart(self, h0) -> Callable[[np.ndarray], np.ndarray]:
        """theta in the chart (x, c) -> (x, exp(c) h0), on chart-coordinate vectors."""
        m, d, H = self.m, self.d, self.H
        h0 = np.asarray(h0, dtype=float)

        def f(pt):
            pt = np.asarray(pt, dtype=float)
            x, c = pt[:m], pt[m:]
            jac = np.eye(m + d)
            jac[m:, m:] = H.right_dexp(c)
            return self.theta_matrix(x, H.exp(c) @ h0) @ jac

        return f


def theta_eval(cb: CartanBundle, x, h, v, xi) -> np.ndarray:
    """theta at (x, h) on the tangent (v, xi), with ``xi`` a matrix tangent to H at ``h``."""
    eta = cb.H.tangent_to_coords(h, xi)
    return cb.theta(x, h, np.concatenate([np.asarray(v, float).ravel(), eta]))


# -- gauges -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GStructure:
    """H-structure on the chart: frames at x are ``coframe(x)^-1 h``."""

    chart: ChartBundle
    coframe: Callable[[np.ndarray], np.ndarray]

    @property
    def H(self) -> MatrixLieGroup:
        return self.chart.H

    @property
    def n(self) -> int:
        return self.chart.H.n


@dataclass(frozen=True, eq=False)
class ConnectionForm:
    """Connection in the gauge of the identity section: x -> (dim h x m) matrix."""

    gamma: Callable[[np.ndarray], np.ndarray]


def tautological_form(gs: GStructure, x, p, v, pdot=None) -> np.ndarray:
    p = numkit.as_matrix(p, "frame")
    if p.shape != (gs.n, gs.n) or abs(np.linalg.det(p)) < 1e-14:
        raise InvalidInputError("frame must be an invertible n x n matrix")
    return np.linalg.solve(p, np.asarray(v, dtype=float))


def gstructure_bundle(gs: GStructure, name: str = "") -> CartanBundle:
    """The H-structure with its tautological form as a Cartan bundle (V = R^n)."""
    n = gs.n
    return CartanBundle(gs.chart, Coefficients(n, lambda h: np.asarray(h, dtype=float)),
                        CartanGauge(gs.coframe, np.zeros((n, gs.H.dim))), name=name)


def semidirect_model(H: MatrixLieGroup) -> tuple[ModelGeometry, ReductiveSplitting]:
    G, incl = build_semidirect(H)
    model = ModelGeometry.from_inclusion(incl, semidirect=True)
    l_frame = np.vstack([np.zeros((H.dim, H.n)), np.eye(H.n)])
    return model, ReductiveSplitting(incl.algebra_injection, l_frame)


def gstructure_to_cartan(gs: GStructure, gamma: ConnectionForm, name: str = "") -> CartanBundle:
    """theta = gamma + tautological form, valued in h + R^n."""
    model, split = semidirect_model(gs.H)
    d, n = gs.H.dim, gs.n

    def A(x):
        return np.vstack([np.asarray(gamma.gamma(x), float).reshape(d, -1),
                          np.asarray(gs.coframe(x), float).reshape(n, -1)])

    return CartanBundle(gs.chart, Coefficients(d + n, model.rho),
                        CartanGauge(A, model.pair.h_coords), model, split, name)


def cartan_to_gstructure(cb: CartanBundle) -> tuple[GStructure, ConnectionForm]:
    if cb.model is None or not cb.model.semidirect or cb.split is None:
        raise UnsupportedModelError("the H-structure correspondence needs an H x| R^n model")
    if not np.allclose(cb.gauge.lam, cb.model.pair.h_coords, atol=1e-12):
        raise UnsupportedModelError("theta does not reproduce fundamental vector fields")
    split = cb.split

    def coframe(x):
        return split.l_part @ cb.A(x)

    def gamma(x):
        return split.h_part @ cb.A(x)

    return GStructure(cb.bundle, coframe), ConnectionForm(gamma)


def model_to_cartan(m: ModelGeometry, split: ReductiveSplitting, chart_radius: float = 1.0,
                    name: str = "") -> CartanBundle:
    """Maurer-Cartan form of G pulled back along sigma(x) = exp(sum x_i l_i)."""
    if m.embed is None:
        raise UnsupportedModelError("model_to_cartan needs a model coming from a group G")
    G = m.g
    L = split.l_frame
    n = L.shape[1]
    gens = np.tensordot(L.T, G.basis, axes=1)  # n generators as matrices
    # exp must stay inside the principal-log domain on the whole box
    for corner in np.array(np.meshgrid(*[[-chart_radius, chart_radius]] * n)).reshape(n, -1).T:
        eig = np.linalg.eigvals(np.tensordot(corner, gens, axes=1))
        if np.max(np.abs(eig.imag), initial=0.0) >= np.pi * 0.999:
            raise DomainError("chart radius too large for the exponential section")

    D = G.dim
    block = np.zeros((2 * D, 2 * D))
    block[:D, D:] = np.eye(D)

    def A(x):
        # sigma^-1 d sigma = ((1 - exp(-ad X)) / ad X) on the generators
        b = block.copy()
        b[:D, :D] = -G.ad(L @ np.asarray(x, float))
        return numkit.matrix_exp(b)[:D, D:] @ L

    chart = ChartBundle(-chart_radius * np.ones(n), chart_radius * np.ones(n), m.H)
    return CartanBundle(chart, Coefficients(G.dim, m.rho), CartanGauge(A, m.pair.h_coords),
                        m, split, name or m.name)


def tangent_iso_phi(cb: CartanBundle, x, h, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """phi_p: T_xM -> g/h and its inverse, with g/h in complement coordinates."""
    if cb.model is None or cb.r != cb.model.g.dim:
        raise UnsupportedModelError("phi needs a Cartan geometry")
    th = cb.theta_matrix(x, h)
    rank, _ = numkit.rank_nullspace(th, tol)
    if rank != cb.tangent_dim or cb.r != cb.tangent_dim:
        raise UnsupportedModelError("theta is not a pointwise isomorphism")
    q = quotient_map(cb)
    phi = q @ th[:, :cb.m]
    return phi, np.linalg.inv(phi)


def quotient_map(cb: CartanBundle) -> np.ndarray:
    if cb.split is not None:
        return cb.split.l_part
    ih = cb.model.pair.h_coords
    _, comp = numkit.rank_nullspace(ih.T)
    return comp.basis.T


# -- curvature and torsion ------------------------------------------------------

def _stencil_ok(cb: CartanBundle, x, dirs, step):
    for u in dirs:
        du = step * np.asarray(u, float)[:cb.m]
        if not (cb.bundle.contains(x + 2 * du) and cb.bundle.contains(x - 2 * du)):
            raise StencilError("point too close to the chart boundary for the stencil")


def exterior_derivative(cb: CartanBundle, x, h, u, v, tol: Tolerances = DEFAULT_TOL,
                        post: np.ndarray | None = None) -> np.ndarray:
    """d(post . theta)(u, v) by central differences on chart-constant fields."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _stencil_ok(cb, x, (u, v), tol.fd_step)
    f = cb.theta_chart(h)
    post = np.eye(cb.r) if post is None else post
    pt = np.concatenate([x, np.zeros(cb.d)])
    du_v = numkit.fd_partial(lambda q: post @ (f(q) @ v), pt, u, tol.fd_step)
    dv_u = numkit.fd_partial(lambda q: post @ (f(q) @ u), pt, v, tol.fd_step)
    return du_v - dv_u


def _require_geometry(cb: CartanBundle):
    if cb.model is None or cb.r != cb.model.g.dim:
        raise UnsupportedModelError("curvature needs theta valued in the model algebra")


def curvature(cb: CartanBundle, x, h, u, v, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Omega(u, v) = d theta(u, v) + [theta(u), theta(v)]."""
    _require_geometry(cb)
    th = cb.theta_matrix(x, h)
    return exterior_derivative(cb, x, h, u, v, tol) + cb.model.g.bracket_coords(th @ u, th @ v)


def horizontal_part(cb: CartanBundle, split: ReductiveSplitting, h, th: np.ndarray, w) -> np.ndarray:
    """Remove the fundamental-vector component that theta_h sees."""
    zeta = split.h_part @ (th @ w)
    return np.asarray(w, dtype=float) - cb.fundamental(h, zeta)


def torsion(cb: CartanBundle, split: ReductiveSplitting, x, h, u, v,
            tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """d theta_l + pr_l [theta_l, theta_l] on the horizontal parts of u and v.

    Returned in g-coordinates (a vector of l).
    """
    _require_geometry(cb)
    th = cb.theta_matrix(x, h)
    uh = horizontal_part(cb, split, h, th, u)
    vh = horizontal_part(cb, split, h, th, v)
    d_l = exterior_derivative(cb, x, h, uh, vh, tol, post=split.pr_l)
    tu, tv = split.pr_l @ (th @ uh), split.pr_l @ (th @ vh)
    return d_l + split.pr_l @ cb.model.g.bracket_coords(tu, tv)


def connection_torsion(gs: GStructure, gamma: ConnectionForm, x, h, u, v,
                       tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Torsion of gamma on the H-structure, evaluated at the frame (x, h).

    Computed on the base as d(tau) + gamma ^ tau with tau = coframe, then
    moved to the frame at h; only the chart components of u, v enter.
    """
    H, m = gs.H, gs.chart.m
    x = np.asarray(x, dtype=float)
    a = np.asarray(u, dtype=float)[:m]
    b = np.asarray(v, dtype=float)[:m]
    for w in (a, b):
        if not (gs.chart.contains(x + 2 * tol.fd_step * w) and gs.chart.contains(x - 2 * tol.fd_step * w)):
            raise StencilError("point too close to the chart boundary for the stencil")
    d_tau = (numkit.fd_partial(lambda y: gs.coframe(y) @ b, x, a, tol.fd_step)
             - numkit.fd_partial(lambda y: gs.coframe(y) @ a, x, b, tol.fd_step))
    tau = np.asarray(gs.coframe(x), float)
    gam = np.asarray(gamma.gamma(x), float)
    wedge = H.hat(gam @ a) @ (tau @ b) - H.hat(gam @ b) @ (tau @ a)
    return np.linalg.solve(np.asarray(h, float), d_tau + wedge)


# -- checks ---------------------------------------------------------------------

def _draw_point(cb: CartanBundle, rng, margin: float = 1e-2):
    return {"x": uniform_in_box(rng, cb.bundle.lower, cb.bundle.upper, margin),
            "h": algebra_coords(rng, cb.d)}


def _point(cb: CartanBundle, w):
    return np.asarray(w["x"], dtype=float), cb.H.exp(w["h"])


def _res_surjective(cb, w, tol):
    x, h = _point(cb, w)
    rank, _ = numkit.rank_nullspace(cb.theta_matrix(x, h), tol)
    return float(cb.r - rank)


def _res_vertical(cb, w, tol):
    x, h = _point(cb, w)
    _, ker = numkit.rank_nullspace(cb.theta_matrix(x, h), tol)
    if ker.dim == 0:
        return 0.0
    return float(np.linalg.norm(ker.basis[:cb.m], 2))


def distribution_brackets(field_matrix: Callable[[np.ndarray], np.ndarray], center: np.ndarray,
                          tol: Tolerances) -> float:
    """Max distance from ker M(center) of brackets of a local frame of ker M.

    The frame is X_i(q) = K(q) b_i with K the kernel projector of M(q) and b_i
    a basis of the kernel at the center; Lie brackets use central differences.
    """
    m0 = field_matrix(center)
    _, ker = numkit.rank_nullspace(m0, tol)
    k = ker.dim
    if k < 2:
        return 0.0
    b = ker.basis
    proj = lambda q: numkit.kernel_projector(field_matrix(q), tol)
    dK = np.array(numkit.fd_jacobian(proj, center, tol.fd_step))  # (axes, N, N)
    X = b  # frame at the center equals b
    DX = np.einsum("aij,jk->kia", dK, b)  # DX[k][:, a] = d_a X_k
    k_center = ker.projector
    worst = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            br = DX[j] @ X[:, i] - DX[i] @ X[:, j]
            worst = max(worst, float(np.linalg.norm(br - k_center @ br)))
    return worst


def _res_involutive(cb, w, tol):
    x, h = _point(cb, w)
    center = np.concatenate([x, np.zeros(cb.d)])
    return distribution_brackets(cb.theta_chart(h), center, tol)


def _draw_equivariance(cb, rng):
    w = _draw_point(cb, rng)
    w.update(k=algebra_coords(rng, cb.d), w=tangent(rng, cb.tangent_dim))
    return w


def _res_equivariant(cb, w, tol):
    x, h = _point(cb, w)
    k = cb.H.exp(w["k"])
    vec = np.asarray(w["w"], dtype=float)
    m = cb.m
    xi = cb.H.coords_to_tangent(h, vec[m:])
    pushed = np.concatenate([vec[:m], cb.H.tangent_to_coords(h @ k, xi @ k)])
    lhs = cb.theta(x, h @ k, pushed)
    rhs = cb.rho(np.linalg.inv(k)) @ cb.theta(x, h, vec)
    return float(np.max(np.abs(lhs - rhs)))


def _draw_pair(cb, rng):
    return {"h1": algebra_coords(rng, cb.d), "h2": algebra_coords(rng, cb.d)}


def _res_rho_hom(cb, w, tol):
    h1, h2 = cb.H.exp(w["h1"]), cb.H.exp(w["h2"])
    r = np.max(np.abs(cb.rho(h1 @ h2) - cb.rho(h1) @ cb.rho(h2)))
    return float(max(r, np.max(np.abs(cb.rho(cb.H.identity) - np.eye(cb.r)))))


BUNDLE_CHECKS = [
    Check("theta_surjective", "theta is pointwise surjective", "points", "structural",
          _draw_point, _res_surjective),
    Check("ker_theta_vertical", "kernel of theta lies in the vertical bundle", "points", "exact",
          _draw_point, _res_vertical),
    Check("ker_theta_involutive", "kernel of theta is an involutive distribution", "points", "fd",
          _draw_point, _res_involutive),
    Check("theta_equivariant", "right translation pulls theta back to rho(k^-1) theta", "points", "exact",
          _draw_equivariance, _res_equivariant),
    Check("rho_homomorphism", "coefficients form a representation of H", "groups", "exact",
          _draw_pair, _res_rho_hom),
]


def _res_dimension(cb, w, tol):
    dim_g = cb.model.g.dim if cb.model is not None else cb.r
    return float(abs(cb.r - dim_g) + abs(cb.r - (cb.m + cb.d)))


def _res_iso(cb, w, tol):
    x, h = _point(cb, w)
    rank, _ = numkit.rank_nullspace(cb.theta_matrix(x, h), tol)
    return float(abs(cb.r - rank) + abs(cb.tangent_dim - rank))


def _draw_fundamental(cb, rng):
    w = _draw_point(cb, rng)
    w["w"] = tangent(rng, cb.d)
    return w


def _res_fundamental(cb, w, tol):
    x, h = _point(cb, w)
    zeta = np.asarray(w["w"], dtype=float)
    if cb.model is None:
        return float("inf")
    return float(np.max(np.abs(cb.theta(x, h, cb.fundamental(h, zeta)) - cb.model.pair.h_coords @ zeta)))


def _res_rho_model(cb, w, tol):
    if cb.model is None:
        return float("inf")
    h = cb.H.exp(w["h1"])
    return float(np.max(np.abs(cb.rho(h) - cb.model.rho(h))))


GEOMETRY_CHECKS = [
    Check("dimension_count", "dim M = dim g - dim h", "once", "structural",
          lambda cb, rng: {}, _res_dimension),
    Check("theta_pointwise_iso", "theta is a pointwise isomorphism", "points", "structural",
          _draw_point, _res_iso),
    Check("theta_equivariant", "right translation pulls theta back to rho(k^-1) theta", "points", "exact",
          _draw_equivariance, _res_equivariant),
    Check("fundamental_vector", "theta maps fundamental vector fields to their generators", "points",
          "exact", _draw_fundamental, _res_fundamental),
    Check("rho_matches_model", "coefficient representation is the model representation", "groups",
          "exact", _draw_pair, _res_rho_model),
]


def check_cartan_bundle(cb: CartanBundle, sampler: Sampler | None = None,
                        tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    return [run_check(c, cb, sampler, tol, i) for i, c in enumerate(BUNDLE_CHECKS)]


def check_cartan_geometry(cb: CartanBundle, model: ModelGeometry | None = None,
                          sampler: Sampler | None = None, tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    if model is not None and model is not cb.model:
        cb = CartanBundle(cb.bundle, cb.V, cb.gauge, model, cb.split, cb.name)
    return [run_check(c, cb, sampler, tol, i) for i, c in enumerate(GEOMETRY_CHECKS)]


def kernel_subspace(cb: CartanBundle, x, h, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    return numkit.rank_nullspace(cb.theta_matrix(x, h), tol)[1]



# -- correspondence checks --------------------------------------------------------

def _draw_pair_tangents(cb, rng):
    w = _draw_point(cb, rng, margin=0.05)
    w.update(u=tangent(rng, cb.tangent_dim), v=tangent(rng, cb.tangent_dim))
    return w


def _res_curvature(cb, w, tol):
    x, h = _point(cb, w)
    return float(np.max(np.abs(curvature(cb, x, h, np.asarray(w["u"]), np.asarray(w["v"]), tol))))


def _res_torsion_zero(cb, w, tol):
    if cb.split is None:
        return float("inf")
    x, h = _point(cb, w)
    return float(np.max(np.abs(torsion(cb, cb.split, x, h, np.asarray(w["u"]), np.asarray(w["v"]), tol))))


def _res_torsion_agreement(cb, w, tol):
    """Cartan-geometry torsion against the torsion of the extracted connection."""
    gs, gamma = cartan_to_gstructure(cb)
    x, h = _point(cb, w)
    u, v = np.asarray(w["u"]), np.asarray(w["v"])
    t_cartan = cb.split.l_part @ torsion(cb, cb.split, x, h, u, v, tol)
    t_conn = connection_torsion(gs, gamma, x, h, horizontal_part(cb, cb.split, h, cb.theta_matrix(x, h), u),
                                horizontal_part(cb, cb.split, h, cb.theta_matrix(x, h), v), tol)
    return float(np.max(np.abs(t_cartan - t_conn)))


def _draw_roundtrip(cb, rng):
    w = _draw_point(cb, rng)
    w["w"] = tangent(rng, cb.tangent_dim)
    return w


def _res_gstructure_roundtrip(cb, w, tol):
    gs, gamma = cartan_to_gstructure(cb)
    back = gstructure_to_cartan(gs, gamma)
    x, h = _point(cb, w)
    vec = np.asarray(w["w"], float)
    return float(np.max(np.abs(back.theta(x, h, vec) - cb.theta(x, h, vec))))


CURVATURE_ZERO = Check("curvature_zero", "curvature d theta + [theta, theta] vanishes", "points", "fd",
                       _draw_pair_tangents, _res_curvature)
TORSION_ZERO = Check("torsion_zero", "the l-component of curvature vanishes", "points", "fd",
                     _draw_pair_tangents, _res_torsion_zero)
TORSION_AGREEMENT = Check("torsion_agreement", "torsion of the geometry equals torsion of its connection",
                          "points", "fd", _draw_pair_tangents, _res_torsion_agreement)
GSTRUCTURE_ROUNDTRIP = Check("gstructure_roundtrip",
                             "splitting theta into connection and coframe and summing again is the identity",
                             "points", "exact", _draw_roundtrip, _res_gstructure_roundtrip)
CORRESPONDENCE_CHECKS = [CURVATURE_ZERO, TORSION_ZERO, TORSION_AGREEMENT, GSTRUCTURE_ROUNDTRIP]
