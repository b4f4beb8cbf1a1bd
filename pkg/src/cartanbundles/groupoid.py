"""Gauge groupoid of a chart bundle, multiplicative forms and Pfaffian checks.

Arrows are normalized classes [(x, h), (y, e)] written ``(x, h, y)``; source
is ``y`` and target ``x``. Arrow tangents are ``(v_x, xi, v_y)`` flattened
to length ``2m + d`` with ``xi`` right-translated into h. Vectors in E = P[V]
are written in the trivialization along the section ``h = e``, so an arrow
acts on fibres by ``rho(h)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import numkit
from .cartan import (CartanBundle, CartanGauge, ChartBundle, Coefficients,
                     distribution_brackets)
from .errors import ComposabilityError, DegenerateFormError, RefusedConstructionError
from .liegroups import MatrixLieGroup
from .numkit import DEFAULT_TOL, Subspace, Tolerances
from .report import CheckReport
from .sampling import Check, Sampler, algebra_coords, run_check, tangent, uniform_in_box


@dataclass(frozen=True, eq=False)
class Arrow:
    x: np.ndarray
    h: np.ndarray
    y: np.ndarray


@dataclass(frozen=True, eq=False)
class GaugeGroupoid:
    bundle: ChartBundle
    cb: CartanBundle | None = None

    @classmethod
    def of(cls, cb: CartanBundle) -> "GaugeGroupoid":
        return cls(cb.bundle, cb)

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
    def dim(self) -> int:
        return 2 * self.m + self.d

    # -- structure maps ---------------------------------------------------
    @staticmethod
    def source(g: Arrow) -> np.ndarray:
        return g.y

    @staticmethod
    def target(g: Arrow) -> np.ndarray:
        return g.x

    def unit(self, x) -> Arrow:
        x = np.asarray(x, dtype=float)
        return Arrow(x, self.H.identity, x)

    @staticmethod
    def inverse(g: Arrow) -> Arrow:
        return Arrow(g.y, np.linalg.inv(g.h), g.x)

    def mult(self, g1: Arrow, g2: Arrow, tol: float = 1e-12) -> Arrow:
        if np.max(np.abs(g1.y - g2.x)) > tol:
            raise ComposabilityError("source of the first arrow is not the target of the second")
        return Arrow(g1.x, g1.h @ g2.h, g2.y)

    def from_pair(self, x, a, y, b) -> Arrow:
        """tau: the class of ((x, a), (y, b))."""
        return Arrow(np.asarray(x, float), np.asarray(a) @ np.linalg.inv(b), np.asarray(y, float))

    # -- differentials ----------------------------------------------------
    def split(self, t):
        t = np.asarray(t, dtype=float)
        m, d = self.m, self.d
        return t[:m], t[m:m + d], t[m + d:]

    def ds(self) -> np.ndarray:
        out = np.zeros((self.m, self.dim))
        out[:, self.m + self.d:] = np.eye(self.m)
        return out

    def dt(self) -> np.ndarray:
        out = np.zeros((self.m, self.dim))
        out[:, :self.m] = np.eye(self.m)
        return out

    def dmult(self, g1: Arrow, t1, t2, tol: float = 1e-12) -> np.ndarray:
        vx, xi1, vy = self.split(t1)
        vy2, xi2, vz = self.split(t2)
        if np.max(np.abs(vy - vy2), initial=0.0) > tol:
            raise ComposabilityError("tangents are not composable")
        return np.concatenate([vx, xi1 + self.H.Ad(g1.h) @ xi2, vz])

    def dinverse(self, g: Arrow, t) -> np.ndarray:
        vx, xi, vy = self.split(t)
        return np.concatenate([vy, -self.H.Ad(np.linalg.inv(g.h)) @ xi, vx])

    def dunit(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return np.concatenate([v, np.zeros(self.d), v])

    def dtau(self, a, b, u, w) -> np.ndarray:
        """Differential of tau at ((x, a), (y, b)) on bundle tangents u, w."""
        m = self.m
        u = np.asarray(u, dtype=float)
        w = np.asarray(w, dtype=float)
        ab = np.asarray(a) @ np.linalg.inv(b)
        return np.concatenate([u[:m], u[m:] - self.H.Ad(ab) @ w[m:], w[:m]])


@dataclass(frozen=True, eq=False)
class GroupoidRep:
    dim: int
    transport: Callable[[Arrow], np.ndarray]


@dataclass(frozen=True, eq=False)
class MultForm:
    """A 1-form on the groupoid with values in t*E, given as a matrix field."""

    dim: int
    matrix: Callable[[Arrow], np.ndarray]

    def evaluate(self, g: Arrow, t) -> np.ndarray:
        return self.matrix(g) @ np.asarray(t, dtype=float)


@dataclass(frozen=True, eq=False)
class PfaffianGroupoid:
    gg: GaugeGroupoid
    omega: MultForm
    rep: GroupoidRep

    @property
    def m(self) -> int:
        return self.gg.m

    @property
    def d(self) -> int:
        return self.gg.d

    @property
    def r(self) -> int:
        return self.omega.dim


def bundle_rep(cb: CartanBundle) -> GroupoidRep:
    return GroupoidRep(cb.r, lambda g: cb.rho(g.h))


def omega_from_theta(cb: CartanBundle) -> MultForm:
    """omega at [p, q] on (u, w): theta_p(u) - theta_q(w), moved to the section frame."""
    m, d = cb.m, cb.d
    e = cb.H.identity

    def matrix(g: Arrow) -> np.ndarray:
        tp = cb.theta_matrix(g.x, g.h)
        tq = cb.theta_matrix(g.y, e)[:, :m]
        return cb.rho(g.h) @ np.hstack([tp, -tq])

    return MultForm(cb.r, matrix)


def corrupted_omega(cb: CartanBundle, eps: float = 0.1) -> MultForm:
    """omega plus a term that depends on the arrow's group part but not equivariantly."""
    base = omega_from_theta(cb)
    m, d = cb.m, cb.d

    def matrix(g: Arrow) -> np.ndarray:
        out = base.matrix(g).copy()
        hh = np.asarray(g.h)
        out[0, m + d] += eps * (hh[0, 1] if hh.shape[1] > 1 else hh[0, 0])
        return out

    return MultForm(cb.r, matrix)


def pfaffian_of(cb: CartanBundle, omega: MultForm | None = None) -> PfaffianGroupoid:
    return PfaffianGroupoid(GaugeGroupoid.of(cb), omega or omega_from_theta(cb), bundle_rep(cb))


# -- sampling helpers -------------------------------------------------------------

def _chart(pg: PfaffianGroupoid) -> ChartBundle:
    return pg.gg.bundle


def _x(pg, rng, margin=1e-2):
    b = _chart(pg)
    return uniform_in_box(rng, b.lower, b.upper, margin)


def _arrow(pg: PfaffianGroupoid, w: dict, key: str = "") -> Arrow:
    return Arrow(np.asarray(w["x" + key], float), pg.gg.H.exp(w["h" + key]), np.asarray(w["y" + key], float))


def _draw_arrow(pg, rng):
    return {"x": _x(pg, rng), "h": algebra_coords(rng, pg.d), "y": _x(pg, rng)}


def _draw_composable(pg, rng):
    x, y, z = _x(pg, rng), _x(pg, rng), _x(pg, rng)
    m, d = pg.m, pg.d
    vy = tangent(rng, m)
    return {"x": x, "h": algebra_coords(rng, d), "y": y, "h2": algebra_coords(rng, d), "z": z,
            "t1": np.concatenate([tangent(rng, m), tangent(rng, d), vy]),
            "t2": np.concatenate([vy, tangent(rng, d), tangent(rng, m)])}


def _composable(pg, w):
    H = pg.gg.H
    g1 = Arrow(np.asarray(w["x"], float), H.exp(w["h"]), np.asarray(w["y"], float))
    g2 = Arrow(np.asarray(w["y"], float), H.exp(w["h2"]), np.asarray(w["z"], float))
    return g1, g2, np.asarray(w["t1"], float), np.asarray(w["t2"], float)


def _res_multiplicative(pg: PfaffianGroupoid, w, tol):
    gg, om = pg.gg, pg.omega
    g1, g2, t1, t2 = _composable(pg, w)
    lhs = om.evaluate(gg.mult(g1, g2), gg.dmult(g1, t1, t2))
    rhs = om.evaluate(g1, t1) + pg.rep.transport(g1) @ om.evaluate(g2, t2)
    return float(np.max(np.abs(lhs - rhs)))


def _draw_equivariance(pg, rng):
    m, d = pg.m, pg.d
    return {"x": _x(pg, rng), "h": algebra_coords(rng, d), "y": _x(pg, rng),
            "a": _x(pg, rng), "ha": algebra_coords(rng, d),
            "b": _x(pg, rng), "hb": algebra_coords(rng, d),
            "ta": np.concatenate([tangent(rng, m), tangent(rng, d), np.zeros(m)]),
            "tb": np.concatenate([np.zeros(m), tangent(rng, d), tangent(rng, m)])}


def _res_equivariance_lemma(pg: PfaffianGroupoid, w, tol):
    gg, om, H = pg.gg, pg.omega, pg.gg.H
    g = _arrow(pg, w)
    zero = np.zeros(gg.dim)
    # right translation s^-1(x) -> s^-1(y), a = (a, ha, x)
    a = Arrow(np.asarray(w["a"], float), H.exp(w["ha"]), g.x)
    ta = np.asarray(w["ta"], float)
    right = om.evaluate(gg.mult(a, g), gg.dmult(a, ta, zero)) - om.evaluate(a, ta)
    # left translation t^-1(y) -> t^-1(x), b = (y, hb, b)
    b = Arrow(g.y, H.exp(w["hb"]), np.asarray(w["b"], float))
    tb = np.asarray(w["tb"], float)
    left = om.evaluate(gg.mult(g, b), gg.dmult(g, zero, tb)) - pg.rep.transport(g) @ om.evaluate(b, tb)
    return float(max(np.max(np.abs(right)), np.max(np.abs(left))))


def _kernels(pg: PfaffianGroupoid, g: Arrow, tol: Tolerances):
    _, ker_w = numkit.rank_nullspace(pg.omega.matrix(g), tol)
    ker_s = numkit.rank_nullspace(pg.gg.ds(), tol)[1]
    ker_t = numkit.rank_nullspace(pg.gg.dt(), tol)[1]
    return ker_w, ker_s, ker_t


def kernel_intersections(pg: PfaffianGroupoid, g: Arrow, tol: Tolerances = DEFAULT_TOL) -> tuple[int, int]:
    """Dimensions of ker omega with ker ds and with ker dt at ``g``."""
    ker_w, ker_s, ker_t = _kernels(pg, g, tol)
    return (numkit.subspace_intersection(ker_w, ker_s, tol).dim,
            numkit.subspace_intersection(ker_w, ker_t, tol).dim)


def _res_transversal(which: str):
    def res(pg, w, tol):
        ker_w, ker_s, ker_t = _kernels(pg, _arrow(pg, w), tol)
        other = ker_s if which == "s" else ker_t
        total = numkit.subspace_sum(ker_w, other, tol).dim
        inter = numkit.subspace_intersection(ker_w, other, tol).dim
        # rank-nullity bookkeeping must close as well
        return float(abs(pg.gg.dim - total) + abs(ker_w.dim + other.dim - inter - total))
    return res


def reference_rank(pg: PfaffianGroupoid, tol: Tolerances) -> int:
    b = _chart(pg)
    c = 0.5 * (b.lower + b.upper)
    return numkit.rank_nullspace(pg.omega.matrix(pg.gg.unit(c)), tol)[0]


def _res_constant_rank(pg, w, tol):
    rank = numkit.rank_nullspace(pg.omega.matrix(_arrow(pg, w)), tol)[0]
    return float(abs(rank - reference_rank(pg, tol)))


def _res_full(pg, w, tol):
    rank = numkit.rank_nullspace(pg.omega.matrix(_arrow(pg, w)), tol)[0]
    return float(pg.r - rank)


def _res_lie_type(pg, w, tol):
    ker_w, ker_s, ker_t = _kernels(pg, _arrow(pg, w), tol)
    a = numkit.subspace_intersection(ker_w, ker_t, tol)
    b = numkit.subspace_intersection(ker_w, ker_s, tol)
    return numkit.subspace_distance(a, b)


def omega_chart(pg: PfaffianGroupoid, h0) -> Callable[[np.ndarray], np.ndarray]:
    """omega in the chart (x, c, y) -> (x, exp(c) h0, y) on chart-coordinate vectors."""
    gg, H = pg.gg, pg.gg.H
    m, d = gg.m, gg.d
    h0 = np.asarray(h0, dtype=float)

    def f(pt):
        x, c, y = pt[:m], pt[m:m + d], pt[m + d:]
        jac = np.eye(gg.dim)
        jac[m:m + d, m:m + d] = H.right_dexp(c)
        return pg.omega.matrix(Arrow(x, H.exp(c) @ h0, y)) @ jac

    return f


def _draw_unit(pg, rng):
    return {"x": _x(pg, rng, margin=0.05)}


def _res_symbol_closure(pg: PfaffianGroupoid, w, tol):
    gg = pg.gg
    x = np.asarray(w["x"], float)
    om = omega_chart(pg, gg.H.identity)
    ds = gg.ds()
    field = lambda pt: np.vstack([om(pt), ds])
    center = np.concatenate([x, np.zeros(gg.d), x])
    return distribution_brackets(field, center, tol)


def _draw_well_defined(pg, rng):
    m, d = pg.m, pg.d
    return {"x": _x(pg, rng), "a": algebra_coords(rng, d), "y": _x(pg, rng), "b": algebra_coords(rng, d),
            "k": algebra_coords(rng, d), "u": tangent(rng, m + d), "w": tangent(rng, m + d)}


def _res_well_defined(pg: PfaffianGroupoid, w, tol):
    """omega computed from (p k, q k) agrees with omega computed from (p, q).

    Needs the bundle's theta; the value is rho(a) (theta_p(u) - theta_q(w)).
    """
    cb = pg.gg.cb
    if cb is None:
        return float("inf")
    H = cb.H
    x, y = np.asarray(w["x"], float), np.asarray(w["y"], float)
    a, b, k = H.exp(w["a"]), H.exp(w["b"]), H.exp(w["k"])
    u, v = np.asarray(w["u"], float), np.asarray(w["w"], float)
    first = cb.rho(a) @ (cb.theta(x, a, u) - cb.theta(y, b, v))
    second = cb.rho(a @ k) @ (cb.theta(x, a @ k, u) - cb.theta(y, b @ k, v))
    return float(np.max(np.abs(first - second)))


MULTIPLICATIVE = Check("multiplicative", "m*omega = pr1*omega + g . pr2*omega on composable pairs",
                       "pairs", "exact", _draw_composable, _res_multiplicative, "pfaffian")
EQUIVARIANCE_LEMMA = Check("equivariance_lemma",
                           "right and left translations pull omega back to itself along s- and t-fibres",
                           "pairs", "exact", _draw_equivariance, _res_equivariance_lemma, "pfaffian")
TRANSVERSALITY = [
    Check("transversality_s", "ker omega + ker ds spans the tangent space of the groupoid", "points",
          "structural", _draw_arrow, _res_transversal("s"), "pfaffian"),
    Check("transversality_t", "ker omega + ker dt spans the tangent space of the groupoid", "points",
          "structural", _draw_arrow, _res_transversal("t"), "pfaffian"),
    Check("constant_rank", "omega has constant rank", "points", "structural",
          _draw_arrow, _res_constant_rank, "pfaffian"),
]
PFAFFIAN = [
    MULTIPLICATIVE,
    TRANSVERSALITY[2],
    Check("symbol_closure", "ker omega and ker ds meet in an involutive distribution near the units",
          "points", "fd", _draw_unit, _res_symbol_closure, "pfaffian"),
    Check("full", "omega is pointwise surjective", "points", "structural", _draw_arrow, _res_full, "pfaffian"),
    Check("lie_type", "ker omega meets ker dt and ker ds in the same subspace", "points", "exact",
          _draw_arrow, _res_lie_type, "pfaffian"),
    Check("omega_well_defined", "omega does not depend on the representative pair", "points", "exact",
          _draw_well_defined, _res_well_defined, "pfaffian"),
]


def check_multiplicative(pg: PfaffianGroupoid, sampler: Sampler | None = None,
                         tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    return run_check(MULTIPLICATIVE, pg, sampler, tol, 0)


def check_equivariance_lemma(pg: PfaffianGroupoid, sampler: Sampler | None = None,
                             tol: Tolerances = DEFAULT_TOL) -> CheckReport:
    return run_check(EQUIVARIANCE_LEMMA, pg, sampler, tol, 0)


def check_transversality(pg: PfaffianGroupoid, sampler: Sampler | None = None,
                         tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    return [run_check(c, pg, sampler, tol, i) for i, c in enumerate(TRANSVERSALITY)]


def check_pfaffian(pg: PfaffianGroupoid, sampler: Sampler | None = None,
                   tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    return [run_check(c, pg, sampler, tol, i) for i, c in enumerate(PFAFFIAN)]


def symbol_space(pg: PfaffianGroupoid, x, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    ker_w, ker_s, _ = _kernels(pg, pg.gg.unit(x), tol)
    return numkit.subspace_intersection(ker_w, ker_s, tol)


# -- reconstruction ----------------------------------------------------------------

def pfaffian_to_cartan(pg: PfaffianGroupoid, x0, sampler: Sampler | None = None,
                       tol: Tolerances = DEFAULT_TOL, verify: bool = True, name: str = "") -> CartanBundle:
    """The s-fibre over x0 as a bundle U x H with theta_g = g^-1 . omega_g.

    With ``verify`` the full and Lie-type conditions are checked first and a
    failure refuses the construction.
    """
    gg = pg.gg
    x0 = np.asarray(x0, dtype=float)
    if verify:
        reports = [run_check(c, pg, sampler, tol, i) for i, c in enumerate(PFAFFIAN[:5])]
        bad = [r.check for r in reports if not r.passed]
        if bad:
            raise RefusedConstructionError(f"form is not a full Lie-Pfaffian form: {', '.join(bad)}")
    m, d, e = gg.m, gg.d, gg.H.identity
    lam = pg.omega.matrix(gg.unit(x0))[:, m:m + d]

    def A(x):
        return pg.omega.matrix(Arrow(np.asarray(x, float), e, x0))[:, :m]

    def rho(k):
        return pg.rep.transport(Arrow(x0, k, x0))

    src = gg.cb
    return CartanBundle(gg.bundle, Coefficients(pg.r, rho), CartanGauge(A, lam),
                        src.model if src else None, src.split if src else None, name)


def theta_on_fibre(pg: PfaffianGroupoid, x0, x, h, v) -> np.ndarray:
    """transport(g)^-1 omega_g on the s-fibre tangent (v, 0), g = (x, h, x0)."""
    g = Arrow(np.asarray(x, float), np.asarray(h, float), np.asarray(x0, float))
    t = np.concatenate([np.asarray(v, float), np.zeros(pg.m)])
    return np.linalg.solve(pg.rep.transport(g), pg.omega.evaluate(g, t))


# -- unit algebroid and representations ------------------------------------------

@dataclass
class UnitAlgebroid:
    restriction: np.ndarray  # omega at 1_x on A_x = ker ds, coordinates (v, xi)
    invertible: bool
    kernel_dim: int
    anchor: np.ndarray | None  # E_x -> T_xM, None unless the restriction is invertible


def unit_algebroid(pg: PfaffianGroupoid, x, tol: Tolerances = DEFAULT_TOL) -> UnitAlgebroid:
    gg = pg.gg
    m, d = gg.m, gg.d
    r = pg.omega.matrix(gg.unit(x))[:, :m + d]
    rank, ker = numkit.rank_nullspace(r, tol)
    invertible = rank == m + d == pg.r
    anchor = None
    if invertible:
        # alpha = r^-1 e, anchor(e) = dt(alpha)
        anchor = np.linalg.solve(r, np.eye(pg.r))[:m]
    return UnitAlgebroid(r, invertible, ker.dim, anchor)


def _res_unit_iso(pg, w, tol):
    ua = unit_algebroid(pg, w["x"], tol)
    return 0.0 if ua.invertible else 1.0


def _res_anchor(pg, w, tol):
    ua = unit_algebroid(pg, w["x"], tol)
    if ua.anchor is None:
        return float("inf")
    return float(np.linalg.norm(ua.anchor, 2))


def _draw_adjoint(pg, rng):
    return {"x": _x(pg, rng), "g": algebra_coords(rng, pg.d), "v": tangent(rng, pg.d)}


def _res_adjoint(pg: PfaffianGroupoid, w, tol):
    gg = pg.gg
    x = np.asarray(w["x"], float)
    g = gg.H.exp(w["g"])
    v = np.asarray(w["v"], float)
    lam = pg.omega.matrix(gg.unit(x))[:, gg.m:gg.m + gg.d]
    lhs = pg.rep.transport(Arrow(x, g, x)) @ (lam @ v)
    return float(np.max(np.abs(lhs - lam @ (gg.H.Ad(g) @ v))))


UNIT_ALGEBROID = [
    Check("unit_iso", "omega at a unit restricts to an isomorphism from the algebroid onto E", "points",
          "structural", _draw_unit, _res_unit_iso, "pfaffian"),
    Check("anchor_zero", "the anchor of E vanishes for zero symbol", "points", "exact",
          _draw_unit, _res_anchor, "pfaffian"),
    Check("adjoint_compatibility", "isotropy acts on omega(h) through the adjoint action", "groups",
          "exact", _draw_adjoint, _res_adjoint, "pfaffian"),
]


def check_unit_algebroid(pg: PfaffianGroupoid, sampler: Sampler | None = None,
                         tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    return [run_check(c, pg, sampler, tol, i) for i, c in enumerate(UNIT_ALGEBROID)]


def _tangent_rep_alpha(pg: PfaffianGroupoid, g: Arrow, v, tol: Tolerances):
    gg = pg.gg
    sys = np.vstack([pg.omega.matrix(g), gg.ds()])
    rhs = np.concatenate([np.zeros(pg.r), np.asarray(v, float)])
    alpha, *_ = np.linalg.lstsq(sys, rhs, rcond=None)
    if np.linalg.norm(sys @ alpha - rhs) > tol.exact_tol * max(1.0, np.linalg.norm(rhs)) * 10:
        raise DegenerateFormError("no tangent in ker omega projects onto the given vector")
    return alpha, sys


def tangent_rep(pg: PfaffianGroupoid, g: Arrow, v, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """g . v = dt(alpha) for any alpha in ker omega_g with ds(alpha) = v."""
    alpha, _ = _tangent_rep_alpha(pg, g, v, tol)
    return pg.gg.dt() @ alpha


def tangent_rep_spread(pg: PfaffianGroupoid, g: Arrow, v, rng: np.random.Generator,
                       tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest change of dt(alpha) over other admissible choices of alpha."""
    alpha, sys = _tangent_rep_alpha(pg, g, v, tol)
    _, free = numkit.rank_nullspace(sys, tol)
    if free.dim == 0:
        return 0.0
    dt = pg.gg.dt()
    other = alpha + free.basis @ rng.uniform(-1.0, 1.0, free.dim)
    return float(np.max(np.abs(dt @ other - dt @ alpha)))


def phi_matrix(cb: CartanBundle, x) -> np.ndarray:
    """Phi: E_x -> T_xM, [q, z] -> dpi(w) with theta_q(w) = z, q = (x, e)."""
    th = cb.theta_matrix(x, cb.H.identity)
    return np.linalg.pinv(th)[:cb.m]


def _res_split_dim(pg: PfaffianGroupoid, w, tol):
    g_dim = symbol_space(pg, w["x"], tol).dim
    return float(abs(pg.r - (pg.m + pg.d - g_dim)))


def _draw_split(pg, rng):
    return {"x": _x(pg, rng), "h": algebra_coords(rng, pg.d), "y": _x(pg, rng), "e": tangent(rng, pg.r)}


def _res_split_equivariance(pg: PfaffianGroupoid, w, tol):
    cb = pg.gg.cb
    if cb is None:
        return float("inf")
    g = _arrow(pg, w)
    e = np.asarray(w["e"], float)
    lhs = tangent_rep(pg, g, phi_matrix(cb, g.y) @ e, tol)
    rhs = phi_matrix(cb, g.x) @ (pg.rep.transport(g) @ e)
    return float(np.max(np.abs(lhs - rhs)))


def _res_tangent_rep_unit(pg, w, tol):
    x = np.asarray(w["x"], float)
    v = np.ones(pg.m)
    return float(np.max(np.abs(tangent_rep(pg, pg.gg.unit(x), v, tol) - v)))


def _res_tangent_rep_functorial(pg: PfaffianGroupoid, w, tol):
    g1, g2, t1, _ = _composable(pg, w)
    v = t1[:pg.m]
    both = tangent_rep(pg, pg.gg.mult(g1, g2), v, tol)
    step = tangent_rep(pg, g1, tangent_rep(pg, g2, v, tol), tol)
    return float(np.max(np.abs(both - step)))


REP_SPLITTING = [
    Check("splitting_dimension", "rank of E equals dim M + dim h - dim of the symbol", "points",
          "structural", _draw_unit, _res_split_dim, "pfaffian"),
    Check("splitting_equivariance", "the projection of E on TM intertwines the two actions", "pairs",
          "exact", _draw_split, _res_split_equivariance, "pfaffian"),
    Check("tangent_rep_unit", "units act as the identity on TM", "points", "exact",
          _draw_unit, _res_tangent_rep_unit, "pfaffian"),
    Check("tangent_rep_functorial", "the action on TM is compatible with composition", "pairs", "exact",
          _draw_composable, _res_tangent_rep_functorial, "pfaffian"),
]


def rep_splitting_check(pg: PfaffianGroupoid, sampler: Sampler | None = None,
                        tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    return [run_check(c, pg, sampler, tol, i) for i, c in enumerate(REP_SPLITTING)]


# -- actions ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PrincipalAction:
    """H acting on P on the right (forms (0, theta)), or the gauge groupoid
    acting on P on the left with moment map pi (forms (omega, theta^E))."""

    kind: str  # "group" | "groupoid"
    cb: CartanBundle
    pg: PfaffianGroupoid | None = None

    @classmethod
    def of_group(cls, cb: CartanBundle) -> "PrincipalAction":
        return cls("group", cb)

    @classmethod
    def of_groupoid(cls, cb: CartanBundle, pg: PfaffianGroupoid | None = None) -> "PrincipalAction":
        return cls("groupoid", cb, pg or pfaffian_of(cb))

    @staticmethod
    def moment(x, b):
        return np.asarray(x, dtype=float)

    @staticmethod
    def act(g: Arrow, y, b):
        """(x, h, y) . (y, b) = (x, h b)."""
        return g.x, g.h @ np.asarray(b)

    def theta_E(self, x, b) -> np.ndarray:
        """theta in the section frame: rho(b) theta_(x, b)."""
        return self.cb.rho(b) @ self.cb.theta_matrix(x, b)

    def infinitesimal(self, x) -> np.ndarray:
        """a: A_x = ker ds at 1_x -> T_pP; (v, xi) -> (v, xi) in right-translated coordinates."""
        return np.eye(self.cb.tangent_dim)


def _bundle_point(cb, rng):
    return uniform_in_box(rng, cb.bundle.lower, cb.bundle.upper, 1e-2), algebra_coords(rng, cb.d)


def _draw_h_action(pa: PrincipalAction, rng):
    cb = pa.cb
    x, h = _bundle_point(cb, rng)
    return {"x": x, "h": h, "k": algebra_coords(rng, cb.d), "w": tangent(rng, cb.tangent_dim)}


def _h_action_sides(pa, w):
    cb = pa.cb
    x = np.asarray(w["x"], float)
    h, k = cb.H.exp(w["h"]), cb.H.exp(w["k"])
    u = np.asarray(w["w"], float)
    return cb, x, h, k, u


def _res_h_multiplicative(pa: PrincipalAction, w, tol):
    """Pullback of theta along the action map, for tangents (u, 0) at (p, k).

    The right-translated coordinates of u are unchanged by R_k, so the
    pushforward is u itself; the equivariant reading asks for rho(k^-1) theta.
    """
    cb, x, h, k, u = _h_action_sides(pa, w)
    return float(np.max(np.abs(cb.theta(x, h @ k, u) - cb.rho(np.linalg.inv(k)) @ cb.theta(x, h, u))))


def _res_h_literal(pa: PrincipalAction, w, tol):
    cb, x, h, k, u = _h_action_sides(pa, w)
    return float(np.max(np.abs(cb.theta(x, h @ k, u) - cb.theta(x, h, u))))


def _draw_groupoid_action(pa: PrincipalAction, rng):
    cb = pa.cb
    m, d = cb.m, cb.d
    y, b = _bundle_point(cb, rng)
    x = uniform_in_box(rng, cb.bundle.lower, cb.bundle.upper, 1e-2)
    vy = tangent(rng, m)
    return {"x": x, "h": algebra_coords(rng, d), "y": y, "b": b,
            "t": np.concatenate([tangent(rng, m), tangent(rng, d), vy]),
            "u": np.concatenate([vy, tangent(rng, d)])}


def _res_groupoid_multiplicative(pa: PrincipalAction, w, tol):
    """m_P* theta^E = pr1* omega + g . pr2* theta^E on composable (t, u)."""
    cb, pg = pa.cb, pa.pg
    H, m = cb.H, cb.m
    g = Arrow(np.asarray(w["x"], float), H.exp(w["h"]), np.asarray(w["y"], float))
    b = H.exp(w["b"])
    t, u = np.asarray(w["t"], float), np.asarray(w["u"], float)
    if np.max(np.abs(t[m + cb.d:] - u[:m])) > 1e-12:
        return float("inf")
    x2, hb = pa.act(g, g.y, b)
    pushed = np.concatenate([t[:m], t[m:m + cb.d] + H.Ad(g.h) @ u[m:]])
    lhs = pa.theta_E(x2, hb) @ pushed
    rhs = pg.omega.evaluate(g, t) + pg.rep.transport(g) @ (pa.theta_E(g.y, b) @ u)
    return float(np.max(np.abs(lhs - rhs)))


def _draw_infinitesimal(pa: PrincipalAction, rng):
    cb = pa.cb
    y, b = _bundle_point(cb, rng)
    return {"y": y, "b": b, "alpha": np.concatenate([tangent(rng, cb.m), tangent(rng, cb.d)])}


def _res_infinitesimal(pa: PrincipalAction, w, tol):
    """theta(a(alpha)) = omega(alpha), both in the section frame of E at mu(p)."""
    cb, pg = pa.cb, pa.pg
    y, b = np.asarray(w["y"], float), cb.H.exp(w["b"])
    alpha = np.asarray(w["alpha"], float)
    # a_p(alpha) = dm_P(alpha, 0_p) with alpha = (v, xi, 0) at the unit
    t = np.concatenate([alpha, np.zeros(cb.m)])
    g = pg.gg.unit(y)
    a_alpha = np.concatenate([t[:cb.m], t[cb.m:cb.m + cb.d]])
    return float(np.max(np.abs(pa.theta_E(y, b) @ a_alpha - pg.omega.evaluate(g, t))))


def _image_of_a(pa: PrincipalAction, y, tol) -> Subspace:
    return Subspace.span(pa.infinitesimal(y), pa.cb.tangent_dim, tol)


def _res_image(pa: PrincipalAction, w, tol):
    """Im(a) against ker(d pi) for the quotient P -> P / G, which is a point."""
    ker_dpi = Subspace.full(pa.cb.tangent_dim)
    return numkit.subspace_distance(_image_of_a(pa, w["y"], tol), ker_dpi)


def _draw_basic(pa: PrincipalAction, rng):
    cb = pa.cb
    x, a = _bundle_point(cb, rng)
    y, b = _bundle_point(cb, rng)
    return {"x": x, "a": a, "y": y, "b": b, "k": algebra_coords(rng, cb.d),
            "u": tangent(rng, cb.tangent_dim), "w": tangent(rng, cb.tangent_dim), "z": tangent(rng, cb.d)}


def _res_basic(pa: PrincipalAction, w, tol):
    """pr1*theta - pr2*theta is basic for the diagonal H-action and descends
    along tau to omega: rho(a^-1) omega(tau)(d tau) = theta_p - theta_q."""
    cb, pg = pa.cb, pa.pg
    H = cb.H
    x, y = np.asarray(w["x"], float), np.asarray(w["y"], float)
    a, b, k = H.exp(w["a"]), H.exp(w["b"]), H.exp(w["k"])
    u, v, z = (np.asarray(w[s], float) for s in ("u", "w", "z"))
    diff = cb.theta(x, a, u) - cb.theta(y, b, v)
    g = pg.gg.from_pair(x, a, y, b)
    descended = np.linalg.solve(cb.rho(a), pg.omega.evaluate(g, pg.gg.dtau(a, b, u, v)))
    horizontal = cb.theta(x, a, cb.fundamental(a, z)) - cb.theta(y, b, cb.fundamental(b, z))
    shifted = cb.theta(x, a @ k, u) - cb.theta(y, b @ k, v) - cb.rho(np.linalg.inv(k)) @ diff
    return float(max(np.max(np.abs(descended - diff)), np.max(np.abs(horizontal)),
                     np.max(np.abs(shifted))))


def _res_symbol_iso(pa: PrincipalAction, w, tol):
    """a_p maps the symbol at mu(p) bijectively onto ker(d pi) + ker(theta_p)."""
    cb, pg = pa.cb, pa.pg
    y, b = np.asarray(w["y"], float), cb.H.exp(w["b"])
    sym = symbol_space(pg, y, tol)
    a = pa.infinitesimal(y)
    # symbol vectors are (v, xi, 0); a acts on the first m + d coordinates
    sym_a = sym.basis[:cb.tangent_dim] if sym.dim else np.zeros((cb.tangent_dim, 0))
    image = a @ sym_a
    if sym.dim and numkit.rank_nullspace(image, tol)[0] != sym.dim:
        return float("inf")
    target = numkit.rank_nullspace(cb.theta_matrix(y, b), tol)[1]
    return numkit.subspace_distance(Subspace.span(image, cb.tangent_dim, tol), target)


H_ACTION = [
    Check("h_action_multiplicative", "the H-action is multiplicative for (0, theta) in the equivariant reading",
          "points", "exact", _draw_h_action, _res_h_multiplicative, "action"),
]
H_ACTION_LITERAL = Check("h_action_literal_invariance", "theta is invariant under right translation",
                         "points", "exact", _draw_h_action, _res_h_literal, "action")
GROUPOID_ACTION = [
    Check("action_multiplicative", "the groupoid action is multiplicative for (omega, theta)", "pairs",
          "exact", _draw_groupoid_action, _res_groupoid_multiplicative, "action"),
    Check("infinitesimal_action", "theta(a(alpha)) = omega(alpha)", "points", "exact",
          _draw_infinitesimal, _res_infinitesimal, "action"),
    Check("image_of_a", "the image of the infinitesimal action is ker(d pi)", "points", "exact",
          _draw_infinitesimal, _res_image, "action"),
    Check("basic_form_descent", "pr1*theta - pr2*theta is basic and descends to omega", "pairs", "exact",
          _draw_basic, _res_basic, "action"),
    Check("symbol_isomorphism", "a maps the symbol space onto the vertical kernel of theta", "points",
          "exact", _draw_infinitesimal, _res_symbol_iso, "action"),
]


def action_suite(pa: PrincipalAction, sampler: Sampler | None = None,
                 tol: Tolerances = DEFAULT_TOL) -> list[CheckReport]:
    checks = H_ACTION if pa.kind == "group" else GROUPOID_ACTION
    return [run_check(c, pa, sampler, tol, i) for i, c in enumerate(checks)]


# -- roundtrip ---------------------------------------------------------------------

def chart_center(pg: PfaffianGroupoid) -> np.ndarray:
    b = _chart(pg)
    return 0.5 * (b.lower + b.upper)


def _draw_roundtrip(pg, rng):
    m, d = pg.m, pg.d
    return {"x": _x(pg, rng), "h": algebra_coords(rng, d), "w": tangent(rng, m + d)}


def _res_roundtrip(pg: PfaffianGroupoid, w, tol):
    """theta rebuilt from omega on s^-1(x0) against the original theta."""
    cb = pg.gg.cb
    if cb is None:
        return float("inf")
    x0 = chart_center(pg)
    back = pfaffian_to_cartan(pg, x0, tol=tol, verify=False)
    x, h = np.asarray(w["x"], float), cb.H.exp(w["h"])
    vec = np.asarray(w["w"], float)
    want = cb.theta(x, h, vec)
    direct = theta_on_fibre(pg, x0, x, h, vec)
    return float(max(np.max(np.abs(back.theta(x, h, vec) - want)), np.max(np.abs(direct - want))))


def _res_roundtrip_kernel(pg: PfaffianGroupoid, w, tol):
    """dim ker(theta') equals dim of the symbol space."""
    x0 = chart_center(pg)
    back = pfaffian_to_cartan(pg, x0, tol=tol, verify=False)
    x, h = np.asarray(w["x"], float), pg.gg.H.exp(w["h"])
    ker = numkit.rank_nullspace(back.theta_matrix(x, h), tol)[1]
    return float(abs(ker.dim - symbol_space(pg, x, tol).dim))


ROUNDTRIP = [
    Check("roundtrip_theta", "theta recovered from omega on an s-fibre equals theta", "points", "exact",
          _draw_roundtrip, _res_roundtrip, "pfaffian"),
    Check("roundtrip_kernel", "kernel of the recovered theta is the pulled-back symbol space", "points",
          "structural", _draw_roundtrip, _res_roundtrip_kernel, "pfaffian"),
]
