import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartanbundles import catalog, groupoid as gp, numkit
from cartanbundles.cartan import CartanBundle, CartanGauge, Coefficients
from cartanbundles.errors import ComposabilityError, DegenerateFormError, RefusedConstructionError
from cartanbundles.groupoid import Arrow, GaugeGroupoid, MultForm, PrincipalAction
from cartanbundles.sampling import reevaluate

E2 = catalog.build("euclidean")
PG = gp.pfaffian_of(E2)
GG = PG.gg
RF = catalog.build("riemannian_flat")
PR = gp.pfaffian_of(RF)

vals = st.floats(-0.5, 0.5)


def arrow(x, c, y, H=E2.H):
    return Arrow(np.asarray(x, float), H.exp(c), np.asarray(y, float))


def test_arrow_examples():
    x, y, z = np.array([0.1, 0.2]), np.array([-0.3, 0.0]), np.array([0.5, 0.5])
    g = GG.mult(Arrow(x, np.eye(2), y), Arrow(y, np.eye(2), z))
    assert np.allclose(g.h, np.eye(2)) and np.allclose(g.x, x) and np.allclose(g.y, z)
    g = arrow(x, [0.7], y)
    unit = GG.mult(g, GG.inverse(g))
    assert np.allclose(unit.h, np.eye(2)) and np.allclose(unit.x, x) and np.allclose(unit.y, x)
    with pytest.raises(ComposabilityError):
        GG.mult(g, g)


@given(st.lists(vals, min_size=9, max_size=9))
@settings(max_examples=30, deadline=None)
def test_groupoid_axioms(c):
    x, y, z, w = np.array(c[:2]), np.array(c[2:4]), np.array(c[4:6]), np.array([c[6], -c[7]])
    g1, g2, g3 = arrow(x, [c[8]], y), arrow(y, [c[6]], z), arrow(z, [c[7]], w)
    a = GG.mult(GG.mult(g1, g2), g3)
    b = GG.mult(g1, GG.mult(g2, g3))
    assert np.allclose(a.h, b.h, atol=1e-12)
    left = GG.mult(GG.unit(x), g1)
    right = GG.mult(g1, GG.unit(y))
    assert np.allclose(left.h, g1.h) and np.allclose(right.h, g1.h)
    inv = GG.mult(GG.inverse(g1), g1)
    assert np.allclose(inv.h, np.eye(2), atol=1e-12)
    assert np.allclose(E2.rho(g1.h @ g2.h), E2.rho(g1.h) @ E2.rho(g2.h), atol=1e-12)


def _curve(g: Arrow, t_vec, s, H):
    m, d = 2, H.dim
    return Arrow(g.x + s * t_vec[:m], H.exp(s * t_vec[m:m + d]) @ g.h, g.y + s * t_vec[m + d:])


def _arrow_velocity(fn, H, step=1e-6):
    plus, minus, mid = fn(step), fn(-step), fn(0.0)
    eta = H.vee((plus.h - minus.h) / (2 * step) @ np.linalg.inv(mid.h), tol=1e-6)
    return np.concatenate([(plus.x - minus.x) / (2 * step), eta, (plus.y - minus.y) / (2 * step)])


def test_differentials_match_finite_differences(rng):
    H = RF.H
    gg = GaugeGroupoid(RF.bundle, RF)
    for _ in range(5):
        x, y, z = rng.uniform(-0.5, 0.5, (3, 2))
        g1, g2 = arrow(x, rng.uniform(-1, 1, 1), y, H), arrow(y, rng.uniform(-1, 1, 1), z, H)
        vy = rng.uniform(-1, 1, 2)
        t1 = np.concatenate([rng.uniform(-1, 1, 3), vy])
        t2 = np.concatenate([vy, rng.uniform(-1, 1, 3)])
        fd = _arrow_velocity(lambda s: gg.mult(_curve(g1, t1, s, H), _curve(g2, t2, s, H)), H)
        assert np.allclose(gg.dmult(g1, t1, t2), fd, atol=1e-7)
        fd = _arrow_velocity(lambda s: gg.inverse(_curve(g1, t1, s, H)), H)
        assert np.allclose(gg.dinverse(g1, t1), fd, atol=1e-7)


def test_dtau_matches_finite_differences(rng):
    H = catalog.build("affine").H
    gg = GaugeGroupoid(catalog.build("affine").bundle)
    x, y = rng.uniform(-0.5, 0.5, (2, 2))
    a, b = H.exp(rng.uniform(-0.4, 0.4, 4)), H.exp(rng.uniform(-0.4, 0.4, 4))
    u, w = rng.uniform(-1, 1, (2, 6))

    def tau(s):
        return gg.from_pair(x + s * u[:2], H.exp(s * u[2:]) @ a, y + s * w[:2], H.exp(s * w[2:]) @ b)

    assert np.allclose(gg.dtau(a, b, u, w), _arrow_velocity(tau, H), atol=1e-6)


def test_omega_examples():
    x = np.array([0.3, -0.1])
    v = np.array([0.5, 0.2])
    assert np.allclose(PG.omega.evaluate(GG.unit(x), GG.dunit(v)), 0.0)
    g = arrow(x, [0.8], x)
    xi = np.array([0.6])
    assert np.allclose(PG.omega.evaluate(g, np.concatenate([[0, 0], xi, [0, 0]])), E2.gauge.lam @ xi)
    rank = numkit.rank_nullspace(PG.omega.matrix(arrow(x, [0.4], [0.1, 0.1])))[0]
    assert rank == E2.r


def test_multiplicative(small):
    assert gp.check_multiplicative(PG, small).passed
    bad = gp.pfaffian_of(E2, gp.corrupted_omega(E2))
    rep = gp.check_multiplicative(bad, small)
    assert not rep.passed and rep.max_residual > 1e-3
    assert reevaluate(gp.MULTIPLICATIVE, bad, rep.witness) == rep.max_residual


def test_multiplicative_trivial_coefficients(rng):
    cb = CartanBundle(RF.bundle, Coefficients(1, lambda h: np.eye(1)),
                      CartanGauge(lambda x: np.array([[1.0, x[0]]]), np.zeros((1, 1))))
    pg = gp.pfaffian_of(cb)
    g1, g2 = arrow([0.1, 0.2], [0.3], [0.0, 0.4], cb.H), arrow([0.0, 0.4], [-0.6], [0.2, -0.2], cb.H)
    t1 = np.concatenate([rng.uniform(-1, 1, 3), [0.5, 0.5]])
    t2 = np.concatenate([[0.5, 0.5], rng.uniform(-1, 1, 3)])
    lhs = pg.omega.evaluate(pg.gg.mult(g1, g2), pg.gg.dmult(g1, t1, t2))
    assert np.allclose(lhs, pg.omega.evaluate(g1, t1) + pg.omega.evaluate(g2, t2))


def test_equivariance_lemma(small):
    assert gp.check_equivariance_lemma(PG, small).passed
    assert not gp.check_equivariance_lemma(gp.pfaffian_of(E2, gp.corrupted_omega(E2)), small).passed


def test_transversality_geometry_and_h_structure(small):
    assert all(r.passed for r in gp.check_transversality(PG, small))
    assert all(r.passed for r in gp.check_transversality(PR, small))
    g = arrow([0.1, 0.2], [0.5], [-0.3, 0.3], RF.H)
    ker_w, ker_s, ker_t = gp._kernels(PR, g, numkit.DEFAULT_TOL)
    inter = numkit.subspace_intersection(ker_w, ker_s)
    assert inter.dim == RF.d
    assert ker_w.dim + ker_s.dim - inter.dim == PR.gg.dim
    gk = gp._kernels(PG, arrow([0.1, 0.2], [0.5], [-0.3, 0.3]), numkit.DEFAULT_TOL)
    assert numkit.subspace_intersection(gk[0], gk[1]).dim == 0
    assert numkit.subspace_intersection(gk[0], gk[2]).dim == 0


def test_symbol_space_dims():
    for x in ([0.0, 0.0], [0.5, -0.5]):
        assert gp.symbol_space(PG, x).dim == 0
        assert gp.symbol_space(PR, x).dim == 1


def test_check_pfaffian(small):
    for pg in (PG, PR, gp.pfaffian_of(catalog.build("riemannian_flat", {"n": 3}))):
        reps = gp.check_pfaffian(pg, small)
        assert all(r.passed for r in reps), [r.line() for r in reps]


def test_pfaffian_to_cartan_roundtrip(rng):
    for cb in (E2, RF, catalog.build("perturbed_euclidean")):
        pg = gp.pfaffian_of(cb)
        back = gp.pfaffian_to_cartan(pg, [0.1, -0.2], verify=False)
        for _ in range(5):
            x = rng.uniform(-0.9, 0.9, 2)
            h = cb.H.exp(rng.uniform(-0.5, 0.5, cb.d))
            w = rng.uniform(-1, 1, cb.tangent_dim)
            assert np.allclose(back.theta(x, h, w), cb.theta(x, h, w), atol=1e-12)
            assert np.allclose(gp.theta_on_fibre(pg, [0.1, -0.2], x, h, w),
                               cb.theta(x, h, w), atol=1e-12)


def test_pfaffian_to_cartan_refuses_corrupted(small):
    with pytest.raises(RefusedConstructionError):
        gp.pfaffian_to_cartan(gp.pfaffian_of(E2, gp.corrupted_omega(E2)), [0.0, 0.0], small)


def test_unit_algebroid():
    ua = gp.unit_algebroid(PG, [0.2, 0.1])
    assert ua.invertible and ua.kernel_dim == 0
    # the anchor is dt of the preimage: surjective onto T_xM, not zero
    assert numkit.rank_nullspace(ua.anchor)[0] == 2
    assert np.allclose(ua.anchor @ ua.restriction, np.hstack([np.eye(2), np.zeros((2, 1))]))
    ur = gp.unit_algebroid(PR, [0.2, 0.1])
    assert not ur.invertible and ur.kernel_dim == RF.d and ur.anchor is None


def test_adjoint_compatibility(small):
    reps = {r.check: r for r in gp.check_unit_algebroid(gp.pfaffian_of(catalog.build("affine")), small)}
    assert reps["adjoint_compatibility"].passed and reps["unit_iso"].passed


def test_tangent_rep(rng):
    x = np.array([0.2, 0.1])
    v = np.array([0.3, -0.7])
    assert np.allclose(gp.tangent_rep(PG, GG.unit(x), v), v)
    g1, g2 = arrow(x, [0.5], [0.0, 0.3]), arrow([0.0, 0.3], [-0.2], [0.4, 0.4])
    both = gp.tangent_rep(PG, GG.mult(g1, g2), v)
    assert np.allclose(both, gp.tangent_rep(PG, g1, gp.tangent_rep(PG, g2, v)))
    assert gp.tangent_rep_spread(PR, arrow(x, [0.5], [0.0, 0.3], RF.H), v, rng) < 1e-12
    degenerate = gp.PfaffianGroupoid(GG, MultForm(2, lambda g: GG.ds()), PG.rep)
    with pytest.raises(DegenerateFormError):
        gp.tangent_rep(degenerate, g1, v)


def test_rep_splitting(small):
    for pg, rank in ((PG, 3), (PR, 2)):
        reps = gp.rep_splitting_check(pg, small)
        assert all(r.passed for r in reps), [r.line() for r in reps]
        assert pg.r == rank


def test_action_suites(small):
    for cb in (E2, RF):
        for pa in (PrincipalAction.of_group(cb), PrincipalAction.of_groupoid(cb)):
            reps = gp.action_suite(pa, small)
            assert all(r.passed for r in reps), [r.line() for r in reps]


def test_literal_invariance_flags_nontrivial_rho(small):
    from cartanbundles.sampling import run_check
    assert not run_check(gp.H_ACTION_LITERAL, PrincipalAction.of_group(E2), small).passed
