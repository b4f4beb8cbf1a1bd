import numpy as np
import pytest

from cartanbundles import liegroups as lg
from cartanbundles.errors import NotReductiveError
from cartanbundles.klein import (KleinPair, ModelGeometry, ReductiveSplitting, check_klein_pair,
                                 check_model_geometry, reductive_split)


@pytest.fixture
def se2_model():
    _, incl = lg.SE(2)
    return ModelGeometry.from_inclusion(incl, semidirect=True)


def test_klein_pairs_close():
    for G, incl in (lg.SE(2), lg.Aff(2)):
        assert check_klein_pair(KleinPair.from_inclusion(incl)).passed


def test_rotation_plus_translation_is_not_a_subalgebra():
    G, _ = lg.SE(2)
    rep = check_klein_pair(KleinPair(G, np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])))
    assert not rep.passed
    assert rep.max_residual == pytest.approx(1.0)


def test_model_geometry_checks(se2_model):
    reports = check_model_geometry(se2_model, samples=20)
    assert [r.check for r in reports] == ["rho_homomorphism", "rho_extends_adjoint"]
    assert all(r.passed for r in reports)
    assert np.allclose(se2_model.rho(np.eye(2)), np.eye(3))


def test_rho_conjugated_on_l_only_still_extends_adjoint(se2_model):
    S = np.diag([1.0, 2.0, 3.0])
    m = ModelGeometry(se2_model.pair, se2_model.H, lambda h: S @ se2_model.rho(h) @ np.linalg.inv(S))
    assert all(r.passed for r in check_model_geometry(m, samples=20))


def test_rho_breaking_adjoint_is_reported(se2_model):
    m = ModelGeometry(se2_model.pair, se2_model.H, lambda h: np.eye(3))
    hom, ad = check_model_geometry(m, samples=5)
    assert hom.passed and ad.passed  # SO(2) is abelian: Ad on h is trivial
    G, incl = lg.Aff(2)
    gl = ModelGeometry(KleinPair.from_inclusion(incl), incl.sub, lambda h: np.eye(6))
    hom, ad = check_model_geometry(gl, samples=5)
    assert hom.passed and not ad.passed


def test_se2_split(se2_model):
    split = reductive_split(se2_model)
    assert np.allclose(split.pr_h @ [1, 0, 0], [1, 0, 0])
    assert np.allclose(split.pr_l @ [0, 1, 0], [0, 1, 0])
    assert split.l_dim == 2


def test_affine_split_translations():
    _, incl = lg.Aff(2)
    m = ModelGeometry.from_inclusion(incl)
    split = reductive_split(m, candidate=np.vstack([np.zeros((4, 2)), np.eye(2)]))
    assert np.allclose(split.pr_l, np.diag([0, 0, 0, 0, 1, 1]))


def test_non_invariant_candidate_rejected(se2_model):
    cand = np.array([[0.0, 1.0], [1.0, 0.0], [0.0, -1.0]])  # span{e1, J - e2}
    with pytest.raises(NotReductiveError):
        reductive_split(se2_model, candidate=cand)


def test_non_complement_rejected(se2_model):
    with pytest.raises(NotReductiveError):
        ReductiveSplitting(se2_model.pair.h_coords, np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("pair", [lg.SE(2), lg.SE(3), lg.Aff(2)], ids=lambda p: p[0].name)
def test_projection_identities(pair):
    _, incl = pair
    split = reductive_split(ModelGeometry.from_inclusion(incl), samples=10)
    h, l = split.pr_h, split.pr_l
    D = h.shape[0]
    for lhs, rhs in ((h @ h, h), (l @ l, l), (h @ l, np.zeros((D, D))), (h + l, np.eye(D))):
        assert np.allclose(lhs, rhs, atol=1e-9)
    assert incl.sub.dim + split.l_dim == D
