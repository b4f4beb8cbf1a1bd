import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cartanbundles import numkit
from cartanbundles.errors import DomainError, InvalidInputError
from cartanbundles.numkit import Subspace, Tolerances

J = np.array([[0.0, -1.0], [1.0, 0.0]])


def test_tolerances_validation():
    with pytest.raises(InvalidInputError):
        Tolerances(exact_tol=-1.0)
    with pytest.raises(InvalidInputError):
        Tolerances(exact_tol=1e-3, fd_tol=1e-4)


def test_rank_identity_and_zero():
    r, k = numkit.rank_nullspace(np.eye(2))
    assert r == 2 and k.dim == 0
    r, k = numkit.rank_nullspace(np.zeros((2, 2)))
    assert r == 0 and k.dim == 2


def test_rank_ones_kernel():
    r, k = numkit.rank_nullspace([[1.0, 1.0], [1.0, 1.0]])
    assert r == 1
    v = k.basis[:, 0]
    assert abs(abs(v @ np.array([1.0, -1.0]) / np.sqrt(2)) - 1.0) < 1e-12


def test_rank_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        numkit.rank_nullspace([[np.nan, 1.0]])


def test_rank_is_scale_invariant():
    m = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])
    assert numkit.rank_nullspace(m)[0] == numkit.rank_nullspace(1e-8 * m)[0] == 1


def test_kernel_ordered_by_singular_value():
    m = np.diag([3.0, 1e-13, 0.0])
    _, k = numkit.rank_nullspace(m)
    assert k.dim == 2
    assert abs(k.basis[2, 0]) == pytest.approx(1.0)  # exact zero first


def test_subspace_compare_examples():
    e1 = Subspace.span(np.array([[1.0], [0.0]]))
    e2 = Subspace.span(np.array([[0.0], [1.0]]))
    diag = Subspace.span(np.array([[1.0], [1.0]]))
    assert numkit.subspace_compare(e1, e1) == (True, 0.0)
    eq, ang = numkit.subspace_compare(e1, e2)
    assert not eq and ang == pytest.approx(np.pi / 2)
    eq, ang = numkit.subspace_compare(e1, diag)
    assert not eq and ang == pytest.approx(np.pi / 4)


def test_subspace_ambient_mismatch():
    with pytest.raises(InvalidInputError):
        numkit.subspace_compare(Subspace.full(2), Subspace.full(3))


def test_sum_and_intersection():
    a = Subspace.span(np.eye(3)[:, :2])
    b = Subspace.span(np.eye(3)[:, 1:])
    assert numkit.subspace_sum(a, b).dim == 3
    inter = numkit.subspace_intersection(a, b)
    assert inter.dim == 1 and abs(abs(inter.basis[1, 0]) - 1.0) < 1e-12


def test_matrix_exp_examples():
    assert np.allclose(numkit.matrix_exp(np.zeros((3, 3))), np.eye(3))
    assert np.allclose(numkit.matrix_exp(np.pi / 2 * J), J, atol=1e-12)
    e12 = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(numkit.matrix_exp(e12), np.eye(2) + e12)
    with pytest.raises(InvalidInputError):
        numkit.matrix_exp(np.zeros((2, 3)))


def test_matrix_log_examples():
    assert np.allclose(numkit.matrix_log(np.eye(2)), 0.0)
    assert np.allclose(numkit.matrix_log(numkit.matrix_exp(0.1 * J)), 0.1 * J, atol=1e-12)
    with pytest.raises(DomainError):
        numkit.matrix_log(-np.eye(2))


def test_matrix_exp_derivative_matches_fd():
    x = np.array([[0.1, 0.3], [-0.2, 0.05]])
    d = np.array([[0.0, 1.0], [0.5, 0.0]])
    fd = numkit.fd_partial(lambda t: numkit.matrix_exp(x + t[0] * d), np.zeros(1), np.ones(1))
    assert np.allclose(numkit.matrix_exp_derivative(x, d), fd, atol=1e-9)


def test_fd_partial_examples():
    assert abs(numkit.fd_partial(lambda x: x[0] ** 2, np.array([1.0]), np.array([1.0]), 1e-5) - 2) < 1e-9
    assert numkit.fd_partial(lambda x: 5.0, np.array([1.0]), np.array([1.0])) == 0.0
    v = numkit.fd_partial(lambda p: p[0] * p[1], np.array([2.0, 3.0]), np.array([1.0, 0.0]), 1e-5)
    assert abs(v - 3.0) < 1e-9


def test_projectors_are_complementary():
    m = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
    p, k = numkit.row_space_projector(m), numkit.kernel_projector(m)
    assert np.allclose(p + k, np.eye(3))
    assert np.allclose(m @ k, 0.0, atol=1e-12)


matrices = arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)),
                  elements=st.floats(-10, 10, allow_nan=False, allow_infinity=False))


@given(matrices)
@settings(max_examples=60, deadline=None)
def test_rank_nullity(m):
    r, k = numkit.rank_nullspace(m)
    assert r + k.dim == m.shape[1]
    assert np.allclose(k.basis.T @ k.basis, np.eye(k.dim), atol=1e-10)
    scale = max(1.0, np.abs(m).max())
    assert np.linalg.norm(m @ k.basis) <= 1e-8 * scale * max(m.shape)


@given(arrays(np.float64, (3, 3), elements=st.floats(-0.4, 0.4)))
@settings(max_examples=60, deadline=None)
def test_exp_log_roundtrip(x):
    g = numkit.matrix_exp(x)
    assert np.allclose(numkit.matrix_exp(numkit.matrix_log(g)), g, atol=1e-9)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=40, deadline=None)
def test_fd_exact_on_quadratics(a, b, c, x0):
    f = lambda x: a * x[0] ** 2 + b * x[0] + c
    step = 1e-5
    got = numkit.fd_partial(f, np.array([x0]), np.array([1.0]), step)
    scale = max(1.0, abs(a) * x0 * x0 + abs(b * x0) + abs(c))
    assert abs(got - (2 * a * x0 + b)) <= 100 * np.finfo(float).eps * scale / step
