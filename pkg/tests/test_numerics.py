import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lp_lab.errors import EvaluationError, InfeasibleAffine, InfeasibleSet, NoNonzeroSingularValue
from lp_lab.numerics import (
    StandardPolyhedron,
    min_norm_affine_point,
    minimize_scalar_quasiconvex,
    project_null_space,
    project_polyhedron,
    singular_extremes,
)
from oracles import affine_mesh_projection, mesh_projection, mp_singular_extremes, simplex_projection

SQ3 = math.sqrt(3.0)
A_SIMPLEX = np.full((1, 3), SQ3 / 3)


@pytest.mark.parametrize("A, expected", [
    (A_SIMPLEX, (1.0, 1.0)),
    (np.eye(2), (1.0, 1.0)),
    (np.array([[3.0, 0], [0, 1], [0, 0]]), (3.0, 1.0)),
])
def test_singular_extremes_examples(A, expected):
    ext = singular_extremes(A)
    assert ext.sigma_max_plus == pytest.approx(expected[0], abs=1e-12)
    assert ext.sigma_min_plus == pytest.approx(expected[1], abs=1e-12)


def test_singular_extremes_zero_matrix():
    with pytest.raises(NoNonzeroSingularValue):
        singular_extremes(np.zeros((2, 3)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_singular_extremes_match_gram_eigenvalues(m, n, data):
    A = data.draw(arrays(np.float64, (m, n), elements=st.integers(-5, 5).map(float)))
    if not np.any(A):
        return
    hi, lo = mp_singular_extremes(A)
    ext = singular_extremes(A)
    assert abs(ext.sigma_max_plus - hi) <= 1e-10 * max(1.0, hi)
    assert abs(ext.sigma_min_plus - lo) <= 1e-10 * max(1.0, hi)


def test_min_norm_point_examples():
    np.testing.assert_allclose(min_norm_affine_point(A_SIMPLEX, [1.0]), np.full(3, 1 / SQ3), atol=1e-12)
    b = np.array([2.0, -1.0, 0.5])
    np.testing.assert_allclose(min_norm_affine_point(np.eye(3), b), b, atol=1e-12)
    np.testing.assert_allclose(min_norm_affine_point([[1.0, 0.0]], [0.0]), [0.0, 0.0], atol=1e-15)


def test_min_norm_point_inconsistent():
    with pytest.raises(InfeasibleAffine):
        min_norm_affine_point([[1.0, 1.0], [2.0, 2.0]], [1.0, 3.0])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3), st.integers(0, 2**31))
def test_min_norm_point_properties(m, extra, seed):
    rng = np.random.default_rng(seed)
    n = m + extra
    A = rng.standard_normal((m, n))
    b = A @ rng.standard_normal(n)
    q = min_norm_affine_point(A, b)
    np.testing.assert_allclose(A @ q, b, atol=1e-9 * (1 + np.linalg.norm(b)))
    # q is orthogonal to null(A): any other solution is longer
    w = project_null_space(A, rng.standard_normal(n))
    assert abs(q @ w) <= 1e-9 * (1 + np.linalg.norm(w))
    ref = np.linalg.pinv(A) @ b
    np.testing.assert_allclose(q, ref, atol=1e-9)


def test_project_null_space_examples():
    c = np.array([-1.0, 0.0, 1.0]) / math.sqrt(2)
    np.testing.assert_allclose(project_null_space(A_SIMPLEX, c), c, atol=1e-15)
    np.testing.assert_allclose(project_null_space(A_SIMPLEX, [2.0, 2.0, 2.0]), 0.0, atol=1e-14)
    np.testing.assert_allclose(project_null_space([[1.0, 0.0]], [3.0, 5.0]), [0.0, 5.0], atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**31))
def test_project_null_space_properties(m, n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    v = rng.standard_normal(n)
    r = project_null_space(A, v)
    assert np.linalg.norm(A @ r) <= 1e-10 * np.linalg.norm(A, 2) * np.linalg.norm(v) + 1e-14
    # residual lies in the row space, so it is orthogonal to r
    assert abs((v - r) @ r) <= 1e-10 * (1 + np.linalg.norm(v)) ** 2


def test_project_polyhedron_simplex_example():
    z, d = project_polyhedron(np.array([SQ3 + 1, -1.0, 0.0]), A_SIMPLEX, [1.0])
    np.testing.assert_allclose(z, [SQ3, 0, 0], atol=1e-12)
    assert d == pytest.approx(math.sqrt(2), abs=1e-12)


def test_project_polyhedron_feasible_point_is_fixed():
    x = np.array([0.5, 0.7, SQ3 - 1.2])
    z, d = project_polyhedron(x, A_SIMPLEX, [1.0])
    np.testing.assert_allclose(z, x, atol=1e-12)
    assert d <= 1e-12


def test_project_polyhedron_normal_offset_returns_barycenter():
    bary = np.full(3, SQ3 / 3)
    x = bary + 2.5 * np.ones(3) / SQ3
    z, _ = project_polyhedron(x, A_SIMPLEX, [1.0])
    np.testing.assert_allclose(z, bary, atol=1e-12)
    ref, _ = mesh_projection(x, SQ3 * np.eye(3))
    np.testing.assert_allclose(z, ref, atol=1e-4)


def test_project_polyhedron_empty():
    with pytest.raises(InfeasibleSet):
        project_polyhedron(np.zeros(2), [[1.0, 1.0]], [-1.0])


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, 4, elements=st.floats(-3, 3)), st.floats(0.1, 5))
def test_project_polyhedron_matches_simplex_threshold_rule(x, radius):
    z, d = project_polyhedron(x, np.ones((1, 4)), [radius])
    ref = simplex_projection(x, radius)
    np.testing.assert_allclose(z, ref, atol=1e-9)
    assert d == pytest.approx(np.linalg.norm(x - ref), abs=1e-9)


def _random_polytope(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    x0 = rng.uniform(0.2, 1.5, n)
    return A, A @ x0, rng


@pytest.mark.parametrize("seed", range(6))
def test_project_polyhedron_matches_mesh_2d_and_3d(seed):
    from lp_lab.oracle import enumerate_vertices

    # 4 variables, 2 equalities -> 2-D polygon; 4 variables, 1 equality -> 3-D polytope
    m = 2 if seed % 2 == 0 else 1
    A, b, rng = _random_polytope(seed, m, 4)
    A = np.vstack([A, np.ones((1, 4))])
    b = np.append(b, 4.0)
    try:
        V = enumerate_vertices(A, b)
    except InfeasibleSet:
        pytest.skip("random slice empty")
    x = V.mean(axis=0) + 2.0 * rng.standard_normal(4)
    z, d = project_polyhedron(x, A, b)
    _, d_ref = affine_mesh_projection(x, A, b, V)
    assert d <= d_ref + 1e-9
    assert d_ref - d <= 1e-4


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(2, 6))
def test_projection_is_feasible_idempotent_and_optimal(seed, m, extra):
    n = m + extra
    A, b, rng = _random_polytope(seed, m, n)
    x = 3.0 * rng.standard_normal(n)
    poly = StandardPolyhedron(A, b)
    z, d = poly.project(x)
    assert poly.contains(z, 1e-8)
    z2, d2 = poly.project(z)
    np.testing.assert_allclose(z2, z, atol=1e-9)
    assert d2 <= 1e-9
    # variational inequality against feasible points
    for _ in range(20):
        w = rng.uniform(0.0, 2.0, n)
        u, _ = poly.project(w)
        assert (x - z) @ (u - z) <= 1e-7 * (1 + np.linalg.norm(x)) ** 2


def test_minimize_scalar_examples():
    t, v = minimize_scalar_quasiconvex(lambda r: (r - 1) ** 2, 0.0, 3.0)
    assert t == pytest.approx(1.0, abs=1e-6) and v == pytest.approx(0.0, abs=1e-12)
    t, v = minimize_scalar_quasiconvex(lambda r: math.sqrt(6), 1e-9, 1 / SQ3)
    assert v == math.sqrt(6)
    t, v = minimize_scalar_quasiconvex(lambda r: 1 / r + r, 0.1, 10.0)
    assert t == pytest.approx(1.0, abs=1e-5) and v == pytest.approx(2.0, abs=1e-10)


def test_minimize_scalar_monotone_returns_endpoint():
    t, v = minimize_scalar_quasiconvex(lambda r: r, 0.5, 2.0)
    assert (t, v) == (0.5, 0.5)


def test_minimize_scalar_rejects_non_finite():
    with pytest.raises(EvaluationError):
        minimize_scalar_quasiconvex(lambda r: math.inf if r > 1 else r, 0.0, 3.0)
    with pytest.raises(ValueError):
        minimize_scalar_quasiconvex(lambda r: r, 1.0, 1.0)
