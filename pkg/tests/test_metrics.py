"""Catalog fundamental functions: hand values, homogeneity, validity."""

import numpy as np
import pytest

from finslercalc.metrics import (MetricDomainError, PointTM, default_catalog,
                                 eval_F_value, eval_F_vertical, euclidean,
                                 fundamental_matrix, minkowski_quartic,
                                 randers, riemannian, sample_point,
                                 validate_at)


def test_euclidean_hand_value():
    spec = euclidean(2)
    assert eval_F_value(spec, [0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)


def test_quartic_hand_value():
    spec = minkowski_quartic([1.0, 1.0])
    F = eval_F_value(spec, [0.0, 0.0], [1.0, 1.0])
    assert F == pytest.approx(2.0 ** 0.25)
    # y^i y^j g_ij = F^2 by homogeneity
    p = PointTM([0.0, 0.0], [1.0, 1.0])
    g = fundamental_matrix(spec, p)
    assert p.y @ g @ p.y == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_euclidean_g_is_identity():
    spec = euclidean(3)
    p = PointTM([0.1, 0.2, 0.3], [0.5, -1.0, 2.0])
    np.testing.assert_allclose(fundamental_matrix(spec, p), np.eye(3), atol=1e-12)


@pytest.mark.parametrize("name", ["euclidean", "riemannian", "randers",
                                  "minkowski-quartic"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_homogeneity_and_validity(name, n):
    spec = default_catalog(n)[name]
    rng = np.random.default_rng(123)
    for _ in range(25):
        p = sample_point(rng, n)
        rep = validate_at(spec, p)
        assert max(rep.homogeneity_residuals.values()) < 1e-10
        assert rep.min_eigenvalue > 0.0
        F = eval_F_value(spec, p.x, p.y)
        assert F > 0.0
        for lam in (0.25, 3.0):
            assert eval_F_value(spec, p.x, lam * p.y) == pytest.approx(
                lam * F, rel=1e-12)


def test_vertical_jet_matches_full_jet():
    spec = default_catalog(3)["randers"]
    p = PointTM([0.2, -0.1, 0.4], [1.0, 0.5, -0.7])
    from finslercalc.metrics import eval_F
    full = eval_F(spec, p)
    vert = eval_F_vertical(spec, p)
    n = 3
    np.testing.assert_allclose(vert.val, full.val, atol=1e-14)
    np.testing.assert_allclose(vert.grad, full.grad[n:], atol=1e-14)
    np.testing.assert_allclose(vert.hess, full.hess[n:, n:], atol=1e-14)


def test_slit_condition_enforced():
    with pytest.raises(ValueError):
        PointTM([0.0, 0.0], [0.0, 0.0])


def test_randers_domain():
    # a randers F with huge drift |b|_a >= 1 goes non-positive somewhere
    n = 2
    b = np.zeros((n, n + 1))
    b[0, 0] = 2.0
    spec = randers(n, b=b)
    with pytest.raises(MetricDomainError):
        eval_F_value(spec, [0.0, 0.0], [-1.0, 0.0])


def test_riemannian_matches_a_matrix():
    from finslercalc.metrics import a_matrix
    spec = riemannian(3)
    rng = np.random.default_rng(5)
    for _ in range(10):
        p = sample_point(rng, 3)
        F = eval_F_value(spec, p.x, p.y)
        a = a_matrix(spec, p.x)
        assert F == pytest.approx(np.sqrt(p.y @ a @ p.y), rel=1e-12)
