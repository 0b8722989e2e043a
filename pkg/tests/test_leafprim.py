"""Leaf paths, path integrals, degree-1 primitive reconstruction, basics."""

import numpy as np
import pytest

from finslercalc.metrics import (default_catalog, euclidean, eval_F_value,
                                 eval_F_vertical)
from finslercalc import leafprim, vcalc
from finslercalc.leafprim import (NotClosedError, PathError, is_basic,
                                  leaf_path, path_integral, primitive_1form,
                                  project_to_leaf)

E2 = euclidean(2)
X0 = np.zeros(2)


def test_project_to_leaf():
    lp = project_to_leaf(E2, X0, np.array([3.0, 4.0]), 1.0)
    np.testing.assert_allclose(lp.y, [0.6, 0.8], atol=1e-14)
    assert eval_F_value(E2, X0, lp.y) == pytest.approx(1.0, abs=1e-12)


def test_quarter_arc_stays_on_unit_circle():
    a = project_to_leaf(E2, X0, np.array([1.0, 0.0]), 1.0)
    b = project_to_leaf(E2, X0, np.array([0.0, 1.0]), 1.0)
    path = leaf_path(E2, a, b)
    for t in np.linspace(0.0, 1.0, 33):
        assert np.linalg.norm(path.point(t)) == pytest.approx(1.0, abs=1e-12)
        # tangent is tangent to the circle
        assert path.point(t) @ path.tangent(t) == pytest.approx(0.0, abs=1e-6)


def test_antipodal_rejected():
    a = project_to_leaf(E2, X0, np.array([1.0, 0.0]), 1.0)
    b = project_to_leaf(E2, X0, np.array([-1.0, 0.0]), 1.0)
    with pytest.raises(PathError):
        leaf_path(E2, a, b)


def test_gradient_theorem_on_leaf():
    # integral of d'f along a leaf path equals f(b) - f(a)
    rng = np.random.default_rng(3)
    for name in ("euclidean", "randers"):
        spec = default_catalog(3)[name]
        x0 = rng.uniform(-1, 1, 3)
        f = vcalc.mul_fields(vcalc.coordinate_field(0), vcalc.coordinate_field(1))
        omega = vcalc.d_prime(vcalc.scalar_form_field(3, f))
        a = project_to_leaf(spec, x0, rng.normal(size=3), 1.2)
        b = project_to_leaf(spec, x0, rng.normal(size=3), 1.2)
        val = path_integral(spec, omega, leaf_path(spec, a, b))
        truth = f(spec, b.point()).val - f(spec, a.point()).val
        assert val == pytest.approx(truth, abs=1e-9)


def test_closed_loop_integral_vanishes():
    rng = np.random.default_rng(7)
    spec = default_catalog(3)["riemannian"]
    x0 = rng.uniform(-1, 1, 3)
    f = vcalc.polynomial_field(0.0, rng.uniform(-1, 1, 3), rng.uniform(-1, 1, (3, 3)))
    omega = vcalc.d_prime(vcalc.scalar_form_field(3, f))
    pts = [project_to_leaf(spec, x0, v, 1.0) for v in
           (np.array([1.0, 0.2, 0.1]), np.array([0.1, 1.0, 0.3]),
            np.array([0.2, 0.1, 1.0]))]
    loop = sum(path_integral(spec, omega,
                             leaf_path(spec, pts[i], pts[(i + 1) % 3]))
               for i in range(3))
    assert abs(loop) < 1e-9


def test_primitive_reconstruction_recovers_potential():
    rng = np.random.default_rng(11)
    spec = default_catalog(3)["randers"]
    x0 = rng.uniform(-1, 1, 3)
    f = vcalc.mul_fields(vcalc.coordinate_field(0), vcalc.coordinate_field(1))
    omega = vcalc.d_prime(vcalc.scalar_form_field(3, f))
    base = project_to_leaf(spec, x0, rng.normal(size=3), 1.0)
    targets = [project_to_leaf(spec, x0, rng.normal(size=3), 1.0)
               for _ in range(2)]
    res = primitive_1form(spec, omega, base, targets, rng=rng)
    for tgt, val in zip(targets, res.values):
        truth = (f(spec, tgt.point()).val - f(spec, base.point()).val)
        assert val == pytest.approx(truth, abs=1e-8)
    assert res.dprime_residual < 1e-6
    assert res.path_dependence < 1e-7
    assert res.closedness < 1e-7


def test_non_closed_input_rejected():
    rng = np.random.default_rng(13)
    spec = default_catalog(3)["riemannian"]
    x0 = rng.uniform(-1, 1, 3)
    bad = vcalc.xi1_field(vcalc.random_polynomial_form_field(rng, 3, 1))
    base = project_to_leaf(spec, x0, rng.normal(size=3), 1.0)
    tgt = project_to_leaf(spec, x0, rng.normal(size=3), 1.0)
    with pytest.raises(NotClosedError):
        primitive_1form(spec, bad, base, [tgt], rng=rng)


def test_mixed_integrand_rejected():
    rng = np.random.default_rng(17)
    spec = default_catalog(2)["euclidean"]
    mixed = vcalc.random_polynomial_form_field(rng, 2, 1)
    a = project_to_leaf(spec, X0, np.array([1.0, 0.3]), 1.0)
    b = project_to_leaf(spec, X0, np.array([0.3, 1.0]), 1.0)
    with pytest.raises(ValueError):
        path_integral(spec, mixed, leaf_path(spec, a, b))


def test_is_basic():
    rng = np.random.default_rng(19)
    spec = default_catalog(3)["randers"]
    x0 = rng.uniform(-1, 1, 3)
    samples = [project_to_leaf(spec, x0, rng.normal(size=3), 1.0)
               for _ in range(6)]
    ok, resid = is_basic(spec, lambda s, p: eval_F_vertical(s, p) ** 2, samples)
    assert ok and resid < 1e-9
    ok, _ = is_basic(spec, vcalc.constant_field(2.5), samples)
    assert ok
    ok, resid = is_basic(spec, vcalc.coordinate_field(0), samples)
    assert not ok and resid > 1e-3
