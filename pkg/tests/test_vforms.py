"""Pointwise vertical-form algebra: splitting, projectors, classification."""

import numpy as np
import pytest

from finslercalc.geometry import frame_basis, liouville_frame
from finslercalc.metrics import PointTM, default_catalog, euclidean, sample_point
from finslercalc import vforms
from finslercalc.vforms import (MIXED, PURE_Q0, PURE_Q11, ZERO, VerticalForm,
                                basis_form, classify, interior_Z, omega0,
                                split, theta, xi1, xi2, zero_form)

E2 = euclidean(2)
P34 = PointTM([0.0, 0.0], [3.0, 4.0])
FR34 = liouville_frame(E2, P34)


def test_split_hand_value():
    # delta-y^1 = theta_1 + y^1 omega0 with y^1 omega0 = (0.36, 0.48) dy
    s = split(basis_form(2, (0,)), FR34)
    th = theta(FR34, 0)
    np.testing.assert_allclose(
        [s.part_sq0.get((0,)), s.part_sq0.get((1,))],
        [th.get((0,)), th.get((1,))], atol=1e-14)
    np.testing.assert_allclose(
        [s.part_sq1.get((0,)), s.part_sq1.get((1,))], [0.36, 0.48], atol=1e-14)


def test_omega0_hand_values():
    w0 = omega0(FR34)
    assert w0.evaluate([P34.y]) == pytest.approx(1.0, abs=1e-14)
    for a in (0, 1):
        assert w0.evaluate([FR34.X[a]]) == pytest.approx(0.0, abs=1e-14)


def test_classification_examples():
    assert classify(omega0(FR34), FR34) == PURE_Q11
    assert classify(theta(FR34, 0), FR34) == PURE_Q0
    assert classify(basis_form(2, (0,)), FR34) == MIXED
    assert classify(zero_form(2, 1), FR34) == ZERO


def test_wedge_determinant_convention():
    # (dy^0 ^ dy^1)(e0, e1) = 1 under the shuffle convention
    w = basis_form(3, (0,)).wedge(basis_form(3, (1,)))
    e0, e1 = np.eye(3)[0], np.eye(3)[1]
    assert w.evaluate([e0, e1]) == pytest.approx(1.0)
    assert w.evaluate([e1, e0]) == pytest.approx(-1.0)
    # associativity up to top degree
    a, b, c = (basis_form(3, (i,)) for i in range(3))
    lhs = a.wedge(b).wedge(c)
    rhs = a.wedge(b.wedge(c))
    assert (lhs - rhs).norm() == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n,q", [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2)])
def test_projector_laws_random(n, q):
    rng = np.random.default_rng(100 * n + q)
    spec = default_catalog(n)["randers"]
    for _ in range(40):
        p = sample_point(rng, n)
        fr = liouville_frame(spec, p)
        w = vforms.random_form(rng, n, q)
        s = split(w, fr)
        nw = max(1.0, w.norm())
        # reconstruction and idempotence / annihilation
        assert (s.part_sq0 + s.part_sq1 - w).norm() / nw < 1e-12
        assert (xi1(s.part_sq0, fr) - s.part_sq0).norm() / nw < 1e-12
        assert (xi2(s.part_sq1, fr) - s.part_sq1).norm() / nw < 1e-12
        assert xi2(s.part_sq0, fr).norm() / nw < 1e-12
        assert xi1(s.part_sq1, fr).norm() / nw < 1e-12
        # i_Z characterization
        assert interior_Z(s.part_sq0, fr).norm() / nw < 1e-12
        if q >= 2:
            assert interior_Z(interior_Z(w, fr), fr).norm() / nw < 1e-12


def test_interior_antiderivation_identity():
    # i_Z(omega0 ^ a) = omega0(Z) a - omega0 ^ i_Z(a)
    rng = np.random.default_rng(8)
    n = 3
    spec = default_catalog(n)["riemannian"]
    for q in (1, 2):
        p = sample_point(rng, n)
        fr = liouville_frame(spec, p)
        w0 = omega0(fr)
        a = vforms.random_form(rng, n, q)
        lhs = interior_Z(w0.wedge(a), fr)
        rhs = a * w0.evaluate([fr.Zcomp]) - w0.wedge(interior_Z(a, fr))
        assert (lhs - rhs).norm() < 1e-12


def test_theta_relations():
    n = 3
    spec = default_catalog(n)["randers"]
    rng = np.random.default_rng(13)
    p = sample_point(rng, n)
    fr = liouville_frame(spec, p)
    fb = frame_basis(spec, p)
    ths = [theta(fr, i) for i in range(n)]
    # sum t_i theta_i = 0 and theta_i(Z) = 0
    acc = zero_form(n, 1)
    for i in range(n):
        acc = acc + fr.t[i] * ths[i]
    assert acc.norm() < 1e-14
    for th in ths:
        assert abs(th.evaluate([fr.Zcomp])) < 1e-14
    # theta_i ^ theta_j is pure-(0,2,0)
    w = ths[0].wedge(ths[1])
    assert interior_Z(w, fr).norm() < 1e-14
    # Eq (2.2) equivalence: a (0,q-1,1)-form vanishes on kept-X tuples
    w2 = xi2(vforms.random_form(rng, n, 2), fr)
    assert vforms.vanishes_on_leaf_tuples(w2, fr, fb.kept) < 1e-12


def test_degree_and_dimension_guards():
    with pytest.raises(ValueError):
        VerticalForm(2, 1, {(0, 1): 1.0})
    with pytest.raises(ValueError):
        basis_form(2, (1, 0))
    with pytest.raises(ValueError):
        zero_form(2, 1).evaluate([])
    # beyond top degree the wedge is identically zero
    w = basis_form(2, (0, 1)).wedge(basis_form(2, (0,)))
    assert w.q == 3 and w.norm() == 0.0
