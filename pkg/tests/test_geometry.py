"""Frame, spray and fundamental tensor: hand values and independent oracles."""

import numpy as np
import pytest

from finslercalc.geometry import (frame_basis, fundamental_tensor,
                                  liouville_frame, sasaki_pair, spray)
from finslercalc.jets import fd_oracle
from finslercalc.metrics import (PointTM, default_catalog, euclidean,
                                 eval_F_value, sample_point)
from finslercalc.vcalc import t_field

P34 = PointTM([0.0, 0.0], [3.0, 4.0])
E2 = euclidean(2)


def test_euclidean_hand_values():
    fr = liouville_frame(E2, P34)
    np.testing.assert_allclose(fr.t, [0.12, 0.16], atol=1e-14)
    np.testing.assert_allclose(fr.t_from_dF, [0.12, 0.16], atol=1e-14)
    np.testing.assert_allclose(fr.X[0], [0.64, -0.48], atol=1e-14)
    np.testing.assert_allclose(fr.X[1], [-0.48, 0.36], atol=1e-14)


def test_dt_hand_value():
    # d t_1 / d y_2 = -2 t_1 t_2 + g_12 / F^2 = -0.0384 at y = (3, 4)
    jet = t_field(0)(E2, P34)
    assert jet.grad[1] == pytest.approx(-0.0384, abs=1e-12)


def test_sasaki_Z_Z():
    Z = np.array([0.0, 0.0, 3.0, 4.0])
    assert sasaki_pair(E2, P34, Z, Z) == pytest.approx(25.0, abs=1e-12)


def test_spray_euclidean_zero():
    sp = spray(E2, P34)
    np.testing.assert_allclose(sp.G, 0.0, atol=1e-14)
    np.testing.assert_allclose(sp.Gconn, 0.0, atol=1e-14)


def test_spray_riemannian_vs_christoffel_fd():
    spec = default_catalog(3)["riemannian"]
    rng = np.random.default_rng(21)
    from finslercalc.metrics import a_matrix
    h = 1e-5
    for _ in range(5):
        p = sample_point(rng, 3)
        n = 3
        da = np.empty((n, n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            da[k] = (a_matrix(spec, p.x + e) - a_matrix(spec, p.x - e)) / (2 * h)
        a_inv = np.linalg.inv(a_matrix(spec, p.x))
        lower = np.empty((n, n, n))
        for l in range(n):
            for i in range(n):
                for j in range(n):
                    lower[l, i, j] = da[i][l, j] + da[j][l, i] - da[l][i, j]
        gamma = 0.5 * np.einsum("il,ljk->ijk", a_inv, lower)
        G_ref = 0.5 * np.einsum("ijk,j,k->i", gamma, p.y, p.y)
        np.testing.assert_allclose(spray(spec, p).G, G_ref, rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize("name", ["riemannian", "randers", "minkowski-quartic"])
def test_fundamental_tensor_vs_fd(name):
    spec = default_catalog(2)[name]
    rng = np.random.default_rng(9)
    for _ in range(5):
        p = sample_point(rng, 2)
        if name == "minkowski-quartic" and np.min(np.abs(p.y)) < 0.1:
            continue
        ft = fundamental_tensor(spec, p)
        fd = fd_oracle(lambda y: 0.5 * eval_F_value(spec, p.x, y) ** 2, p.y, 2,
                       h=1e-4)
        np.testing.assert_allclose(ft.g, fd, rtol=1e-5, atol=1e-6)
        # dg symmetry and inverse
        np.testing.assert_allclose(ft.g @ ft.g_inv, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(ft.dg_dy, ft.dg_dy.transpose(2, 1, 0), atol=1e-12)


def test_frame_basis_certificate():
    p = PointTM([0.0, 0.0, 0.0], [0.3, 2.0, -0.4])
    fb = frame_basis(default_catalog(3)["randers"], p)
    assert fb.k_star == 1                      # argmax |y|
    assert fb.kept == (0, 2)
    assert fb.sigma_min > 1e-8
    assert fb.rows.shape == (3, 3)


def test_frame_identities_random():
    rng = np.random.default_rng(17)
    for name in ("riemannian", "randers"):
        spec = default_catalog(3)[name]
        for _ in range(20):
            p = sample_point(rng, 3)
            fr = liouville_frame(spec, p)
            assert p.y @ fr.t == pytest.approx(1.0, abs=1e-12)
            np.testing.assert_allclose(p.y @ fr.X, 0.0, atol=1e-12)
            np.testing.assert_allclose(fr.X @ fr.g @ p.y, 0.0, atol=1e-10)
            np.testing.assert_allclose(fr.t, fr.t_from_dF, atol=1e-12)
