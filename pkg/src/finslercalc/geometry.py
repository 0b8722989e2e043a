"""Pointwise Finsler geometry on the slit tangent bundle.

Computes the fundamental tensor g_ij, its inverse and vertical
derivative, the spray coefficients G^i with the nonlinear connection
G^i_j, the adapted horizontal frame, the Sasaki block pairing, the
vertical Liouville field Z, the functions t_k and the frame fields X_k
adapted to the Liouville foliation.

All vertical derivatives of derived quantities come from composing jets,
never from re-differencing computed values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import Jet3
from .metrics import MetricSpec, PointTM, eval_F, eval_F_vertical

MIN_EIG = 1e-10


class DegenerateMetricError(ArithmeticError):
    def __init__(self, min_eig: float):
        super().__init__(f"fundamental tensor is degenerate (min eigenvalue {min_eig:g})")
        self.min_eig = min_eig


class SingularBasisError(ArithmeticError):
    def __init__(self, sigma_min: float):
        super().__init__(f"adapted basis nearly singular (sigma_min {sigma_min:g})")
        self.sigma_min = sigma_min


@dataclass(frozen=True)
class FundamentalTensor:
    g: np.ndarray        # (n, n) symmetric positive definite
    g_inv: np.ndarray    # (n, n)
    dg_dy: np.ndarray    # (n, n, n), totally symmetric


@dataclass(frozen=True)
class SprayData:
    G: np.ndarray        # (n,) spray coefficients
    Gconn: np.ndarray    # (n, n), Gconn[i, j] = dG^i/dy^j


@dataclass(frozen=True)
class LiouvilleFrame:
    t: np.ndarray          # (n,) t_k = y^i g_ki / F^2
    t_from_dF: np.ndarray  # (n,) t_k = (1/F) dF/dy^k, must agree with t
    X: np.ndarray          # (n, n), row k = components of X_k in d/dy basis
    Zcomp: np.ndarray      # (n,) components of Z, equal to y
    g: np.ndarray          # fundamental matrix at the point (convenience)
    F: float


@dataclass(frozen=True)
class FrameBasis:
    k_star: int            # dropped fiber index, argmax |y^i|
    rows: np.ndarray       # (n, n): the X_i rows for i != k_star, then y
    kept: tuple            # indices of the kept X fields
    sigma_min: float       # independence certificate


def _f2_jet(spec: MetricSpec, p: PointTM) -> Jet3:
    Fj = eval_F(spec, p)
    return Fj * Fj


def fundamental_tensor(spec: MetricSpec, p: PointTM) -> FundamentalTensor:
    n = spec.n
    F2 = _f2_jet(spec, p)
    ys = slice(n, 2 * n)
    g = 0.5 * F2.hess[ys, ys]
    dg = 0.5 * F2.third[ys, ys, ys]
    min_eig = float(np.linalg.eigvalsh(g)[0])
    if min_eig < MIN_EIG:
        raise DegenerateMetricError(min_eig)
    return FundamentalTensor(g, np.linalg.inv(g), dg)


def spray(spec: MetricSpec, p: PointTM) -> SprayData:
    """G^i = (1/4) g^{ik} (d^2F^2/dy^k dx^h y^h - dF^2/dx^k) and its y-derivative."""
    n = spec.n
    ft = fundamental_tensor(spec, p)
    F2 = _f2_jet(spec, p)
    xs, ys = slice(0, n), slice(n, 2 * n)
    y = p.y
    A = F2.hess[ys, xs] @ y - F2.grad[xs]
    # dA_k/dy_j = T[y_k, x_h, y_j] y_h + H[y_k, x_j] - H[x_k, y_j]
    dA = (np.einsum("khj,h->kj", F2.third[ys, xs, ys], y)
          + F2.hess[ys, xs] - F2.hess[xs, ys])
    dginv = -np.einsum("ia,abj,bk->ikj", ft.g_inv, ft.dg_dy, ft.g_inv)
    G = 0.25 * ft.g_inv @ A
    Gconn = 0.25 * (np.einsum("ikj,k->ij", dginv, A) + ft.g_inv @ dA)
    return SprayData(G, Gconn)


def adapted_frame(spec: MetricSpec, p: PointTM) -> np.ndarray:
    """Rows i = components of delta/delta x^i in the (d/dx, d/dy) basis, shape (n, 2n)."""
    n = spec.n
    sp = spray(spec, p)
    out = np.zeros((n, 2 * n))
    for i in range(n):
        out[i, i] = 1.0
        out[i, n:] = -sp.Gconn[:, i]
    return out


def sasaki_pair(spec: MetricSpec, p: PointTM, V: np.ndarray, W: np.ndarray) -> float:
    """Sasaki block pairing of tangent vectors in the adapted (delta/dx, d/dy) basis."""
    n = spec.n
    V = np.asarray(V, dtype=float)
    W = np.asarray(W, dtype=float)
    if V.shape != (2 * n,) or W.shape != (2 * n,):
        raise ValueError(f"expected tangent vectors of length {2 * n}")
    g = fundamental_tensor(spec, p).g
    return float(V[:n] @ g @ W[:n] + V[n:] @ g @ W[n:])


def vertical_frame_from_jet(Fj: Jet3, y: np.ndarray):
    """(F, g, t, X rows) from a vertical jet of F; shared with chart transitions."""
    F2 = Fj * Fj
    g = 0.5 * F2.hess
    F2v = F2.val
    t = g @ y / F2v
    X = np.eye(y.size) - np.outer(t, y)
    return Fj.val, g, t, X


def liouville_frame(spec: MetricSpec, p: PointTM) -> LiouvilleFrame:
    Fj = eval_F_vertical(spec, p)
    F, g, t, X = vertical_frame_from_jet(Fj, p.y)
    t_alt = Fj.grad / F
    return LiouvilleFrame(t, t_alt, X, p.y.copy(), g, F)


def frame_basis(spec: MetricSpec, p: PointTM, sigma_tol: float = 1e-8) -> FrameBasis:
    """Adapted basis {X_i : i != k*} + {Z} with a linear-independence certificate.

    The dropped index k* = argmax |y^i| (smallest index on ties) keeps the
    1/y^k factors of the frame change bounded.
    """
    fr = liouville_frame(spec, p)
    y = p.y
    k_star = int(np.argmax(np.abs(y)))
    kept = tuple(i for i in range(spec.n) if i != k_star)
    rows = np.vstack([fr.X[list(kept)], y[None, :]])
    sigma_min = float(np.linalg.svd(rows, compute_uv=False)[-1])
    if sigma_min <= sigma_tol:
        raise SingularBasisError(sigma_min)
    return FrameBasis(k_star, rows, kept, sigma_min)
