"""Chart-change machinery and covariance checks.

A :class:`ChartTransition` is a diffeomorphism x -> x~ of the base with
the induced fiber map y~ = (dx~/dx) y.  The metric in the tilde chart is
*defined* by pullback, F~(x~, y~) := F(x(x~), (dx/dx~) y~), so the
nontrivial content verified here is that the derived objects (t_k, X_k,
omega0, 1-form coefficients, the adapted-basis determinant) obey their
transformation laws.

On a fixed fiber (x frozen) the vertical coframe transforms by the
constant Jacobian dx~/dx; the connection-dependent part of delta-y is
never exercised because every object checked is vertical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import seed_variable, constant
from .metrics import MetricSpec, PointTM, _eval_F
from .geometry import vertical_frame_from_jet, liouville_frame


class TransitionDomainError(ValueError):
    pass


class InverseCertificateError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class ChartTransition:
    """x~ = forward(x) on a box, with certified inverse and analytic Jacobian."""

    name: str
    n: int
    kind: str                  # identity | linear | polynomial
    params: dict
    box: float = 1.0           # forward domain: |x_i| <= box

    # -- base maps -------------------------------------------------------

    def _check_domain(self, x):
        if np.any(np.abs(x) > self.box + 1e-9):
            raise TransitionDomainError(
                f"point {x} outside the transition domain box |x_i| <= {self.box}")

    def forward(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        self._check_domain(x)
        if self.kind == "identity":
            return x.copy()
        if self.kind == "linear":
            return self.params["A"] @ x
        eps, L, Q = self.params["eps"], self.params["L"], self.params["Q"]
        p = L @ x + np.einsum("ijk,j,k->i", Q, x, x)
        return x + eps * p

    def inverse(self, xt, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
        xt = np.asarray(xt, dtype=float)
        if self.kind == "identity":
            return xt.copy()
        if self.kind == "linear":
            return self.params["Ainv"] @ xt
        eps, L, Q = self.params["eps"], self.params["L"], self.params["Q"]
        x = xt.copy()
        for _ in range(max_iter):
            p = L @ x + np.einsum("ijk,j,k->i", Q, x, x)
            x_new = xt - eps * p
            if np.max(np.abs(x_new - x)) < tol:
                x = x_new
                break
            x = x_new
        resid = np.max(np.abs(self.forward(x) - xt))
        if resid > 1e-10:
            raise InverseCertificateError(
                f"fixed-point inverse failed to certify (residual {resid:g})")
        return x

    def jacobian(self, x) -> np.ndarray:
        """dx~/dx at x."""
        x = np.asarray(x, dtype=float)
        if self.kind == "identity":
            return np.eye(self.n)
        if self.kind == "linear":
            return self.params["A"].copy()
        eps, L, Q = self.params["eps"], self.params["L"], self.params["Q"]
        dp = L + np.einsum("ijk,k->ij", Q + Q.transpose(0, 2, 1), x)
        return np.eye(self.n) + eps * dp


def identity_transition(n: int) -> ChartTransition:
    return ChartTransition("identity", n, "identity", {})


def linear_transition(n: int, A=None) -> ChartTransition:
    if A is None:
        A = np.eye(n)
        for i in range(n):
            for j in range(n):
                if i != j:
                    A[i, j] = 0.3 / (1 + abs(i - j))
            A[i, i] = 1.0 + 0.1 * i
    A = np.asarray(A, dtype=float)
    return ChartTransition("linear", n, "linear",
                           {"A": A, "Ainv": np.linalg.inv(A)})


def polynomial_transition(n: int, eps: float = 0.05) -> ChartTransition:
    """x~ = x + eps p(x) with quadratic p; contraction on the sample box."""
    L = np.zeros((n, n))
    Q = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            L[i, j] = ((-1) ** (i + j)) * 0.5 / (1 + abs(i - j))
            for k in range(n):
                Q[i, j, k] = 0.3 / (1 + i + abs(j - k))
    return ChartTransition("polynomial", n, "polynomial",
                           {"eps": float(eps), "L": L, "Q": Q})


def default_transitions(n: int) -> list:
    return [identity_transition(n), linear_transition(n), polynomial_transition(n)]


# -- pushforward / tilde-chart evaluation -------------------------------------------

def push_point(T: ChartTransition, p: PointTM) -> PointTM:
    """(x~, y~) with y~ = (dx~/dx) y."""
    xt = T.forward(p.x)
    A = T.jacobian(p.x)
    return PointTM(xt, A @ p.y)


def tilde_vertical_jet(spec: MetricSpec, T: ChartTransition, pt: PointTM):
    """Vertical jet of the pulled-back F~ at a tilde-chart point.

    Returns (jet, x0, B) with x0 = x(x~) and B = dx/dx~ at the point.
    """
    x0 = T.inverse(pt.x)
    B = np.linalg.inv(T.jacobian(x0))
    n = spec.n
    yt = [seed_variable(i, pt.y[i], n) for i in range(n)]
    y = []
    for i in range(n):
        acc = constant(0.0, n)
        for j in range(n):
            if B[i, j] != 0.0:
                acc = acc + yt[j] * B[i, j]
        y.append(acc)
    Fj = _eval_F(spec, list(x0), y)
    return Fj, x0, B


def _frames(spec, T, p):
    fr = liouville_frame(spec, p)
    pt = push_point(T, p)
    Fjt, _, B = tilde_vertical_jet(spec, T, pt)
    _, gt, tt, Xt = vertical_frame_from_jet(Fjt, pt.y)
    A = T.jacobian(p.x)
    return fr, pt, gt, tt, Xt, A, B


@dataclass(frozen=True)
class ResidualReport:
    name: str
    anchor: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance


def check_t_covariance(spec: MetricSpec, T: ChartTransition, p: PointTM,
                       tol: float = 1e-8) -> ResidualReport:
    """t~_{k1} = (dx^k / dx~^{k1}) t_k."""
    fr, _, _, tt, _, _, B = _frames(spec, T, p)
    resid = float(np.max(np.abs(tt - B.T @ fr.t)))
    return ResidualReport("t-covariance", "t-law (after Eq (1.12))", resid, tol)


def check_X_covariance(spec: MetricSpec, T: ChartTransition, p: PointTM,
                       tol: float = 1e-8) -> ResidualReport:
    """X~_{i1} = (dx^k / dx~^{i1}) X_k, both sides in the tilde fiber basis."""
    fr, _, _, _, Xt, A, B = _frames(spec, T, p)
    # vertical components push forward with A = dx~/dx
    rhs = B.T @ (fr.X @ A.T)  # rows i1: sum_k B[k, i1] * (A X_k)
    resid = float(np.max(np.abs(Xt - rhs)))
    return ResidualReport("X-covariance", "Eq (1.13)", resid, tol)


def check_omega0_invariance(spec: MetricSpec, T: ChartTransition, p: PointTM,
                            tol: float = 1e-8) -> ResidualReport:
    """Pullback of omega0~ equals omega0 coefficientwise in the original chart."""
    fr, _, _, tt, _, A, _ = _frames(spec, T, p)
    pulled = A.T @ tt  # delta-y~^{i1} = A[i1, i] delta-y^i
    resid = float(np.max(np.abs(pulled - fr.t)))
    return ResidualReport("omega0-invariance", "Prop 2.1 proof", resid, tol)


def check_coefficient_law(spec: MetricSpec, T: ChartTransition, p: PointTM,
                          rng: np.random.Generator,
                          tol: float = 1e-8) -> ResidualReport:
    """Eq (2.14): 1-form coefficients transform by a_i = (dx~^{i1}/dx^i) a~_{i1}.

    A random tilde-chart 1-form is pulled back by the coefficient law and
    checked against evaluation duality omega(v) = omega~(A v).
    """
    fr, pt, _, tt, _, A, B = _frames(spec, T, p)
    at = rng.uniform(-1.0, 1.0, spec.n)
    a = A.T @ at
    worst = 0.0
    for _ in range(4):
        v = rng.uniform(-1.0, 1.0, spec.n)
        worst = max(worst, abs(a @ v - at @ (A @ v)))
    # the t-law is the same statement for omega0's coefficients
    worst = max(worst, float(np.max(np.abs(A.T @ tt - fr.t))))
    return ResidualReport("coefficient-law", "Eq (2.14)", worst, tol)


def frame_change_determinant(spec: MetricSpec, T: ChartTransition, p: PointTM,
                             k: int | None = None):
    """Determinant of the adapted-basis change vs the closed formula.

    Source basis {X_1..X_{n-1}, Z} (drops fiber index n); target basis in
    the tilde chart drops index k (default: argmax |y~|).  Returns
    (computed_det, formula_det).
    """
    n = spec.n
    fr, pt, _, tt, Xt, A, B = _frames(spec, T, p)
    ynorm = np.linalg.norm(p.y)
    if abs(p.y[n - 1]) <= 0.05 * ynorm:
        raise ValueError("source chart requires |y^n| > 0.05 |y|")
    if k is None:
        k = int(np.argmax(np.abs(pt.y)))
    if abs(pt.y[k]) <= 0.05 * np.linalg.norm(pt.y):
        raise ValueError("target chart requires |y~^k| > 0.05 |y~|")
    # rows of both bases in the original d/dy components
    S = np.vstack([fr.X[:n - 1], p.y[None, :]])
    tgt_rows = [B @ Xt[j1] for j1 in range(n) if j1 != k]
    Tm = np.vstack(tgt_rows + [p.y[None, :]])
    C = Tm @ np.linalg.inv(S)
    computed = float(np.linalg.det(C))
    # sign (-1)^(n + k) with both indices 1-based (k is 0-based here)
    formula = float(((-1) ** (n + (k + 1)))
                    * (pt.y[k] / p.y[n - 1]) * np.linalg.det(B))
    return computed, formula
