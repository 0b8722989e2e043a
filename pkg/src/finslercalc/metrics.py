"""Catalog of Finsler fundamental functions with jet evaluation.

Four closed catalog kinds are supported:

* ``euclidean``          F = |y|
* ``riemannian``         F = sqrt(a_ij(x) y^i y^j),  a(x) = I + eps s(x) s(x)^T
* ``randers``            F = sqrt(a_ij(x) y^i y^j) + b_i(x) y^i,  |b|_a < 1
* ``minkowski-quartic``  F = (sum_i c_i (y^i)^4)^(1/4),  c_i > 0

All evaluation sites live on the slit tangent bundle: fiber coordinates
must satisfy |y| >= 1e-6.  The riemannian family a(x) = I + eps s s^T with
affine s(x) is positive definite for every x, which keeps validity
checking trivial while still producing nonzero spray coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .jets import Jet3, seed_variable

SLIT_EPS = 1e-6

KINDS = ("euclidean", "riemannian", "randers", "minkowski-quartic")


class MetricDomainError(ArithmeticError):
    """Evaluation outside the smoothness domain of the fundamental function."""


@dataclass(frozen=True, eq=False)
class MetricSpec:
    """Description of a catalog fundamental function."""

    kind: str
    n: int
    params: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if not 2 <= self.n <= 6:
            raise ValueError(f"dimension must be in [2, 6], got {self.n}")


@dataclass(frozen=True, eq=False)
class PointTM:
    """A chart point (x, y) on the slit tangent bundle, y away from zero."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("x and y must be vectors of equal length")
        if np.linalg.norm(self.y) < SLIT_EPS:
            raise ValueError("point violates the slit condition |y| >= 1e-6")

    @property
    def n(self) -> int:
        return self.x.size


# -- catalog construction ---------------------------------------------------

def euclidean(n: int) -> MetricSpec:
    return MetricSpec("euclidean", n, {}, name="euclidean")


def minkowski_quartic(c) -> MetricSpec:
    c = np.asarray(c, dtype=float)
    if np.any(c <= 0):
        raise ValueError("quartic coefficients must be positive")
    return MetricSpec("minkowski-quartic", c.size, {"c": c}, name="minkowski-quartic")


def riemannian(n: int, eps: float = 0.4, s=None) -> MetricSpec:
    """a_ij(x) = delta_ij + eps s_i(x) s_j(x) with affine s; always PD."""
    if s is None:
        s = _default_s(n)
    s = np.asarray(s, dtype=float)  # shape (n, n+1): s_i = s[i,0] + s[i,1:] . x
    return MetricSpec("riemannian", n, {"eps": float(eps), "s": s}, name="riemannian")


def randers(n: int, eps: float = 0.4, s=None, b=None) -> MetricSpec:
    if s is None:
        s = _default_s(n)
    if b is None:
        b = _default_b(n)
    s = np.asarray(s, dtype=float)
    b = np.asarray(b, dtype=float)  # shape (n, n+1): b_i = b[i,0] + b[i,1:] . x
    return MetricSpec(
        "randers", n, {"eps": float(eps), "s": s, "b": b}, name="randers"
    )


def _default_s(n: int) -> np.ndarray:
    s = np.zeros((n, n + 1))
    for i in range(n):
        s[i, 0] = 0.3 + 0.1 * i
        for j in range(n):
            s[i, j + 1] = ((-1) ** (i + j)) * 0.2 / (1 + abs(i - j))
    return s

def _default_b(n: int) -> np.ndarray:
    # |b(x)| stays well below 1 on the sampling box, so |b|_a < 1 everywhere
    b = np.zeros((n, n + 1))
    for i in range(n):
        b[i, 0] = 0.2 / math.sqrt(n)
        for j in range(n):
            b[i, j + 1] = ((-1) ** (i + j)) * 0.05 / n
    return b


def default_catalog(n: int) -> dict[str, MetricSpec]:
    """The four catalog metrics at dimension n, keyed by name."""
    return {
        "euclidean": euclidean(n),
        "riemannian": riemannian(n),
        "randers": randers(n),
        "minkowski-quartic": minkowski_quartic(np.linspace(1.0, 2.0, n)),
    }


# -- evaluation --------------------------------------------------------------

def _sqrt(u):
    return u.sqrt() if isinstance(u, Jet3) else math.sqrt(u)


def _eval_F(spec: MetricSpec, x, y):
    """F at (x, y) where entries may be floats or jets (mixed allowed)."""
    n = spec.n
    kind = spec.kind
    if kind == "euclidean":
        q = sum(y[i] * y[i] for i in range(n))
        return _sqrt(q)
    if kind == "minkowski-quartic":
        c = spec.params["c"]
        q = sum(c[i] * y[i] ** 4 for i in range(n))
        return q ** 0.25
    # riemannian / randers share the quadratic part
    eps = spec.params["eps"]
    s = spec.params["s"]
    sy = 0.0
    for i in range(n):
        si = s[i, 0] + sum(s[i, 1 + j] * x[j] for j in range(n))
        sy = sy + si * y[i]
    q = sum(y[i] * y[i] for i in range(n)) + eps * sy * sy
    alpha = _sqrt(q)
    if kind == "riemannian":
        return alpha
    b = spec.params["b"]
    beta = 0.0
    for i in range(n):
        bi = b[i, 0] + sum(b[i, 1 + j] * x[j] for j in range(n))
        beta = beta + bi * y[i]
    return alpha + beta


def eval_F(spec: MetricSpec, p: PointTM) -> Jet3:
    """Jet of F in all 2n chart variables (x first, then y) at p."""
    n = spec.n
    x = [seed_variable(i, p.x[i], 2 * n) for i in range(n)]
    y = [seed_variable(n + i, p.y[i], 2 * n) for i in range(n)]
    F = _eval_F(spec, x, y)
    if F.val <= 0.0:
        raise MetricDomainError(f"F non-positive ({F.val}) at y={p.y}")
    return F


# Vertical jets are evaluated at every sample of every identity suite, and
# fields (t_k, ln F, ...) re-request the same point many times; memoize on
# the exact evaluation site.
_VERT_CACHE: dict = {}
_VERT_CACHE_MAX = 8192


def eval_F_vertical(spec: MetricSpec, p: PointTM) -> Jet3:
    """Jet of F in the n fiber variables only (x frozen) at p."""
    key = (id(spec), p.x.tobytes(), p.y.tobytes())
    hit = _VERT_CACHE.get(key)
    if hit is not None:
        return hit
    n = spec.n
    y = [seed_variable(i, p.y[i], n) for i in range(n)]
    F = _eval_F(spec, list(p.x), y)
    if F.val <= 0.0:
        raise MetricDomainError(f"F non-positive ({F.val}) at y={p.y}")
    if len(_VERT_CACHE) >= _VERT_CACHE_MAX:
        _VERT_CACHE.clear()
    _VERT_CACHE[key] = F
    return F


def eval_F_value(spec: MetricSpec, x, y) -> float:
    """Plain float evaluation of F (fast path for quadrature)."""
    v = _eval_F(spec, np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if v <= 0.0:
        raise MetricDomainError(f"F non-positive ({v}) at y={y}")
    return float(v)


def a_matrix(spec: MetricSpec, x) -> np.ndarray:
    """The Riemannian matrix a_ij(x) for riemannian/randers kinds (floats)."""
    if spec.kind not in ("riemannian", "randers"):
        raise ValueError(f"a_matrix undefined for kind {spec.kind!r}")
    n = spec.n
    s = spec.params["s"]
    x = np.asarray(x, dtype=float)
    sv = s[:, 0] + s[:, 1:] @ x
    return np.eye(n) + spec.params["eps"] * np.outer(sv, sv)


# -- validity ----------------------------------------------------------------

@dataclass(frozen=True)
class ValidityReport:
    homogeneity_residuals: dict
    min_eigenvalue: float
    passed: bool


def fundamental_matrix(spec: MetricSpec, p: PointTM) -> np.ndarray:
    """g_ij(x, y) = (1/2) d^2 F^2 / dy_i dy_j from the vertical jet."""
    Fj = eval_F_vertical(spec, p)
    F2 = Fj * Fj
    return 0.5 * F2.hess


def validate_at(spec: MetricSpec, p: PointTM,
                lambdas=(0.5, 2.0), tol: float = 1e-9) -> ValidityReport:
    """Homogeneity residuals and positive definiteness of g at p."""
    F = eval_F_value(spec, p.x, p.y)
    resid = {}
    for lam in lambdas:
        resid[lam] = abs(eval_F_value(spec, p.x, lam * p.y) - lam * F) / max(1.0, F)
    g = fundamental_matrix(spec, p)
    min_eig = float(np.linalg.eigvalsh(g)[0])
    passed = min_eig > 0.0 and all(r < tol for r in resid.values())
    return ValidityReport(resid, min_eig, passed)


# -- sampling ----------------------------------------------------------------

def sample_point(rng: np.random.Generator, n: int,
                 r_min: float = 0.5, r_max: float = 2.0) -> PointTM:
    """Random chart point: x in [-1, 1]^n, y in the annulus r_min <= |y| <= r_max."""
    x = rng.uniform(-1.0, 1.0, n)
    d = rng.normal(size=n)
    d /= np.linalg.norm(d)
    r = rng.uniform(r_min, r_max)
    return PointTM(x, r * d)
