"""Constructive leafwise cohomology checks on indicatrix leaves.

The Liouville foliation's leaves in a fixed fiber are the c-indicatrices
F(x0, y) = c.  This module navigates a leaf by chord projection (scale a
linear interpolant back onto the level set, exact by 1-homogeneity),
integrates pure-(0,1,0) form fields along leaf paths, and reconstructs a
primitive of a d'-closed 1-form field by path integration from a
basepoint - the computable, degree-1 fragment of the local exactness
statement.  For q >= 2 only exact => closed is ever asserted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import MetricSpec, PointTM, eval_F_value
from .geometry import liouville_frame, frame_basis
from . import vforms
from .vcalc import FormField, d_prime

LEAF_TOL = 1e-9


class PathError(ValueError):
    """Chord interpolant degenerates (near-antipodal endpoints)."""


class QuadratureError(ArithmeticError):
    def __init__(self, last, prev):
        super().__init__(f"path integral did not converge (last estimates {prev}, {last})")
        self.last = last
        self.prev = prev


class NotClosedError(ValueError):
    """Primitive construction requires a d'-closed input."""


@dataclass(frozen=True)
class LeafPoint:
    x: np.ndarray
    y: np.ndarray
    c: float

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))

    def point(self) -> PointTM:
        return PointTM(self.x, self.y)


def project_to_leaf(spec: MetricSpec, x0, y, c: float) -> LeafPoint:
    """(x0, (c/F) y); exact on the leaf by positive 1-homogeneity."""
    x0 = np.asarray(x0, dtype=float)
    y = np.asarray(y, dtype=float)
    F = eval_F_value(spec, x0, y)
    lp = LeafPoint(x0, (c / F) * y, c)
    assert abs(eval_F_value(spec, x0, lp.y) - c) < LEAF_TOL * max(1.0, c)
    return lp


class LeafPath:
    """Chord-projection path t in [0,1] -> y(t) on a c-indicatrix."""

    def __init__(self, spec: MetricSpec, a: LeafPoint, b: LeafPoint, N: int = 32):
        if np.max(np.abs(a.x - b.x)) > 0.0:
            raise ValueError("endpoints must share the base point x0")
        if abs(a.c - b.c) > LEAF_TOL * max(1.0, a.c):
            raise ValueError("endpoints must lie on the same leaf level")
        self.spec = spec
        self.a = a
        self.b = b
        self.N = N
        self.x0 = a.x
        self.c = a.c
        # non-near-antipodal certificate for the whole segment
        lo = _segment_min_norm(a.y, b.y)
        if lo < 0.3 * np.linalg.norm(a.y):
            raise PathError(
                f"chord interpolant shrinks to {lo:g}; endpoints nearly antipodal")

    def raw(self, t: float) -> np.ndarray:
        return (1.0 - t) * self.a.y + t * self.b.y

    def point(self, t: float) -> np.ndarray:
        """Leaf point at parameter t (valid slightly outside [0,1] as well)."""
        z = self.raw(t)
        F = eval_F_value(self.spec, self.x0, z)
        return (self.c / F) * z

    def tangent(self, t: float, h: float = 1e-5) -> np.ndarray:
        """Centered difference of path samples; tangent to the leaf up to O(h^2)."""
        return (self.point(t + h) - self.point(t - h)) / (2.0 * h)

    def samples(self, N: int | None = None) -> list:
        N = self.N if N is None else N
        return [self.point(i / N) for i in range(N + 1)]


def _segment_min_norm(ya: np.ndarray, yb: np.ndarray) -> float:
    # min_t |(1-t) ya + t yb| over [0,1], in closed form
    d = yb - ya
    dd = d @ d
    if dd == 0.0:
        return float(np.linalg.norm(ya))
    t = float(np.clip(-(ya @ d) / dd, 0.0, 1.0))
    return float(np.linalg.norm(ya + t * d))


def leaf_path(spec: MetricSpec, a: LeafPoint, b: LeafPoint, N: int = 32) -> LeafPath:
    return LeafPath(spec, a, b, N)


def path_integral(spec: MetricSpec, omega: FormField, path: LeafPath,
                  tol: float = 1e-10, max_n: int = 2 ** 16,
                  check_purity: bool = True) -> float:
    """Composite-Simpson integral of omega(y'(t)) dt with doubling refinement."""
    if omega.q != 1:
        raise ValueError("path integration requires a 1-form field")
    x0 = path.x0
    if check_purity:
        for t in (0.0, 0.5, 1.0):
            p = PointTM(x0, path.point(t))
            w = omega.at(spec, p)
            frame = liouville_frame(spec, p)
            if vforms.interior_Z(w, frame).norm() > 1e-8 * max(1.0, w.norm()):
                raise ValueError("integrand is not pointwise pure-(0,1,0) on the path")

    def f(t: float) -> float:
        p = PointTM(x0, path.point(t))
        return omega.at(spec, p).evaluate([path.tangent(t)])

    # Romberg: trapezoid refinements share nodes, Richardson extrapolation
    # reaches ~1e-12 on smooth leaf paths within a few doublings
    trap = 0.5 * (f(0.0) + f(1.0))
    rows = [[trap]]
    N = 1
    while True:
        N *= 2
        h = 1.0 / N
        trap = 0.5 * trap + h * sum(f((2 * i + 1) * h) for i in range(N // 2))
        row = [trap]
        for m, below in enumerate(rows[-1], start=1):
            fac = 4.0 ** m
            row.append((fac * row[m - 1] - below) / (fac - 1.0))
        rows.append(row)
        if N >= 8 and abs(row[-1] - rows[-2][-1]) < tol:
            return row[-1]
        if N >= max_n:
            raise QuadratureError(row[-1], rows[-2][-1])


@dataclass(frozen=True)
class PrimitiveResult:
    values: list                  # f at each target (f(basepoint) = 0)
    dprime_residual: float        # max |Df - omega| along sampled leaf directions
    path_dependence: float        # max two-path discrepancy over targets
    closedness: float             # max |d' omega| over certificate samples


def _leaf_samples(spec: MetricSpec, rng: np.random.Generator, x0, c: float,
                  count: int) -> list:
    n = x0.size
    out = []
    while len(out) < count:
        d = rng.normal(size=n)
        nrm = np.linalg.norm(d)
        if nrm < 1e-8:
            continue
        out.append(project_to_leaf(spec, x0, d, c))
    return out


def closedness_certificate(spec: MetricSpec, omega: FormField,
                           samples: list) -> float:
    """Max coefficient of d' omega over the given leaf points."""
    dw = d_prime(omega)
    return max(dw.at(spec, lp.point()).norm() for lp in samples)


def _integrate_between(spec, omega, a: LeafPoint, b: LeafPoint, rng,
                       retries: int = 1) -> float:
    try:
        return path_integral(spec, omega, leaf_path(spec, a, b), check_purity=False)
    except PathError:
        if retries <= 0:
            raise
        mid = 0.5 * (a.y + b.y)
        w = project_to_leaf(spec, a.x, mid + 0.5 * rng.normal(size=a.y.size) *
                            np.linalg.norm(a.y), a.c)
        return (_integrate_between(spec, omega, a, w, rng, retries - 1)
                + _integrate_between(spec, omega, w, b, rng, retries - 1))


def primitive_1form(spec: MetricSpec, omega: FormField, basepoint: LeafPoint,
                    targets: list, rng: np.random.Generator | None = None,
                    closed_tol: float = 1e-7,
                    n_check_dirs: int = 2) -> PrimitiveResult:
    """Reconstruct f with d'f = omega by leaf path integration from basepoint.

    Raises :class:`NotClosedError` when the closedness certificate fails;
    verification records the derivative residual (five-point differencing of
    f along leaf directions) and the two-path discrepancy per target.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    cert_pts = [basepoint] + list(targets) + _leaf_samples(
        spec, rng, basepoint.x, basepoint.c, 4)
    closedness = closedness_certificate(spec, omega, cert_pts)
    if closedness >= closed_tol:
        raise NotClosedError(
            f"d' omega residual {closedness:g} >= {closed_tol:g}; "
            "input violates the closedness hypothesis")

    values = []
    path_dep = 0.0
    deriv_resid = 0.0
    for tgt in targets:
        f1 = _integrate_between(spec, omega, basepoint, tgt, rng)
        # independent second route through a perturbed midpoint
        mid = 0.5 * (basepoint.y + tgt.y)
        delta = rng.normal(size=mid.size)
        delta -= (delta @ mid) / max(mid @ mid, 1e-12) * mid
        w = project_to_leaf(spec, basepoint.x,
                            mid + 0.25 * np.linalg.norm(basepoint.y) * delta,
                            basepoint.c)
        f2 = (_integrate_between(spec, omega, basepoint, w, rng)
              + _integrate_between(spec, omega, w, tgt, rng))
        values.append(f1)
        path_dep = max(path_dep, abs(f1 - f2))
        deriv_resid = max(deriv_resid, _derivative_residual(
            spec, omega, tgt, f1, basepoint, rng, n_check_dirs))
    return PrimitiveResult(values, deriv_resid, path_dep, closedness)


def _derivative_residual(spec, omega, tgt: LeafPoint, f_tgt: float,
                         basepoint: LeafPoint, rng, n_dirs: int,
                         eps: float = 5e-3) -> float:
    """|Df - omega| at a target via five-point differencing along leaf directions."""
    p = tgt.point()
    fb = frame_basis(spec, p)
    dirs = list(fb.kept)[:n_dirs]
    frame = liouville_frame(spec, p)
    w = omega.at(spec, p)
    worst = 0.0
    for a in dirs:
        v = frame.X[a]
        scale = eps / max(np.linalg.norm(v), 1e-12)

        def f_at(s: float) -> float:
            q = project_to_leaf(spec, tgt.x, tgt.y + s * scale * v, tgt.c)
            return f_tgt + _integrate_between(spec, omega, tgt, q, rng)

        df = (-f_at(2.0) + 8.0 * f_at(1.0) - 8.0 * f_at(-1.0) + f_at(-2.0)) / (
            12.0 * scale)
        # actual leaf direction of the projected step
        h = 1e-6 * scale
        vp = (np.asarray(project_to_leaf(spec, tgt.x, tgt.y + h * v, tgt.c).y)
              - np.asarray(project_to_leaf(spec, tgt.x, tgt.y - h * v, tgt.c).y)) / (2 * h)
        worst = max(worst, abs(df - w.evaluate([vp])))
    return worst


def is_basic(spec: MetricSpec, f, samples: list, tol: float = 1e-9):
    """True iff max |d'f| over the sample points is below tol (with the residual)."""
    from .vcalc import scalar_form_field
    n = samples[0].n if isinstance(samples[0], PointTM) else samples[0].y.size
    df = d_prime(scalar_form_field(n, f))
    worst = 0.0
    for s in samples:
        p = s if isinstance(s, PointTM) else s.point()
        worst = max(worst, df.at(spec, p).norm())
    return worst < tol, worst
