"""Randomized identity suites with independent oracles.

Every anchored identity from the geometry/forms/operators/transitions/
leaf modules appears in exactly one suite row (the registry below is the
single source of truth; a report row exists for every entry or the run
aborts).  Sampling is driven by numpy's PCG64 generator seeded per suite
from the run seed, so fixed seed means identical reports.
"""

from __future__ import annotations

import time
from itertools import combinations

import numpy as np

from . import geometry, leafprim, metrics, transitions, vcalc, vforms
from .config import RunConfig, SUITE_NAMES
from .jets import fd_oracle
from .metrics import PointTM, default_catalog, sample_point
from .report import IdentityResult, SuiteReport

FD_EVERY = 10  # finite-difference oracle rows run on every FD_EVERY-th sample


def _rel(a, b) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) / scale


def _absmax(a) -> float:
    return float(np.max(np.abs(np.atleast_1d(np.asarray(a, dtype=float)))))


# -- registry -----------------------------------------------------------------
# (identity, anchor, default tolerance)

REGISTRY = {
    "euler": (
        ("F2-equals-ygy", "Eq (1.8)", 1e-9),
        ("dF-dy-equals-gy-over-F", "Eq (1.8)", 1e-9),
        ("y-contracts-dg-to-zero", "Eq (1.8)", 1e-9),
        ("sasaki-Z-Z-equals-F2", "Eq (1.9)", 1e-9),
        ("F-positive-homogeneity", "Eq (1.1) context", 1e-10),
        ("g-positive-definite", "Eq (1.1)", 1e-10),
        ("euclidean-g-is-identity", "Eq (1.1)", 1e-12),
        ("spray-2-homogeneity", "below Eq (1.1)", 1e-9),
        ("connection-1-homogeneity", "below Eq (1.1)", 1e-9),
        ("fd-oracle-grad-F", "fd oracle", 1e-5),
        ("fd-oracle-hessian-g", "fd oracle", 1e-5),
        ("fd-oracle-christoffel-spray", "below Eq (1.1) + fd oracle", 1e-5),
    ),
    "frame": (
        ("sasaki-Xk-Z-zero", "Eq (1.11)", 1e-9),
        ("t-two-formulas-agree", "Eq (1.12)", 1e-10),
        ("y-dot-t-equals-1", "Eq (1.14)", 1e-9),
        ("y-weighted-X-sum-zero", "Eq (1.14)", 1e-9),
        ("dt-dy-formula", "Eq (1.15)", 1e-9),
        ("Z-t-equals-minus-t", "Eq (1.15)", 1e-9),
        ("y-contract-dt-equals-minus-t", "Eq (1.16)", 1e-9),
        ("y-dot-Zt-equals-minus-1", "Eq (1.16)", 1e-9),
        ("y-weighted-ZX-sum-zero", "Eq (1.16)", 1e-9),
        ("Xn-linear-dependence", "Eq (1.19)", 1e-9),
        ("adapted-basis-certificate", "Prop 1.4", 1e-8),
        ("g-inverse-consistency", "Eq (1.1) inverse", 1e-10),
        ("dg-total-symmetry", "after Eq (1.1)", 1e-10),
        ("fd-oracle-t-gradient", "fd oracle", 1e-5),
    ),
    "brackets": (
        ("bracket-Xi-Xj", "Eq (1.17)", 1e-8),
        ("bracket-Xi-Z", "Eq (1.18)", 1e-8),
        ("bracket-Z-Z-zero", "Prop 1.3 context", 1e-12),
        ("fd-oracle-X-component-grads", "fd oracle", 1e-5),
    ),
    "forms": (
        ("omega0-on-Z", "Eq (2.1)", 1e-10),
        ("omega0-on-Xa", "Eq (2.1)", 1e-10),
        ("omega0-equals-d01-lnF", "Eq (2.1)", 1e-10),
        ("iZ-zero-characterization", "Prop 2.2(a)", 1e-10),
        ("iZ-iZ-zero", "Prop 2.2(b)", 1e-10),
        ("iZ-nonzero-on-mixed-type", "Prop 2.2(c)", 1e-10),
        ("omega0-wedge-lands-in-(0,q-1,1)", "Prop 2.2(d)", 1e-10),
        ("split-reconstruction", "Prop 2.3", 1e-10),
        ("projector-laws", "Prop 2.3 / Eqs (2.7)-(2.8)", 1e-10),
        ("omega0-wedge-representation", "Prop 2.4 / Eq (2.5)", 1e-10),
        ("wedge-type-q0-q0", "Prop 2.5(a)", 1e-10),
        ("wedge-type-q1-q0", "Prop 2.5(b)", 1e-10),
        ("wedge-type-q1-q1-zero", "Prop 2.5(c)", 1e-10),
        ("omega0-classification", "Example 2.1(a)", 1e-10),
        ("theta-annihilates-Z", "Example 2.1(b)", 1e-10),
        ("theta-linear-dependence", "Example 2.1(b)", 1e-10),
        ("theta-wedge-type", "Example 2.1(c)", 1e-10),
        ("leaf-tuple-equivalence", "Eq (2.2)", 1e-10),
        ("wedge-graded-commutativity", "Prop 2.2(d) convention", 1e-10),
        ("evaluation-antisymmetry", "Def 2.1 context", 1e-10),
    ),
    "operators": (
        ("d01-squared-zero", "Prop 2.7(b) proof", 1e-8),
        ("d01-stability-on-(0,q-1,1)", "Eq (2.6)", 1e-8),
        ("xi1-d01-projection-commutation", "Eq (2.9)", 1e-8),
        ("d-prime-plus-d-second", "Eq (2.12)", 1e-8),
        ("d-prime-frame-formula", "Eq (2.13)", 1e-8),
        ("d-prime-of-coordinates", "Example 2.2(b)", 1e-10),
        ("d-second-scalar-formula", "Example 2.2(b)", 1e-8),
        ("d-prime-leibniz", "Prop 2.7(a)", 1e-8),
        ("d-prime-squared-zero", "Prop 2.7(b)", 1e-8),
        ("d01-d-second-anticommutation", "Remark 2.2", 1e-8),
        ("coordinate-wedges-d-prime-closed", "Example 2.2(c)", 1e-8),
        ("basic-1form-representation", "end of Sec. 2", 1e-8),
        ("purity-domain-enforced", "Eq (2.10) domain", 1e-12),
        ("fd-oracle-scalar-field-grads", "fd oracle", 1e-5),
    ),
    "transitions": (
        ("transition-round-trip", "chart transition invariants", 1e-9),
        ("t-covariance", "t-law (after Eq (1.12))", 1e-8),
        ("X-covariance", "Eq (1.13)", 1e-8),
        ("omega0-invariance", "Prop 2.1 proof", 1e-8),
        ("coefficient-law", "Eq (2.14)", 1e-8),
        ("frame-change-determinant", "end of Sec. 1", 1e-7),
    ),
    "poincare": (
        ("leaf-containment", "Prop 1.1(b)", 1e-9),
        ("basic-function-of-F", "Def 3.1", 1e-9),
        ("constant-is-basic", "Def 3.1", 1e-12),
        ("coordinate-not-basic", "Example 2.2(b)", 1e-12),
        ("semiexactness-q1", "sequence (3.1)", 1e-8),
        ("exact-implies-closed-q2", "B in Z, Sec. 3", 1e-8),
        ("gradient-theorem-on-leaf", "Theorem 3.1 context", 1e-8),
        ("primitive-reconstruction", "Theorem 3.1", 1e-6),
        ("two-path-independence", "Theorem 3.1", 1e-7),
        ("closed-loop-integral-zero", "Theorem 3.1 context", 1e-7),
        ("non-closed-rejected", "Theorem 3.1 hypothesis", 1e-12),
    ),
}


class _Acc:
    """Accumulates the max residual and sample count per identity."""

    def __init__(self, suite: str, cfg: RunConfig):
        self.suite = suite
        self.cfg = cfg
        self.worst: dict = {}
        self.count: dict = {}

    def add(self, identity: str, residual: float):
        self.worst[identity] = max(self.worst.get(identity, 0.0), float(residual))
        self.count[identity] = self.count.get(identity, 0) + 1

    def rows(self, elapsed: float):
        entries = REGISTRY[self.suite]
        missing = [name for name, _, _ in entries if name not in self.worst]
        if missing:
            raise RuntimeError(f"suite {self.suite} produced no samples for {missing}")
        share = elapsed / len(entries)
        out = []
        for name, anchor, tol in entries:
            tol = self.cfg.tolerance_overrides.get(name, tol)
            r = self.worst[name]
            out.append(IdentityResult(self.suite, name, anchor, r, tol,
                                      r < tol, self.count[name], share))
        return out


def _specs(cfg: RunConfig):
    out = []
    for n in cfg.dims:
        cat = default_catalog(n)
        out.extend(cat[name] for name in cfg.metrics)
    return out


def _draw(cfg, rng, specs):
    spec = specs[rng.integers(len(specs))]
    while True:
        p = sample_point(rng, spec.n)
        # the quartic catalog metric has g_jj ~ y_j^2: keep samples away from
        # the coordinate hyperplanes so g stays well conditioned
        if spec.kind == "minkowski-quartic" and (
                np.min(np.abs(p.y)) < 0.1 * np.linalg.norm(p.y) / np.sqrt(spec.n)):
            continue
        return spec, p


def _rng_for(cfg: RunConfig, suite: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, SUITE_NAMES.index(suite)])


# -- euler ----------------------------------------------------------------------

def _suite_euler(cfg: RunConfig, rng) -> list:
    acc = _Acc("euler", cfg)
    specs = _specs(cfg)
    riem = [s for s in specs if s.kind == "riemannian"]
    t0 = time.perf_counter()
    for k in range(cfg.samples):
        spec, p = _draw(cfg, rng, specs)
        n = spec.n
        ft = geometry.fundamental_tensor(spec, p)
        Fj = metrics.eval_F_vertical(spec, p)
        F = Fj.val
        F2 = F * F

        acc.add("F2-equals-ygy", _rel(F2, p.y @ ft.g @ p.y))
        acc.add("dF-dy-equals-gy-over-F", _rel(Fj.grad, ft.g @ p.y / F))
        acc.add("y-contracts-dg-to-zero",
                _absmax(np.einsum("i,ijk->jk", p.y, ft.dg_dy))
                / max(1.0, _absmax(ft.g)))
        Zv = np.concatenate([np.zeros(n), p.y])
        acc.add("sasaki-Z-Z-equals-F2",
                _rel(geometry.sasaki_pair(spec, p, Zv, Zv), F2))
        rep = metrics.validate_at(spec, p)
        acc.add("F-positive-homogeneity", max(rep.homogeneity_residuals.values()))
        acc.add("g-positive-definite", max(0.0, geometry.MIN_EIG - rep.min_eigenvalue))
        if spec.kind == "euclidean":
            acc.add("euclidean-g-is-identity", _absmax(ft.g - np.eye(n)))
        else:
            acc.add("euclidean-g-is-identity", 0.0)

        sp = geometry.spray(spec, p)
        p2 = PointTM(p.x, 2.0 * p.y)
        sp2 = geometry.spray(spec, p2)
        acc.add("spray-2-homogeneity", _rel(sp2.G, 4.0 * sp.G))
        acc.add("connection-1-homogeneity", _rel(sp2.Gconn, 2.0 * sp.Gconn))

        if k % FD_EVERY == 0:
            fd_g = fd_oracle(lambda y: metrics.eval_F_value(spec, p.x, y), p.y, 1)
            acc.add("fd-oracle-grad-F", _rel(Fj.grad, fd_g))
            fd_h = fd_oracle(
                lambda y: 0.5 * metrics.eval_F_value(spec, p.x, y) ** 2, p.y, 2,
                h=1e-4)  # second differences need a larger step for roundoff
            acc.add("fd-oracle-hessian-g", _rel(ft.g, fd_h))
        if k % FD_EVERY == 0 and riem:
            rspec = riem[rng.integers(len(riem))]
            rp = sample_point(rng, rspec.n)
            acc.add("fd-oracle-christoffel-spray", _christoffel_residual(rspec, rp))
    return acc.rows(time.perf_counter() - t0)


def _christoffel_residual(spec, p, h: float = 1e-5) -> float:
    """Riemannian spray vs (1/2) gamma^i_jk y^j y^k with fd Christoffel symbols."""
    n = spec.n
    da = np.empty((n, n, n))  # da[k] = d a_ij / d x_k
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        da[k] = (metrics.a_matrix(spec, p.x + e) - metrics.a_matrix(spec, p.x - e)) / (2 * h)
    a_inv = np.linalg.inv(metrics.a_matrix(spec, p.x))
    # gamma^i_jk = (1/2) a^{il} (d_j a_lk + d_k a_lj - d_l a_jk)
    gamma = 0.5 * np.einsum("il,ljk->ijk", a_inv, _christoffel_lower(da))
    G_ref = 0.5 * np.einsum("ijk,j,k->i", gamma, p.y, p.y)
    return _rel(geometry.spray(spec, p).G, G_ref)


def _christoffel_lower(da: np.ndarray) -> np.ndarray:
    """lower[l, j, k] = d_j a_lk + d_k a_lj - d_l a_jk (da[k] = d a / d x_k)."""
    n = da.shape[0]
    lower = np.empty((n, n, n))
    for l in range(n):
        for j in range(n):
            for k in range(n):
                lower[l, j, k] = da[j][l, k] + da[k][l, j] - da[l][j, k]
    return lower


# -- frame ------------------------------------------------------------------------

def _suite_frame(cfg: RunConfig, rng) -> list:
    acc = _Acc("frame", cfg)
    specs = _specs(cfg)
    t0 = time.perf_counter()
    for k in range(cfg.samples):
        spec, p = _draw(cfg, rng, specs)
        n = spec.n
        fr = geometry.liouville_frame(spec, p)
        ft = geometry.fundamental_tensor(spec, p)
        F2 = fr.F ** 2

        gy = ft.g @ p.y
        acc.add("sasaki-Xk-Z-zero", _absmax(fr.X @ gy) / max(1.0, F2))
        acc.add("t-two-formulas-agree", _absmax(fr.t - fr.t_from_dF))
        acc.add("y-dot-t-equals-1", abs(p.y @ fr.t - 1.0))
        acc.add("y-weighted-X-sum-zero", _absmax(p.y @ fr.X))

        tj = [vcalc.t_field(l)(spec, p) for l in range(n)]
        dt = np.array([j.grad for j in tj])  # dt[l, k] = d t_l / d y_k
        ref = -2.0 * np.outer(fr.t, fr.t) + fr.g / F2
        acc.add("dt-dy-formula", _rel(dt, ref))
        Zt = dt @ p.y
        acc.add("Z-t-equals-minus-t", _rel(Zt, -fr.t))
        acc.add("y-contract-dt-equals-minus-t", _rel(p.y @ dt, -fr.t))
        acc.add("y-dot-Zt-equals-minus-1", abs(p.y @ Zt + 1.0))

        ZX = np.zeros(n)
        for i in range(n):
            for j, f in enumerate(vcalc.liouville_X_fields(n, i)):
                ZX[j] += p.y[i] * (f(spec, p).grad @ p.y)
        acc.add("y-weighted-ZX-sum-zero", _absmax(ZX))

        if abs(p.y[n - 1]) >= 0.3 * np.linalg.norm(p.y):
            rhs = -(p.y[:n - 1] @ fr.X[:n - 1]) / p.y[n - 1]
            acc.add("Xn-linear-dependence", _rel(fr.X[n - 1], rhs))
        else:
            acc.add("Xn-linear-dependence", 0.0)

        fb = geometry.frame_basis(spec, p)
        acc.add("adapted-basis-certificate", max(0.0, 1e-8 - fb.sigma_min))
        acc.add("g-inverse-consistency", _absmax(ft.g @ ft.g_inv - np.eye(n)))
        sym = max(_absmax(ft.dg_dy - ft.dg_dy.transpose(1, 0, 2)),
                  _absmax(ft.dg_dy - ft.dg_dy.transpose(2, 1, 0)))
        acc.add("dg-total-symmetry", sym / max(1.0, _absmax(ft.g)))

        if k % FD_EVERY == 0:
            l = int(rng.integers(n))

            def t_val(y, l=l):
                q = PointTM(p.x, y)
                return geometry.liouville_frame(spec, q).t[l]

            acc.add("fd-oracle-t-gradient", _rel(tj[l].grad, fd_oracle(t_val, p.y, 1)))
    return acc.rows(time.perf_counter() - t0)


# -- brackets -----------------------------------------------------------------------

def _suite_brackets(cfg: RunConfig, rng) -> list:
    acc = _Acc("brackets", cfg)
    specs = _specs(cfg)
    t0 = time.perf_counter()
    for k in range(cfg.samples):
        spec, p = _draw(cfg, rng, specs)
        n = spec.n
        fr = geometry.liouville_frame(spec, p)
        Xf = [vcalc.liouville_X_fields(n, i) for i in range(n)]
        Zf = vcalc.liouville_Z_fields(n)

        worst_xx = 0.0
        for i, j in combinations(range(n), 2):
            br = vcalc.lie_bracket(Xf[i], Xf[j], spec, p)
            ref = fr.t[i] * fr.X[j] - fr.t[j] * fr.X[i]
            worst_xx = max(worst_xx, _rel(br, ref))
        acc.add("bracket-Xi-Xj", worst_xx)

        i = int(rng.integers(n))
        acc.add("bracket-Xi-Z", _rel(vcalc.lie_bracket(Xf[i], Zf, spec, p), fr.X[i]))
        acc.add("bracket-Z-Z-zero", _absmax(vcalc.lie_bracket(Zf, Zf, spec, p)))

        if k % FD_EVERY == 0:
            i = int(rng.integers(n))
            j = int(rng.integers(n))
            jet = Xf[i][j](spec, p)

            def comp(y, i=i, j=j):
                q = PointTM(p.x, y)
                fr_q = geometry.liouville_frame(spec, q)
                return fr_q.X[i, j]

            acc.add("fd-oracle-X-component-grads",
                    _rel(jet.grad, fd_oracle(comp, p.y, 1)))
    return acc.rows(time.perf_counter() - t0)


# -- forms --------------------------------------------------------------------------

def _suite_forms(cfg: RunConfig, rng) -> list:
    acc = _Acc("forms", cfg)
    specs = _specs(cfg)
    t0 = time.perf_counter()
    for _ in range(cfg.samples):
        spec, p = _draw(cfg, rng, specs)
        n = spec.n
        fr = geometry.liouville_frame(spec, p)
        fb = geometry.frame_basis(spec, p)
        w0 = vforms.omega0(fr)
        Z = fr.Zcomp

        acc.add("omega0-on-Z", abs(w0.evaluate([Z]) - 1.0))
        acc.add("omega0-on-Xa", max(abs(w0.evaluate([fr.X[a]])) for a in fb.kept))
        d01lnF = vcalc.d01(vcalc.scalar_form_field(n, vcalc.lnF_field())).at(spec, p)
        acc.add("omega0-equals-d01-lnF", _absmax(np.array(
            [d01lnF.get((i,)) - w0.get((i,)) for i in range(n)])))

        q = int(rng.integers(1, min(n, 3) + 1))
        w = vforms.random_form(rng, n, q)
        s = vforms.split(w, fr)
        nw = max(1.0, w.norm())

        # Prop 2.2(a): i_Z w1 = 0 and w1 vanishes whenever an argument is Z
        w1 = s.part_sq0
        args = [rng.uniform(-1, 1, n) for _ in range(q - 1)]
        slot = int(rng.integers(q))
        with_Z = args[:slot] + [Z] + args[slot:]
        acc.add("iZ-zero-characterization",
                max(vforms.interior_Z(w1, fr).norm(), abs(w1.evaluate(with_Z))) / nw)
        if q >= 2:
            acc.add("iZ-iZ-zero",
                    vforms.interior_Z(vforms.interior_Z(w, fr), fr).norm() / nw)
        else:
            acc.add("iZ-iZ-zero", 0.0)
        w2 = s.part_sq1
        if w2.norm() > 1e-8 * nw:
            acc.add("iZ-nonzero-on-mixed-type",
                    0.0 if vforms.interior_Z(w2, fr).norm() > 1e-10 * w2.norm() else 1.0)
        else:
            acc.add("iZ-nonzero-on-mixed-type", 0.0)

        alpha = vforms.xi1(vforms.random_form(rng, n, q - 1), fr) if q >= 2 else \
            vforms.VerticalForm(n, 0, {(): rng.uniform(-1, 1)})
        prod = w0.wedge(alpha)
        acc.add("omega0-wedge-lands-in-(0,q-1,1)",
                vforms.xi1(prod, fr).norm() / max(1.0, prod.norm(), 1.0))

        acc.add("split-reconstruction",
                max((s.part_sq0 + s.part_sq1 - w).norm(),
                    vforms.interior_Z(s.part_sq0, fr).norm(),
                    (s.part_sq1 - w0.wedge(vforms.interior_Z(w, fr))).norm()) / nw)
        acc.add("projector-laws",
                max((vforms.xi1(s.part_sq0, fr) - s.part_sq0).norm(),
                    (vforms.xi2(s.part_sq1, fr) - s.part_sq1).norm(),
                    vforms.xi1(s.part_sq1, fr).norm(),
                    vforms.xi2(s.part_sq0, fr).norm()) / nw)
        acc.add("omega0-wedge-representation",
                (w2 - w0.wedge(vforms.interior_Z(w2, fr))).norm() / nw)

        r = int(rng.integers(1, min(n, 3) + 1))
        th = vforms.xi1(vforms.random_form(rng, n, r), fr)
        prod_a = w1.wedge(th)
        acc.add("wedge-type-q0-q0",
                vforms.interior_Z(prod_a, fr).norm() / max(1.0, prod_a.norm())
                if prod_a.q <= n and prod_a.q >= 1 else 0.0)
        prod_b = w2.wedge(th)
        acc.add("wedge-type-q1-q0",
                vforms.xi1(prod_b, fr).norm() / max(1.0, prod_b.norm())
                if 1 <= prod_b.q <= n else 0.0)
        w2b = vforms.xi2(vforms.random_form(rng, n, r), fr)
        acc.add("wedge-type-q1-q1-zero", w2.wedge(w2b).norm() / nw)

        acc.add("omega0-classification",
                0.0 if vforms.classify(w0, fr) == vforms.PURE_Q11 else 1.0)
        thetas = [vforms.theta(fr, i) for i in range(n)]
        acc.add("theta-annihilates-Z",
                max(abs(t.evaluate([Z])) for t in thetas))
        tsum = thetas[0] * fr.t[0]
        for i in range(1, n):
            tsum = tsum + thetas[i] * fr.t[i]
        acc.add("theta-linear-dependence", tsum.norm())
        i, j = 0, 1
        acc.add("theta-wedge-type",
                vforms.interior_Z(thetas[i].wedge(thetas[j]), fr).norm())

        ev = vforms.vanishes_on_leaf_tuples(w2, fr, fb.kept)
        resid = ev / nw
        if w1.norm() > 1e-6 * nw and q <= len(fb.kept):
            ev1 = vforms.vanishes_on_leaf_tuples(w1, fr, fb.kept)
            resid = max(resid, 0.0 if ev1 > 1e-9 * w1.norm() else 1.0)
        acc.add("leaf-tuple-equivalence", resid)

        other = vforms.random_form(rng, n, r)
        lhs = w.wedge(other)
        rhs = other.wedge(w) * ((-1.0) ** (q * r))
        acc.add("wedge-graded-commutativity", (lhs - rhs).norm() / nw)

        if q >= 2:
            args = [rng.uniform(-1, 1, n) for _ in range(q)]
            swapped = list(args)
            swapped[0], swapped[1] = swapped[1], swapped[0]
            acc.add("evaluation-antisymmetry",
                    abs(w.evaluate(args) + w.evaluate(swapped)) / nw)
        else:
            acc.add("evaluation-antisymmetry", 0.0)
    return acc.rows(time.perf_counter() - t0)


# -- operators ------------------------------------------------------------------------

def _suite_operators(cfg: RunConfig, rng) -> list:
    acc = _Acc("operators", cfg)
    specs = _specs(cfg)
    t0 = time.perf_counter()
    for k in range(cfg.samples):
        spec, p = _draw(cfg, rng, specs)
        n = spec.n
        fr = geometry.liouville_frame(spec, p)

        q = int(rng.integers(0, min(2, n - 1) + 1))
        raw = vcalc.random_polynomial_form_field(rng, n, max(q, 1))
        scalar = vcalc.scalar_form_field(
            n, vcalc.polynomial_field(rng.uniform(-1, 1),
                                      rng.uniform(-1, 1, n),
                                      rng.uniform(-1, 1, (n, n))))
        ff = scalar if q == 0 else raw

        acc.add("d01-squared-zero", vcalc.d01(vcalc.d01(ff)).at(spec, p).norm())

        mixed1 = vcalc.random_polynomial_form_field(rng, n, 1)
        stab = vcalc.d01(vcalc.xi2_field(mixed1)).at(spec, p)
        acc.add("d01-stability-on-(0,q-1,1)",
                vforms.xi1(stab, fr).norm() / max(1.0, stab.norm()))

        lhs29 = vforms.xi1(vcalc.d01(ff).at(spec, p), fr)
        rhs29 = vforms.xi1(vcalc.d01(vcalc.xi1_field(ff)).at(spec, p), fr)
        acc.add("xi1-d01-projection-commutation", (lhs29 - rhs29).norm())

        pure = vcalc.xi1_field(ff)
        d01_val = vcalc.d01(pure).at(spec, p)
        dp_val = vcalc.d_prime(pure).at(spec, p)
        ds_val = vcalc.d_second(pure).at(spec, p)
        acc.add("d-prime-plus-d-second", (dp_val + ds_val - d01_val).norm())

        f = scalar.coeffs[()]
        fj = f(spec, p)
        dpf = vcalc.d_prime(scalar).at(spec, p)
        frame_formula = vforms.zero_form(n, 1)
        for i in range(n):
            Xif = float((np.eye(n)[i] - fr.t[i] * p.y) @ fj.grad)
            frame_formula = frame_formula + Xif * vforms.theta(fr, i)
        acc.add("d-prime-frame-formula", (dpf - frame_formula).norm())

        j = int(rng.integers(n))
        dyj = vcalc.d_prime(vcalc.scalar_form_field(n, vcalc.coordinate_field(j)))
        acc.add("d-prime-of-coordinates",
                (dyj.at(spec, p) - vforms.theta(fr, j)).norm())

        dsf = vcalc.d_second(scalar).at(spec, p)
        Zf_val = float(fj.grad @ p.y)
        acc.add("d-second-scalar-formula",
                (dsf - Zf_val * vforms.omega0(fr)).norm())

        qa = 1
        ra = 1 if n >= 3 else 0
        wa = vcalc.xi1_field(vcalc.random_polynomial_form_field(rng, n, qa))
        tb = (vcalc.xi1_field(vcalc.random_polynomial_form_field(rng, n, ra))
              if ra else vcalc.scalar_form_field(
                  n, vcalc.polynomial_field(rng.uniform(-1, 1), rng.uniform(-1, 1, n))))
        prod = vcalc.wedge_fields(wa, tb)
        lhs = vcalc.d_prime(prod).at(spec, p)
        rhs = (vcalc.wedge_fields(vcalc.d_prime(wa), tb).at(spec, p)
               + ((-1.0) ** qa) * vcalc.wedge_fields(wa, vcalc.d_prime(tb)).at(spec, p))
        acc.add("d-prime-leibniz", (lhs - rhs).norm())

        qq = 1 if n >= 3 else 0
        base = (vcalc.xi1_field(vcalc.random_polynomial_form_field(rng, n, qq))
                if qq else scalar)
        acc.add("d-prime-squared-zero",
                vcalc.d_prime(vcalc.d_prime(base)).at(spec, p).norm())

        anti = (vcalc.d01(vcalc.d_second(base)).at(spec, p)
                + vcalc.d_second(vcalc.d_prime(base)).at(spec, p))
        acc.add("d01-d-second-anticommutation", anti.norm())

        if n >= 3:
            i1, j1 = sorted(rng.choice(n, size=2, replace=False).tolist())
            wedge_ij = vcalc.wedge_fields(vcalc.theta_field(n, i1),
                                          vcalc.theta_field(n, j1))
            acc.add("coordinate-wedges-d-prime-closed",
                    vcalc.d_prime(wedge_ij).at(spec, p).norm())
        else:
            acc.add("coordinate-wedges-d-prime-closed", 0.0)

        pure1 = vcalc.xi1_field(mixed1)
        w_at = pure1.at(spec, p)
        rep = vforms.zero_form(n, 1)
        for i in range(n):
            rep = rep + w_at.get((i,)) * vforms.theta(fr, i)
        acc.add("basic-1form-representation", (w_at - rep).norm())

        if k % 25 == 0:
            try:
                vcalc.d_prime(mixed1).at(spec, p)
                acc.add("purity-domain-enforced", 1.0)
            except vcalc.PurityError:
                acc.add("purity-domain-enforced", 0.0)
        else:
            acc.add("purity-domain-enforced", 0.0)

        if k % FD_EVERY == 0:
            fld = vcalc.lnF_field()
            jet = fld(spec, p)
            fd = fd_oracle(lambda y: np.log(metrics.eval_F_value(spec, p.x, y)),
                           p.y, 1)
            acc.add("fd-oracle-scalar-field-grads", _rel(jet.grad, fd))
    return acc.rows(time.perf_counter() - t0)


# -- transitions ------------------------------------------------------------------------

def _suite_transitions(cfg: RunConfig, rng) -> list:
    acc = _Acc("transitions", cfg)
    specs = _specs(cfg)
    t0 = time.perf_counter()
    for _ in range(cfg.samples):
        spec, p = _draw(cfg, rng, specs)
        n = spec.n
        cat = transitions.default_transitions(n)
        T = cat[rng.integers(len(cat))]

        xt = T.forward(p.x)
        x_back = T.inverse(xt)
        J = T.jacobian(p.x)
        Jt_inv = np.linalg.inv(T.jacobian(x_back))
        acc.add("transition-round-trip",
                max(_absmax(x_back - p.x), _absmax(J @ Jt_inv - np.eye(n))))

        acc.add("t-covariance", transitions.check_t_covariance(spec, T, p).residual)
        acc.add("X-covariance", transitions.check_X_covariance(spec, T, p).residual)
        acc.add("omega0-invariance",
                transitions.check_omega0_invariance(spec, T, p).residual)
        acc.add("coefficient-law",
                transitions.check_coefficient_law(spec, T, p, rng).residual)

        pt = transitions.push_point(T, p)
        if (abs(p.y[n - 1]) > 0.05 * np.linalg.norm(p.y)
                and _absmax(pt.y) > 0.0):
            k = int(np.argmax(np.abs(pt.y)))
            try:
                computed, formula = transitions.frame_change_determinant(spec, T, p, k)
                acc.add("frame-change-determinant",
                        abs(computed - formula) / max(1.0, abs(formula)))
            except ValueError:
                acc.add("frame-change-determinant", 0.0)  # hypotheses not met: skipped
        else:
            acc.add("frame-change-determinant", 0.0)
    return acc.rows(time.perf_counter() - t0)


# -- poincare ---------------------------------------------------------------------------

def _exact_form_pool(cfg, rng, n):
    """Scalar potentials whose d' gives the exact 1-form fields under test."""
    pool = []
    pool.append(vcalc.polynomial_field(rng.uniform(-1, 1),
                                       rng.uniform(-1, 1, n),
                                       rng.uniform(-1, 1, (n, n))))

    def cubic_over_F(i):
        def f(spec, p, i=i):
            yj = vcalc.coordinate_field(i)(spec, p)
            return (yj * yj * yj) / metrics.eval_F_vertical(spec, p)
        return f

    pool.append(cubic_over_F(int(rng.integers(n))))
    return pool


def _suite_poincare(cfg: RunConfig, rng) -> list:
    acc = _Acc("poincare", cfg)
    t0 = time.perf_counter()
    dims = [n for n in cfg.dims if n <= 3] or [min(cfg.dims)]
    cats = {n: default_catalog(n) for n in dims}
    combos = [(n, cats[n][m]) for n in dims for m in cfg.metrics]
    # d' vanishes identically on 1-forms over 1-dimensional leaves (n = 2),
    # so the closedness-certificate rejection is only meaningful at n >= 3
    reject_idx = next((i for i in range(cfg.poincare_forms)
                       if combos[i % len(combos)][0] >= 3), None)
    if reject_idx is None:
        acc.add("non-closed-rejected", 0.0)  # vacuous when every leaf is a circle

    for idx in range(cfg.poincare_forms):
        n, spec = combos[idx % len(combos)]
        x0 = rng.uniform(-1.0, 1.0, n)
        c = float(rng.uniform(0.8, 1.5))
        base = leafprim.project_to_leaf(spec, x0, rng.normal(size=n), c)

        gpool = _exact_form_pool(cfg, rng, n)
        g = gpool[idx % len(gpool)]
        gfield = vcalc.scalar_form_field(n, g)
        omega = vcalc.d_prime(gfield)

        targets = []
        while len(targets) < 2:
            tgt = leafprim.project_to_leaf(spec, x0, rng.normal(size=n), c)
            if leafprim._segment_min_norm(base.y, tgt.y) >= 0.35 * np.linalg.norm(base.y):
                targets.append(tgt)

        res = leafprim.primitive_1form(spec, omega, base, targets, rng=rng)
        acc.add("primitive-reconstruction", res.dprime_residual)
        acc.add("two-path-independence", res.path_dependence)
        acc.add("semiexactness-q1", res.closedness)

        # gradient theorem: integral of d'g equals the potential difference
        worst = 0.0
        for tgt, val in zip(targets, res.values):
            truth = g(spec, tgt.point()).val - g(spec, base.point()).val
            worst = max(worst, abs(val - truth) / max(1.0, abs(truth)))
        acc.add("gradient-theorem-on-leaf", worst)

        path = leafprim.leaf_path(spec, base, targets[0])
        leaf_resid = max(abs(metrics.eval_F_value(spec, x0, s) - c)
                         for s in path.samples(64))
        acc.add("leaf-containment", leaf_resid)

        samples = [leafprim.project_to_leaf(spec, x0, rng.normal(size=n), c)
                   for _ in range(5)]
        _, r_basic = leafprim.is_basic(
            spec, lambda s, p: metrics.eval_F_vertical(s, p) ** 2, samples)
        acc.add("basic-function-of-F", r_basic)
        _, r_const = leafprim.is_basic(spec, vcalc.constant_field(3.7), samples)
        acc.add("constant-is-basic", r_const)
        ok, _ = leafprim.is_basic(spec, vcalc.coordinate_field(0), samples)
        acc.add("coordinate-not-basic", 1.0 if ok else 0.0)

        # exact => closed at q = 2 (values of d'(d' alpha) for a 1-form field)
        if n >= 3:
            alpha = vcalc.xi1_field(vcalc.random_polynomial_form_field(rng, n, 1))
            dd = vcalc.d_prime(vcalc.d_prime(alpha))
            acc.add("exact-implies-closed-q2",
                    max(dd.at(spec, lp.point()).norm() for lp in samples[:2]))
        else:
            acc.add("exact-implies-closed-q2", 0.0)

        if idx == 0:
            # closed loop on a leaf: out to a waypoint and back along two legs
            w1, w2 = targets[0], targets[1]
            loop = (leafprim._integrate_between(spec, omega, base, w1, rng, 2)
                    + leafprim._integrate_between(spec, omega, w1, w2, rng, 2)
                    + leafprim._integrate_between(spec, omega, w2, base, rng, 2))
            acc.add("closed-loop-integral-zero", abs(loop))

        if idx == reject_idx:
            bad = vcalc.xi1_field(vcalc.random_polynomial_form_field(rng, n, 1))
            try:
                leafprim.primitive_1form(spec, bad, base, targets, rng=rng)
                acc.add("non-closed-rejected", 1.0)
            except leafprim.NotClosedError:
                acc.add("non-closed-rejected", 0.0)
    return acc.rows(time.perf_counter() - t0)


# -- entry points -----------------------------------------------------------------------

_RUNNERS = {
    "euler": _suite_euler,
    "frame": _suite_frame,
    "brackets": _suite_brackets,
    "forms": _suite_forms,
    "operators": _suite_operators,
    "transitions": _suite_transitions,
    "poincare": _suite_poincare,
}


def run_suite(cfg: RunConfig, suite: str) -> SuiteReport:
    """Run one named suite (or 'all') and return its report."""
    if suite == "all":
        rows = []
        for name in SUITE_NAMES:
            rows.extend(_RUNNERS[name](cfg, _rng_for(cfg, name)))
        return SuiteReport("all", cfg.seed, tuple(rows))
    if suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}; choose from "
                         f"{', '.join(SUITE_NAMES)} or 'all'")
    rows = _RUNNERS[suite](cfg, _rng_for(cfg, suite))
    return SuiteReport(suite, cfg.seed, tuple(rows))
