"""Acceptance gate: one test per criterion, pinned tolerances.

All criteria run at n in {2, 3, 4}, 200 random points per identity,
seed 42, against the full four-metric catalog; the combined budget for
the two full harness runs (criteria 1-8 share the first, criterion 9
needs a second) is 60 seconds.
"""

import time

import pytest

from finslercalc.config import RunConfig
from finslercalc.report import to_json
from finslercalc.suites import run_suite

CFG = RunConfig()  # dims (2, 3, 4), 4 metrics, samples 200, seed 42
_TIMINGS = {}


@pytest.fixture(scope="module")
def report():
    t0 = time.perf_counter()
    rep = run_suite(CFG, "all")
    _TIMINGS["first"] = time.perf_counter() - t0
    return rep


@pytest.fixture(scope="module")
def rows(report):
    return {r.identity: r for r in report.results}


def _check(rows, identities, tol):
    for name in identities:
        row = rows[name]
        assert row.samples >= 1
        assert row.max_residual < tol, (
            f"{name}: max residual {row.max_residual:.3e} >= {tol:.1e} "
            f"(anchor {row.anchor})")


def test_criterion_1_euler_homogeneity(rows):
    _check(rows, ["F2-equals-ygy", "dF-dy-equals-gy-over-F",
                  "y-contracts-dg-to-zero", "sasaki-Z-Z-equals-F2"], 1e-9)


def test_criterion_2_liouville_frame(rows):
    _check(rows, ["sasaki-Xk-Z-zero", "y-dot-t-equals-1",
                  "y-weighted-X-sum-zero", "dt-dy-formula",
                  "Z-t-equals-minus-t", "y-contract-dt-equals-minus-t",
                  "y-dot-Zt-equals-minus-1", "y-weighted-ZX-sum-zero",
                  "Xn-linear-dependence"], 1e-9)
    _check(rows, ["t-two-formulas-agree"], 1e-10)


def test_criterion_3_brackets(rows):
    _check(rows, ["bracket-Xi-Xj", "bracket-Xi-Z"], 1e-8)


def test_criterion_4_forms(rows):
    _check(rows, ["omega0-on-Z", "omega0-on-Xa", "omega0-equals-d01-lnF",
                  "iZ-zero-characterization", "iZ-iZ-zero",
                  "iZ-nonzero-on-mixed-type",
                  "omega0-wedge-lands-in-(0,q-1,1)",
                  "split-reconstruction", "projector-laws",
                  "omega0-wedge-representation", "wedge-type-q0-q0",
                  "wedge-type-q1-q0", "wedge-type-q1-q1-zero",
                  "omega0-classification", "theta-annihilates-Z",
                  "theta-linear-dependence", "theta-wedge-type"], 1e-10)


def test_criterion_5_operators(rows):
    _check(rows, ["d01-stability-on-(0,q-1,1)",
                  "xi1-d01-projection-commutation", "d-prime-plus-d-second",
                  "d-prime-frame-formula", "d-prime-of-coordinates",
                  "d-prime-leibniz", "d-prime-squared-zero",
                  "d01-d-second-anticommutation",
                  "coordinate-wedges-d-prime-closed"], 1e-8)


def test_criterion_6_transitions(rows):
    _check(rows, ["t-covariance", "X-covariance", "omega0-invariance",
                  "coefficient-law", "frame-change-determinant"], 1e-7)


def test_criterion_7_poincare(rows):
    row = rows["primitive-reconstruction"]
    assert row.samples >= 20, "criterion requires 20 reconstructed form fields"
    assert row.max_residual < 1e-6
    assert rows["two-path-independence"].max_residual < 1e-7
    assert rows["non-closed-rejected"].passed
    assert rows["semiexactness-q1"].passed
    assert rows["exact-implies-closed-q2"].passed
    assert rows["gradient-theorem-on-leaf"].passed


def test_criterion_8_oracle_independence(rows):
    _check(rows, ["fd-oracle-grad-F", "fd-oracle-hessian-g",
                  "fd-oracle-christoffel-spray", "fd-oracle-t-gradient",
                  "fd-oracle-X-component-grads"], 1e-5)


def test_criterion_9_determinism(report):
    t0 = time.perf_counter()
    second = run_suite(CFG, "all")
    _TIMINGS["second"] = time.perf_counter() - t0
    assert to_json(report) == to_json(second)


def test_total_budget_under_60s(report):
    assert "second" in _TIMINGS, "determinism criterion must run first"
    total = _TIMINGS["first"] + _TIMINGS["second"]
    assert total < 60.0, f"two full harness runs took {total:.1f}s"


def test_all_identities_pass(report):
    failing = [r.identity for r in report.results if not r.passed]
    assert not failing, f"failing identities: {failing}"
