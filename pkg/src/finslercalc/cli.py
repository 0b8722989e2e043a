"""Command-line interface.

Exit codes: 0 all identities passed, 1 at least one identity failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import geometry, leafprim, vcalc, vforms
from .config import (ConfigError, SUITE_NAMES, default_config,
                     load_config, with_overrides)
from .metrics import PointTM, default_catalog
from .report import emit_report
from .suites import run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="finslercalc",
        description="Liouville-foliation calculus on the slit tangent bundle: "
                    "identity suites, pointwise evaluation, leaf primitives.")
    sub = ap.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run a randomized identity suite")
    chk.add_argument("suite", choices=SUITE_NAMES + ("all",))
    chk.add_argument("--config", help="YAML run configuration")
    chk.add_argument("--seed", type=int, help="override the run seed")
    chk.add_argument("--samples", type=int, help="override samples per identity")
    chk.add_argument("--metric", action="append", dest="metrics",
                     help="restrict the metric catalog (repeatable)")
    chk.add_argument("--n", action="append", dest="dims", type=int,
                     help="restrict the dimensions (repeatable)")
    chk.add_argument("--format", choices=("text", "json"), default="text")
    chk.add_argument("--out", help="write the report to this path")

    ev = sub.add_parser("eval", help="evaluate the frame objects at one point")
    ev.add_argument("--metric", default="riemannian",
                    choices=("euclidean", "riemannian", "randers",
                             "minkowski-quartic"))
    ev.add_argument("--x", required=True,
                    help="comma-separated base coordinates")
    ev.add_argument("--y", required=True,
                    help="comma-separated fiber coordinates")

    pr = sub.add_parser("primitive",
                        help="reconstruct a primitive of a d'-exact 1-form "
                             "on an indicatrix leaf (demo)")
    pr.add_argument("--metric", default="riemannian",
                    choices=("euclidean", "riemannian", "randers",
                             "minkowski-quartic"))
    pr.add_argument("--demo", action="store_true", default=True,
                    help="run the degree-1 reconstruction demo (default)")
    pr.add_argument("--n", type=int, default=3)
    pr.add_argument("--seed", type=int, default=42)
    return ap


def _parse_vec(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"could not parse vector {text!r}: {exc}")


def _cmd_check(args) -> int:
    cfg = load_config(args.config) if args.config else default_config()
    cfg = with_overrides(
        cfg,
        seed=args.seed,
        samples=args.samples,
        metrics=tuple(args.metrics) if args.metrics else None,
        dims=tuple(args.dims) if args.dims else None,
    )
    report = run_suite(cfg, args.suite)
    out = args.out or cfg.output
    sys.stdout.write(emit_report(report, out, args.format))
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_eval(args) -> int:
    x = _parse_vec(args.x)
    y = _parse_vec(args.y)
    if x.size != y.size:
        raise ConfigError("--x and --y must have the same length")
    spec = default_catalog(x.size)[args.metric]
    p = PointTM(x, y)
    ft = geometry.fundamental_tensor(spec, p)
    sp = geometry.spray(spec, p)
    fr = geometry.liouville_frame(spec, p)
    fb = geometry.frame_basis(spec, p)
    w0 = vforms.omega0(fr)
    np.set_printoptions(precision=8, suppress=True)
    print(f"metric          : {spec.name} (n={spec.n})")
    print(f"F               : {fr.F:.10g}")
    print(f"g_ij            :\n{ft.g}")
    print(f"spray G^i       : {sp.G}")
    print(f"G^i_j           :\n{sp.Gconn}")
    print(f"t_k             : {fr.t}")
    print(f"X_k (rows)      :\n{fr.X}")
    print(f"omega0 coeffs   : {np.array([w0.get((k,)) for k in range(spec.n)])}")
    print(f"dropped index k*: {fb.k_star}  (sigma_min {fb.sigma_min:.3e})")
    return EXIT_PASS


def _cmd_primitive(args) -> int:
    n = args.n
    spec = default_catalog(n)[args.metric]
    rng = np.random.default_rng(args.seed)
    x0 = rng.uniform(-1.0, 1.0, n)
    c = 1.0

    # potential g = y^1 y^2; omega = d'g is exact, so path integrals recover
    # the potential difference between leaf points
    g = vcalc.mul_fields(vcalc.coordinate_field(0), vcalc.coordinate_field(1))
    omega = vcalc.d_prime(vcalc.scalar_form_field(n, g))

    base = leafprim.project_to_leaf(spec, x0, rng.normal(size=n), c)
    targets = [leafprim.project_to_leaf(spec, x0, rng.normal(size=n), c)
               for _ in range(2)]
    res = leafprim.primitive_1form(spec, omega, base, targets, rng=rng)

    print(f"metric                : {spec.name} (n={n}, leaf F = {c})")
    print(f"basepoint y           : {base.y}")
    for tgt, val in zip(targets, res.values):
        truth = (tgt.y[0] * tgt.y[1]) - (base.y[0] * base.y[1])
        print(f"target y              : {tgt.y}")
        print(f"  f(target)           : {val:+.12f}   "
              f"(potential difference {truth:+.12f})")
    print(f"d' residual           : {res.dprime_residual:.3e}")
    print(f"two-path discrepancy  : {res.path_dependence:.3e}")
    print(f"closedness certificate: {res.closedness:.3e}")
    return EXIT_PASS


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "eval":
            return _cmd_eval(args)
        return _cmd_primitive(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
