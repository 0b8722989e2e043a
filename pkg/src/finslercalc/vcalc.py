"""Leafwise differential calculus on vertical form fields.

A ``ScalarField`` is any callable ``(spec, p) -> Jet3`` returning a jet in
the n fiber variables (x frozen); a :class:`FormField` assigns such a
coefficient field to every increasing index tuple.  The foliated
derivative d01 acts by the leafwise coordinate formula

    d01(sum a_I dy^I) = sum (da_I/dy^j) dy^j ^ dy^I,

which on a leaf x = const is the ordinary exterior derivative (dy^i
restricts to the coordinate differential there); this is the unique
extension of the function case consistent with d01 o d01 = 0.

The operators d' = xi1 o d01 and d'' = xi2 o d01 are defined only on
pointwise pure-(0,q,0) inputs; evaluating them on anything else raises
:class:`PurityError`.  In particular composing d'' with itself is
rejected at the interface (its output is never pure-(0,q,0)).

Differentiation consumes one trusted jet order (see Jet3.partial), so a
chain of k leafwise derivatives yields coefficient jets exact through
order 3 - k; every identity suite only reads orders that remain exact.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable

import numpy as np

from .jets import Jet3, constant, seed_variable
from .metrics import MetricSpec, PointTM, eval_F_vertical
from .geometry import liouville_frame
from . import vforms
from .vforms import VerticalForm

ScalarField = Callable[[MetricSpec, PointTM], Jet3]

PURITY_TOL = 1e-8


def _memo1(f: "ScalarField") -> "ScalarField":
    """Last-point cache: composite fields are evaluated many times per point
    (one per partial direction, plus purity guards), so caching the most
    recent evaluation site collapses repeated subtree work."""
    state: dict = {}

    def wrapped(spec, p):
        key = (id(spec), p.x.tobytes(), p.y.tobytes())
        if state.get("k") == key:
            return state["v"]
        v = f(spec, p)
        state["k"] = key
        state["v"] = v
        return v

    return wrapped


class PurityError(ValueError):
    """Input of d'/d'' is not pointwise pure-(0,q,0) (domain of Eq-type operators)."""


# -- scalar fields -------------------------------------------------------------

def constant_field(c: float) -> ScalarField:
    return lambda spec, p: constant(c, p.n)


def coordinate_field(i: int) -> ScalarField:
    """The fiber coordinate function y^i."""
    return lambda spec, p: seed_variable(i, p.y[i], p.n)


def polynomial_field(c0: float, c1=None, c2=None) -> ScalarField:
    """Quadratic polynomial in y: c0 + c1.y + y^T c2 y (exact closed-form jet)."""
    def f(spec: MetricSpec, p: PointTM) -> Jet3:
        n = p.n
        y = p.y
        a1 = np.zeros(n) if c1 is None else np.asarray(c1, dtype=float)
        a2 = np.zeros((n, n)) if c2 is None else np.asarray(c2, dtype=float)
        s2 = a2 + a2.T
        return Jet3(n, c0 + a1 @ y + y @ a2 @ y, a1 + s2 @ y, s2)
    return f


def F_field() -> ScalarField:
    return lambda spec, p: eval_F_vertical(spec, p)


def lnF_field() -> ScalarField:
    return lambda spec, p: eval_F_vertical(spec, p).log()


def t_field(k: int) -> ScalarField:
    """t_k = (1/F) dF/dy^k as a jet-valued field (exact through order 2)."""
    def f(spec: MetricSpec, p: PointTM) -> Jet3:
        Fj = eval_F_vertical(spec, p)
        return Fj.partial(k) / Fj
    return _memo1(f)


def add_fields(a: ScalarField, b: ScalarField) -> ScalarField:
    return _memo1(lambda spec, p: a(spec, p) + b(spec, p))


def scale_field(c: float, a: ScalarField) -> ScalarField:
    return _memo1(lambda spec, p: a(spec, p) * c)


def mul_fields(a: ScalarField, b: ScalarField) -> ScalarField:
    return _memo1(lambda spec, p: a(spec, p) * b(spec, p))


# -- form fields ----------------------------------------------------------------

class FormField:
    """Vertical q-form field: coefficient ScalarFields over increasing tuples."""

    def __init__(self, n: int, q: int, coeffs: dict, guard=None):
        self.n = n
        self.q = q
        self.coeffs = {tuple(k): v for k, v in coeffs.items()}
        self.guard = guard

    def jets(self, spec: MetricSpec, p: PointTM) -> dict:
        if self.guard is not None:
            self.guard(spec, p)
        return {idx: f(spec, p) for idx, f in self.coeffs.items()}

    def at(self, spec: MetricSpec, p: PointTM) -> VerticalForm:
        return VerticalForm(self.n, self.q,
                            {idx: j.val for idx, j in self.jets(spec, p).items()})

    def __add__(self, other: "FormField") -> "FormField":
        if (self.n, self.q) != (other.n, other.q):
            raise ValueError("form field dimension/degree mismatch")
        coeffs = dict(self.coeffs)
        for idx, f in other.coeffs.items():
            coeffs[idx] = add_fields(coeffs[idx], f) if idx in coeffs else f
        return FormField(self.n, self.q, coeffs)

    def __sub__(self, other: "FormField") -> "FormField":
        return self + (-1.0) * other

    def __mul__(self, c: float) -> "FormField":
        return FormField(self.n, self.q,
                         {idx: scale_field(float(c), f) for idx, f in self.coeffs.items()})

    __rmul__ = __mul__


def scalar_form_field(n: int, f: ScalarField) -> FormField:
    """A 0-form field wrapping a scalar field."""
    return FormField(n, 0, {(): f})


def form_field_from_polys(n: int, q: int, coeff_map: dict) -> FormField:
    return FormField(n, q, coeff_map)


def random_polynomial_form_field(rng: np.random.Generator, n: int, q: int,
                                 degree: int = 2) -> FormField:
    """Random form field with polynomial (degree <= 2) coefficients in [-1, 1]."""
    coeffs = {}
    for idx in combinations(range(n), q):
        c0 = rng.uniform(-1.0, 1.0)
        c1 = rng.uniform(-1.0, 1.0, n) if degree >= 1 else None
        c2 = rng.uniform(-1.0, 1.0, (n, n)) if degree >= 2 else None
        coeffs[idx] = polynomial_field(c0, c1, c2)
    return FormField(n, q, coeffs)


# -- canonical fields ------------------------------------------------------------

def omega0_field(n: int) -> FormField:
    """The global 1-form field t_k dy^k."""
    return FormField(n, 1, {(k,): t_field(k) for k in range(n)})


def theta_field(n: int, i: int) -> FormField:
    """theta_i = dy^i - y^i omega0 as a field."""
    coeffs = {}
    for k in range(n):
        tk = t_field(k)
        yi = coordinate_field(i)
        term = scale_field(-1.0, mul_fields(yi, tk))
        if k == i:
            term = add_fields(constant_field(1.0), term)
        coeffs[(k,)] = term
    return FormField(n, 1, coeffs)


def liouville_X_fields(n: int, i: int) -> list:
    """Component ScalarFields of X_i = e_i - t_i y."""
    out = []
    for j in range(n):
        term = scale_field(-1.0, mul_fields(t_field(i), coordinate_field(j)))
        if j == i:
            term = add_fields(constant_field(1.0), term)
        out.append(term)
    return out


def liouville_Z_fields(n: int) -> list:
    """Component ScalarFields of Z = y^j d/dy^j."""
    return [coordinate_field(j) for j in range(n)]


# -- operators --------------------------------------------------------------------

def d01(ff: FormField) -> FormField:
    """Foliated (leafwise) exterior derivative along the vertical foliation."""
    n, q = ff.n, ff.q
    coeffs = {}
    for K in combinations(range(n), q + 1):
        terms = []
        for pos, j in enumerate(K):
            I = K[:pos] + K[pos + 1:]
            if I in ff.coeffs:
                terms.append((((-1) ** pos), ff.coeffs[I], j))
        if not terms:
            continue

        def coeff(spec, p, terms=terms):
            acc = None
            for sign, f, j in terms:
                d = f(spec, p).partial(j) * sign
                acc = d if acc is None else acc + d
            return acc

        coeffs[K] = _memo1(coeff)
    return FormField(n, q + 1, coeffs)


def interior_Z_field(ff: FormField) -> FormField:
    """i_Z applied pointwise, with y as jet-valued coordinate fields."""
    if ff.q == 0:
        raise ValueError("interior product undefined on 0-form fields")
    n = ff.n
    acc_map: dict = {}
    for I, f in ff.coeffs.items():
        for pos, i in enumerate(I):
            J = I[:pos] + I[pos + 1:]
            term = scale_field(float((-1) ** pos), mul_fields(coordinate_field(i), f))
            acc_map[J] = add_fields(acc_map[J], term) if J in acc_map else term
    return FormField(n, ff.q - 1, acc_map)


def wedge_fields(a: FormField, b: FormField) -> FormField:
    if a.n != b.n:
        raise ValueError("form field dimension mismatch")
    n = a.n
    q = a.q + b.q
    if q > n:
        return FormField(n, q, {})
    acc_map: dict = {}
    for I, fa in a.coeffs.items():
        si = set(I)
        for J, fb in b.coeffs.items():
            if si & set(J):
                continue
            K, sign = vforms._merge_sign(I, J)
            term = scale_field(float(sign), mul_fields(fa, fb))
            acc_map[K] = add_fields(acc_map[K], term) if K in acc_map else term
    return FormField(n, q, acc_map)


def xi1_field(ff: FormField) -> FormField:
    if ff.q == 0:
        return ff
    return ff - wedge_fields(omega0_field(ff.n), interior_Z_field(ff))


def xi2_field(ff: FormField) -> FormField:
    if ff.q == 0:
        return FormField(ff.n, 0, {(): constant_field(0.0)})
    return wedge_fields(omega0_field(ff.n), interior_Z_field(ff))


def _purity_guard(ff: FormField, op: str):
    if ff.q == 0:
        return None
    plain = FormField(ff.n, ff.q, ff.coeffs)  # drop ff's own guard to avoid recursion

    def guard(spec, p):
        w = plain.at(spec, p)
        frame = liouville_frame(spec, p)
        resid = vforms.interior_Z(w, frame).norm()
        if resid > PURITY_TOL * max(1.0, w.norm()):
            raise PurityError(
                f"{op} requires a pointwise pure-(0,q,0) input; "
                f"i_Z residual {resid:g} at y={p.y}"
            )
    return guard


def d_prime(ff: FormField) -> FormField:
    """d' = xi1 o d01 on pure-(0,q,0) fields."""
    out = xi1_field(d01(ff))
    out.guard = _purity_guard(ff, "d'")
    return out


def d_second(ff: FormField) -> FormField:
    """d'' = xi2 o d01 on pure-(0,q,0) fields."""
    out = xi2_field(d01(ff))
    out.guard = _purity_guard(ff, "d''")
    return out


# -- brackets ------------------------------------------------------------------------

def lie_bracket(V: list, W: list, spec: MetricSpec, p: PointTM) -> np.ndarray:
    """[V, W]^i = V^j dW^i/dy^j - W^j dV^i/dy^j for vertical fields (x frozen)."""
    n = p.n
    Vj = [f(spec, p) for f in V]
    Wj = [f(spec, p) for f in W]
    out = np.zeros(n)
    for i in range(n):
        out[i] = sum(Vj[j].val * Wj[i].grad[j] - Wj[j].val * Vj[i].grad[j]
                     for j in range(n))
    return out
