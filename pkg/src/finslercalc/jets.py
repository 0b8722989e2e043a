"""Truncated Taylor (jet) arithmetic up to total order 3.

Every derivative used anywhere in the package flows through :class:`Jet3`:
a jet carries the value, gradient, Hessian and third-order derivative
tensor of a scalar function of ``m`` variables at a point, and arithmetic
propagates all of them exactly through order 3.  Higher orders are
truncated, so for polynomial inputs of degree <= 3 every stored
coefficient equals the analytic derivative.

Finite-difference estimates (:func:`fd_oracle`) are provided as an
*independent* cross-check and are only ever used in tests; production
code never differences computed values.
"""

from __future__ import annotations

from typing import Callable

import numpy as np


class JetDomainError(ArithmeticError):
    """An elementary operation was applied outside its smoothness domain."""

    def __init__(self, op: str, value: float):
        super().__init__(f"{op}: operand value {value!r} outside domain")
        self.op = op
        self.value = value


def _sym3(g: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Symmetrization of g_i * H_jk over the three index placements."""
    gh = np.einsum("i,jk->ijk", g, H)
    return gh + gh.transpose(1, 0, 2) + gh.transpose(2, 1, 0)


class Jet3:
    """Order-3 jet of a scalar function of ``m`` real variables.

    ``hess`` and ``third`` are stored as full dense arrays, symmetric
    under any index permutation.  Instances are treated as immutable:
    every operation returns a fresh jet.
    """

    __slots__ = ("m", "val", "grad", "hess", "third")

    def __init__(self, m, val, grad=None, hess=None, third=None):
        self.m = int(m)
        self.val = float(val)
        self.grad = np.zeros(m) if grad is None else np.asarray(grad, dtype=float)
        self.hess = np.zeros((m, m)) if hess is None else np.asarray(hess, dtype=float)
        self.third = (
            np.zeros((m, m, m)) if third is None else np.asarray(third, dtype=float)
        )

    def __repr__(self):
        return f"Jet3(m={self.m}, val={self.val})"

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> "Jet3":
        if isinstance(other, Jet3):
            if other.m != self.m:
                raise ValueError(f"jet variable counts differ: {self.m} vs {other.m}")
            return other
        return constant(float(other), self.m)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        return Jet3(self.m, self.val + o.val, self.grad + o.grad,
                    self.hess + o.hess, self.third + o.third)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(self.m, -self.val, -self.grad, -self.hess, -self.third)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet3):
            c = float(other)
            return Jet3(self.m, c * self.val, c * self.grad,
                        c * self.hess, c * self.third)
        o = self._coerce(other)
        val = self.val * o.val
        grad = self.val * o.grad + o.val * self.grad
        hess = (self.val * o.hess + o.val * self.hess
                + np.outer(self.grad, o.grad) + np.outer(o.grad, self.grad))
        third = (self.val * o.third + o.val * self.third
                 + _sym3(self.grad, o.hess) + _sym3(o.grad, self.hess))
        return Jet3(self.m, val, grad, hess, third)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o._reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self._reciprocal()

    def _reciprocal(self) -> "Jet3":
        v = self.val
        if v == 0.0:
            raise JetDomainError("div", v)
        return self.compose(1.0 / v, -1.0 / v**2, 2.0 / v**3, -6.0 / v**4)

    def __pow__(self, p):
        p = float(p)
        v = self.val
        if p.is_integer():
            k = int(p)
            if k >= 0 and k == round(k):
                if v == 0.0 and k < 3:
                    # derivatives of v**k at 0 are fine for integer k >= 0
                    pass
            elif v == 0.0:
                raise JetDomainError("pow", v)
        elif v <= 0.0:
            raise JetDomainError("pow", v)
        d0 = v**p
        d1 = p * v ** (p - 1) if p != 0 else 0.0
        d2 = p * (p - 1) * v ** (p - 2) if p not in (0.0, 1.0) else 0.0
        d3 = p * (p - 1) * (p - 2) * v ** (p - 3) if p not in (0.0, 1.0, 2.0) else 0.0
        return self.compose(d0, d1, d2, d3)

    # -- analytic functions -----------------------------------------------

    def sqrt(self) -> "Jet3":
        v = self.val
        if v <= 0.0:
            raise JetDomainError("sqrt", v)
        r = np.sqrt(v)
        return self.compose(r, 0.5 / r, -0.25 * v**-1.5, 0.375 * v**-2.5)

    def log(self) -> "Jet3":
        v = self.val
        if v <= 0.0:
            raise JetDomainError("ln", v)
        return self.compose(np.log(v), 1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def compose(self, d0, d1, d2, d3) -> "Jet3":
        """Jet of g(f) given derivatives d0..d3 of g at f's value (Faa di Bruno)."""
        g, H, T = self.grad, self.hess, self.third
        return Jet3(
            self.m,
            d0,
            d1 * g,
            d1 * H + d2 * np.outer(g, g),
            d1 * T + d2 * _sym3(g, H) + d3 * np.einsum("i,j,k->ijk", g, g, g),
        )

    # -- differentiation --------------------------------------------------

    def partial(self, j: int) -> "Jet3":
        """Jet of the partial derivative with respect to variable ``j``.

        Differentiation consumes one trusted order: the returned jet has
        exact value, gradient and Hessian, but its third-order block is
        unknown and set to zero.  Callers must not rely on third-order
        coefficients of a differentiated jet.
        """
        if not 0 <= j < self.m:
            raise ValueError(f"variable index {j} out of range for m={self.m}")
        return Jet3(self.m, self.grad[j], self.hess[j].copy(), self.third[j].copy())


def constant(value: float, m: int) -> Jet3:
    """Jet of the constant function ``value`` in ``m`` variables."""
    return Jet3(m, value)


def seed_variable(index: int, value: float, m: int) -> Jet3:
    """Jet of the coordinate function u -> u_index at the given point."""
    if not 0 <= index < m:
        raise ValueError(f"variable index {index} out of range for m={m}")
    g = np.zeros(m)
    g[index] = 1.0
    return Jet3(m, value, g)


# -- independent finite-difference oracle (tests only) ---------------------

def fd_oracle(
    f: Callable[[np.ndarray], float],
    point: np.ndarray,
    order: int,
    h: float = 1e-5,
) -> np.ndarray:
    """Central finite-difference gradient (order=1) or Hessian (order=2).

    Used only to cross-check jet output in tests; NaNs propagate and fail
    the comparing test.
    """
    x = np.asarray(point, dtype=float)
    m = x.size
    if order == 1:
        out = np.empty(m)
        for i in range(m):
            e = np.zeros(m)
            e[i] = h
            out[i] = (f(x + e) - f(x - e)) / (2 * h)
        return out
    if order == 2:
        out = np.empty((m, m))
        f0 = f(x)
        for i in range(m):
            ei = np.zeros(m)
            ei[i] = h
            out[i, i] = (f(x + ei) - 2 * f0 + f(x - ei)) / h**2
            for j in range(i + 1, m):
                ej = np.zeros(m)
                ej[j] = h
                out[i, j] = out[j, i] = (
                    f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
                ) / (4 * h**2)
        return out
    raise ValueError(f"order must be 1 or 2, got {order}")
