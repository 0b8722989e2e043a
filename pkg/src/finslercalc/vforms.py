"""Pointwise exterior algebra of vertical q-forms in the delta-y basis.

A :class:`VerticalForm` holds antisymmetric coefficients over strictly
increasing index tuples.  The wedge follows the shuffle (determinant)
convention fixed by the dual pairing delta-y^i(d/dy^j) = delta^i_j, i.e.
(dy^1 ^ dy^2)(e1, e2) = 1; this is the convention under which the
interior-product identity i_Z(w0 ^ a) = w0(Z) a - w0 ^ i_Z(a) holds and
the splitting w = xi1(w) + xi2(w) reconstructs exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .geometry import LiouvilleFrame

PURE_Q0 = "pure-(0,q,0)"
PURE_Q11 = "pure-(0,q-1,1)"
MIXED = "mixed"
ZERO = "zero"


class VerticalForm:
    """Degree-q vertical form at a point, coefficients over increasing tuples."""

    __slots__ = ("n", "q", "coeffs")

    def __init__(self, n: int, q: int, coeffs: dict | None = None):
        if not 0 <= q:
            raise ValueError("degree must be nonnegative")
        self.n = n
        self.q = q
        self.coeffs = {}
        if coeffs:
            for idx, c in coeffs.items():
                idx = tuple(idx)
                if len(idx) != q or list(idx) != sorted(set(idx)):
                    raise ValueError(f"index tuple {idx} not strictly increasing of length {q}")
                if c != 0.0:
                    self.coeffs[idx] = float(c)

    # -- basics -------------------------------------------------------------

    def __repr__(self):
        return f"VerticalForm(n={self.n}, q={self.q}, {self.coeffs})"

    def get(self, idx) -> float:
        return self.coeffs.get(tuple(idx), 0.0)

    def norm(self) -> float:
        """Max-abs over coefficients."""
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def copy(self) -> "VerticalForm":
        return VerticalForm(self.n, self.q, dict(self.coeffs))

    def _check(self, other: "VerticalForm"):
        if self.n != other.n or self.q != other.q:
            raise ValueError("form dimension/degree mismatch")

    def __add__(self, other):
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return VerticalForm(self.n, self.q,
                            {k: self.coeffs.get(k, 0.0) + other.coeffs.get(k, 0.0)
                             for k in keys})

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c):
        c = float(c)
        return VerticalForm(self.n, self.q, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, args) -> float:
        """Value on q vertical vectors (components in the d/dy basis)."""
        args = [np.asarray(a, dtype=float) for a in args]
        if len(args) != self.q:
            raise ValueError(f"expected {self.q} arguments, got {len(args)}")
        if self.q == 0:
            return self.coeffs.get((), 0.0)
        if any(a.shape != (self.n,) for a in args):
            raise ValueError(f"arguments must be vectors of length {self.n}")
        total = 0.0
        for idx, c in self.coeffs.items():
            M = np.array([[a[i] for a in args] for i in idx])
            total += c * np.linalg.det(M)
        return total

    # -- exterior algebra -------------------------------------------------------

    def wedge(self, other: "VerticalForm") -> "VerticalForm":
        if self.n != other.n:
            raise ValueError("form dimension mismatch")
        q = self.q + other.q
        if q > self.n:
            return VerticalForm(self.n, q)  # identically zero beyond top degree
        acc: dict = {}
        for I, a in self.coeffs.items():
            si = set(I)
            for J, b in other.coeffs.items():
                if si & set(J):
                    continue
                K, sign = _merge_sign(I, J)
                acc[K] = acc.get(K, 0.0) + sign * a * b
        return VerticalForm(self.n, q, acc)

    def interior(self, v) -> "VerticalForm":
        """Contraction of the first slot with the vector v."""
        if self.q == 0:
            raise ValueError("interior product undefined on 0-forms")
        v = np.asarray(v, dtype=float)
        acc: dict = {}
        for I, c in self.coeffs.items():
            for pos, i in enumerate(I):
                J = I[:pos] + I[pos + 1:]
                acc[J] = acc.get(J, 0.0) + ((-1) ** pos) * v[i] * c
        return VerticalForm(self.n, self.q - 1, acc)


def _merge_sign(I: tuple, J: tuple):
    """Sorted union of disjoint increasing tuples and the shuffle sign."""
    merged = list(I)
    sign = 1
    for j in J:
        pos = 0
        while pos < len(merged) and merged[pos] < j:
            pos += 1
        sign *= (-1) ** (len(merged) - pos)
        merged.insert(pos, j)
    return tuple(merged), sign


def zero_form(n: int, q: int) -> VerticalForm:
    return VerticalForm(n, q)


def basis_form(n: int, idx) -> VerticalForm:
    """delta-y^{i1} ^ ... ^ delta-y^{iq} for a strictly increasing tuple."""
    return VerticalForm(n, len(idx), {tuple(idx): 1.0})


def wedge(a: VerticalForm, b: VerticalForm) -> VerticalForm:
    return a.wedge(b)


# -- Liouville-adapted constructions -----------------------------------------

def interior_Z(omega: VerticalForm, frame: LiouvilleFrame) -> VerticalForm:
    """i_Z omega, contraction with the Liouville field components y."""
    return omega.interior(frame.Zcomp)


def omega0(frame: LiouvilleFrame) -> VerticalForm:
    """The global vertical 1-form t_k delta-y^k."""
    n = frame.t.size
    return VerticalForm(n, 1, {(k,): frame.t[k] for k in range(n)})


def theta(frame: LiouvilleFrame, i: int) -> VerticalForm:
    """theta_i = delta-y^i - y^i omega0, a pure-(0,1,0) form (0-based index)."""
    n = frame.t.size
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for n={n}")
    return basis_form(n, (i,)) - frame.Zcomp[i] * omega0(frame)


@dataclass(frozen=True)
class SplitForm:
    part_sq0: VerticalForm   # the (0,q,0) component xi1(omega)
    part_sq1: VerticalForm   # the (0,q-1,1) component xi2(omega)


def split(omega: VerticalForm, frame: LiouvilleFrame) -> SplitForm:
    """Unique decomposition omega = xi1(omega) + xi2(omega)."""
    if omega.q < 1:
        raise ValueError("split requires degree >= 1")
    w0 = omega0(frame)
    part2 = w0.wedge(interior_Z(omega, frame))
    return SplitForm(omega - part2, part2)


def xi1(omega: VerticalForm, frame: LiouvilleFrame) -> VerticalForm:
    if omega.q == 0:
        return omega.copy()
    return split(omega, frame).part_sq0


def xi2(omega: VerticalForm, frame: LiouvilleFrame) -> VerticalForm:
    if omega.q == 0:
        return zero_form(omega.n, 0)
    return split(omega, frame).part_sq1


def classify(omega: VerticalForm, frame: LiouvilleFrame, tol: float = 1e-10) -> str:
    """One of pure-(0,q,0) | pure-(0,q-1,1) | mixed | zero."""
    nrm = omega.norm()
    if nrm <= tol:
        return ZERO
    if omega.q == 0:
        return PURE_Q0
    s = split(omega, frame)
    if interior_Z(omega, frame).norm() <= tol * nrm:
        return PURE_Q0
    if s.part_sq0.norm() <= tol * nrm:
        return PURE_Q11
    return MIXED


def vanishes_on_leaf_tuples(omega: VerticalForm, frame: LiouvilleFrame,
                            kept) -> float:
    """Max |omega(X_{i1}, ..., X_{iq})| over increasing tuples from the L' basis.

    Zero (up to tolerance) exactly for (0,q-1,1)-forms.
    """
    X = frame.X
    worst = 0.0
    for idx in combinations(kept, omega.q):
        worst = max(worst, abs(omega.evaluate([X[i] for i in idx])))
    return worst


def random_form(rng: np.random.Generator, n: int, q: int) -> VerticalForm:
    """Coefficients uniform in [-1, 1]; used by the randomized identity suites."""
    return VerticalForm(n, q, {idx: rng.uniform(-1.0, 1.0)
                               for idx in combinations(range(n), q)})
