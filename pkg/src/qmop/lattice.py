"""The q-exponential lattice x(s) = (q^s - 1)/(q - 1) and the canonical basis.

Polynomials live in the canonical falling basis (s)^[k] = x(s) x(s-1) ...
x(s-k+1); grid functions are finite tables of exact values.  Divided
differences use the steps of this lattice: x(s+1) - x(s) = q^s and
x(s+1/2) - x(s-1/2) = p^(2s-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactnum import DomainError, QBase, Scalar


def x_of(base: QBase, s: int) -> Scalar:
    """Lattice point x(s) = (q^s - 1)/(q - 1)."""
    q = base.q
    return (q ** s - 1) / (q - 1)


def dx_half(base: QBase, s: int) -> Scalar:
    """Symmetric step x(s+1/2) - x(s-1/2) = p^(2s-1)."""
    return base.p ** (2 * s - 1)


def forward_step(base: QBase, s: int) -> Scalar:
    """x(s+1) - x(s) = q^s."""
    return base.q ** s


def canonical(base: QBase, s: int, k: int) -> Scalar:
    """Canonical basis value (s)^[k] = x(s) x(s-1) ... x(s-k+1); k = 0 gives 1."""
    if k < 0:
        raise DomainError("canonical basis needs k >= 0")
    out = base.one()
    for j in range(k):
        out = out * x_of(base, s - j)
    return out


@dataclass(frozen=True)
class CanonicalPoly:
    """A polynomial in x(s) stored as coefficients against (s)^[k]."""

    base: QBase
    coeffs: tuple

    @staticmethod
    def from_coeffs(base: QBase, coeffs: Sequence) -> "CanonicalPoly":
        return CanonicalPoly(base, tuple(base.scalar(c) if isinstance(c, int) else c for c in coeffs))

    @property
    def degree(self) -> int:
        """Index of the highest nonzero coefficient; -1 for the zero polynomial."""
        for k in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[k] != 0:
                return k
        return -1

    @property
    def leading(self) -> Scalar:
        d = self.degree
        return self.base.zero() if d < 0 else self.coeffs[d]

    def is_monic(self) -> bool:
        return self.leading == 1

    def monic(self) -> "CanonicalPoly":
        lead = self.leading
        if lead == 0:
            raise DomainError("cannot normalize the zero polynomial")
        return CanonicalPoly(self.base, tuple(c / lead for c in self.coeffs))

    def __call__(self, s: int) -> Scalar:
        return eval_poly(self, s)

    def scaled(self, factor) -> "CanonicalPoly":
        return CanonicalPoly(self.base, tuple(c * factor for c in self.coeffs))

    def plus(self, other: "CanonicalPoly") -> "CanonicalPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return CanonicalPoly(self.base, tuple(out))

    def eq_poly(self, other: "CanonicalPoly") -> bool:
        """Coefficient-wise equality ignoring trailing zeros."""
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        for k in range(n):
            ca = a[k] if k < len(a) else 0
            cb = b[k] if k < len(b) else 0
            if ca != cb:
                return False
        return True


def eval_poly(poly: CanonicalPoly, s: int) -> Scalar:
    """Evaluate at integer s, valid anywhere (also outside any grid)."""
    base = poly.base
    out = base.zero()
    fall = base.one()
    for k, c in enumerate(poly.coeffs):
        out = out + c * fall
        fall = fall * x_of(base, s - k)
    return out


def interpolate(base: QBase, values: Sequence) -> CanonicalPoly:
    """The unique degree <= d polynomial taking the given values at s = 0..d.

    The collocation matrix canonical(s, k) is lower triangular with nonzero
    diagonal (k)^[k], so forward substitution inverts it exactly.
    """
    values = [base.scalar(v) if isinstance(v, int) else v for v in values]
    coeffs = []
    for s, target in enumerate(values):
        acc = target
        fall = base.one()
        for k in range(s):
            acc = acc - coeffs[k] * fall
            fall = fall * x_of(base, s - k)
        # fall is now canonical(s, s)
        coeffs.append(acc / fall if s > 0 else acc)
    return CanonicalPoly(base, tuple(coeffs))


@dataclass(frozen=True)
class GridFunction:
    """Exact values on an integer window [s_lo, s_hi]."""

    base: QBase
    s_lo: int
    values: tuple

    @property
    def s_hi(self) -> int:
        return self.s_lo + len(self.values) - 1

    def __call__(self, s: int) -> Scalar:
        if not self.s_lo <= s <= self.s_hi:
            raise DomainError(f"s = {s} outside grid [{self.s_lo}, {self.s_hi}]")
        return self.values[s - self.s_lo]

    @staticmethod
    def sample(base: QBase, s_lo: int, s_hi: int, fn) -> "GridFunction":
        return GridFunction(base, s_lo, tuple(fn(s) for s in range(s_lo, s_hi + 1)))

    @staticmethod
    def from_poly(poly: CanonicalPoly, s_lo: int, s_hi: int) -> "GridFunction":
        return GridFunction.sample(poly.base, s_lo, s_hi, lambda s: eval_poly(poly, s))


def delta_div(f: GridFunction, s: int) -> Scalar:
    """Forward divided difference (f(s+1) - f(s)) / (x(s+1) - x(s))."""
    return (f(s + 1) - f(s)) / forward_step(f.base, s)


def nabla_div(f: GridFunction, s: int) -> Scalar:
    """Backward divided difference (f(s) - f(s-1)) / (x(s) - x(s-1))."""
    return (f(s) - f(s - 1)) / forward_step(f.base, s - 1)


def poly_delta_div(poly: CanonicalPoly) -> CanonicalPoly:
    """Forward divided difference of a polynomial, again a polynomial.

    Degree drops by one; the monic degree-n basis element maps to
    p^(1-n) [n] (s)^[n-1].
    """
    base = poly.base
    d = max(poly.degree, 0)
    vals = [(eval_poly(poly, s + 1) - eval_poly(poly, s)) / forward_step(base, s) for s in range(d)]
    if not vals:
        vals = [base.zero()]
    out = interpolate(base, vals)
    for s in (d, d + 1):
        direct = (eval_poly(poly, s + 1) - eval_poly(poly, s)) / forward_step(base, s)
        if eval_poly(out, s) != direct:
            raise DomainError("divided difference produced a non-polynomial result")
    return out


def canonical_delta_relation_check(base: QBase, k: int, s: int):
    """Both sides of (s)^[k] = p^(k-2) / [k+1] * nabla (s+1)^[k+1] / nabla x(s).

    Test oracle only; the identity underlies rewriting orthogonality sums
    through summation by parts.
    """
    from .exactnum import ppow, qbracket

    lhs = canonical(base, s, k)
    top = canonical(base, s + 1, k + 1) - canonical(base, s, k + 1)
    rhs = ppow(base, k - 2) / qbracket(base, k + 1) * top / forward_step(base, s - 1)
    return lhs, rhs
