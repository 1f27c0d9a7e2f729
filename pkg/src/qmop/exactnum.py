"""Exact scalar arithmetic over the rationals with lattice base q = p**2.

Every half-integer power of q that shows up in the lattice formulas
(weights, raising constants, Rodrigues prefactors) is an integer power of
p, so carrying p instead of q keeps the whole exact pipeline inside the
rationals.  The same operations also run on arbitrary-precision binary
floats for the limit studies; the scalar type is decided by the base.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

Scalar = Union[Fraction, mpmath.mpf]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class QBase:
    """Scalar context: a positive p != 1 with q = p**2 cached.

    ``p`` is a Fraction in exact mode or an mpmath float for the limit
    studies.  p = 1 is rejected because the q-bracket denominator p - 1/p
    vanishes there.
    """

    p: Scalar

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError("p must be positive")
        if self.p == 1:
            raise DomainError("p = 1 is not a valid base (bracket denominator vanishes)")
        object.__setattr__(self, "_q", self.p * self.p)

    @property
    def q(self) -> Scalar:
        return self._q

    @property
    def exact(self) -> bool:
        return isinstance(self.p, Fraction)

    def scalar(self, value) -> Scalar:
        """Coerce an int or rational to this base's scalar type."""
        if self.exact:
            return Fraction(value)
        if isinstance(value, Fraction):
            return mpmath.mpf(value.numerator) / value.denominator
        return mpmath.mpf(value)

    def zero(self) -> Scalar:
        return self.scalar(0)

    def one(self) -> Scalar:
        return self.scalar(1)


def exact_base(p) -> QBase:
    """Exact base from anything Fraction() accepts ('3/2', 2, Fraction...)."""
    return QBase(Fraction(p))


def float_base(p) -> QBase:
    """Float base at the current mpmath working precision."""
    if isinstance(p, Fraction):
        return QBase(mpmath.mpf(p.numerator) / p.denominator)
    return QBase(mpmath.mpf(p))


def ppow(base: QBase, k: int) -> Scalar:
    """p**k, exact for integer k of either sign."""
    return base.p ** k


def qbracket(base: QBase, m: int) -> Scalar:
    """Symmetric q-bracket [m] = (p**m - p**-m) / (p - 1/p); [m] -> m as p -> 1."""
    p = base.p
    return (p ** m - p ** (-m)) / (p - 1 / p)


def qpoch(base: QBase, a: int, k: int) -> Scalar:
    """q-Pochhammer product [a][a+1]...[a+k-1] of symmetric brackets; k = 0 gives 1."""
    if k < 0:
        raise DomainError("qpoch needs k >= 0")
    out = base.one()
    for m in range(k):
        out = out * qbracket(base, a + m)
    return out


def tgamma_int(base: QBase, m: int) -> Scalar:
    """q-gamma at a positive integer via the recurrence G(x+1) = [x] G(x), G(1) = 1.

    Equals the bracket factorial [1][2]...[m-1].  The value is used only
    through ratios of integer arguments, where any global normalization
    cancels.
    """
    if m < 1:
        raise DomainError(f"tgamma_int needs a positive integer argument, got {m}")
    out = base.one()
    for j in range(1, m):
        out = out * qbracket(base, j)
    return out
