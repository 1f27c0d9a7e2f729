"""q-Hahn weights, discrete measures, admissibility, and modified moments.

The two-parameter weight v(s) pairs its first parameter with s (the factor
G(s + alpha + 1)) and its second with N - s (the factor G(N + beta - s + 1)).
All weights are normalized to v(0) = 1; the orthogonality conditions are
homogeneous, so the normalization never matters downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import DomainError, QBase, Scalar, ppow, qbracket, tgamma_int
from .lattice import CanonicalPoly, canonical, dx_half, eval_poly


@dataclass(frozen=True)
class ParamSet:
    """Parameters (N, alpha0, alphas) of an r-measure q-Hahn system."""

    N: int
    alpha0: int
    alphas: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))

    @property
    def r(self) -> int:
        return len(self.alphas)


class AdmissibilityError(DomainError):
    """The parameter set violates an admissibility rule."""


def admissibility_violation(params: ParamSet) -> str | None:
    """A human-readable description of the first violated rule, or None."""
    if params.N < 1:
        return f"N must be a positive integer, got {params.N}"
    if params.alpha0 < 0:
        return f"alpha0 must be a nonnegative integer, got {params.alpha0}"
    if params.r < 1:
        return "at least one measure parameter alpha_i is required"
    for i, a in enumerate(params.alphas, start=1):
        if a < 0:
            return f"alpha_{i} must be a nonnegative integer, got {a}"
    for i in range(params.r):
        for j in range(params.r):
            if i == j:
                continue
            gap = params.alphas[i] - params.alphas[j]
            if 0 <= gap <= params.N - 1:
                return (
                    f"alpha_{i + 1} - alpha_{j + 1} = {gap} lies in {{0..{params.N - 1}}}; "
                    "the measures do not form an AT system"
                )
    return None


def admissible(params: ParamSet) -> bool:
    return admissibility_violation(params) is None


def require_admissible(params: ParamSet) -> None:
    msg = admissibility_violation(params)
    if msg is not None:
        raise AdmissibilityError(msg)


def weight_value(base: QBase, alpha: int, beta: int, N: int, s: int) -> Scalar:
    """The weight v(s) with v(0) = 1, zero outside the support {0..N}.

    Built from the ratio v(s+1)/v(s) = p^(alpha+beta) [s+alpha+1][N-s] /
    ([s+1][N+beta-s]), which follows from the gamma-product form below.
    """
    if s < 0 or s > N:
        return base.zero()
    v = base.one()
    for t in range(s):
        v = v * weight_ratio(base, alpha, beta, N, t)
    return v


def weight_ratio(base: QBase, alpha: int, beta: int, N: int, s: int) -> Scalar:
    """v(s+1)/v(s) for 0 <= s <= N-1."""
    num = ppow(base, alpha + beta) * qbracket(base, s + alpha + 1) * qbracket(base, N - s)
    den = qbracket(base, s + 1) * qbracket(base, N + beta - s)
    return num / den


def weight_table(base: QBase, alpha: int, beta: int, N: int) -> list:
    """Values v(0..N) computed once through the ratio recurrence."""
    out = [base.one()]
    for s in range(N):
        out.append(out[-1] * weight_ratio(base, alpha, beta, N, s))
    return out


def weight_closed(base: QBase, alpha: int, beta: int, N: int, s: int) -> Scalar:
    """Gamma-product form of the same weight, unnormalized.

    p^((alpha+beta) s) G(s+alpha+1) G(N+beta-s+1) / (G(s+1) G(N+1-s)).
    Equals weight_value up to one s-independent constant; the tests check
    the constancy of the quotient.
    """
    if s < 0 or s > N:
        return base.zero()
    num = ppow(base, (alpha + beta) * s) * tgamma_int(base, s + alpha + 1) * tgamma_int(base, N + beta - s + 1)
    den = tgamma_int(base, s + 1) * tgamma_int(base, N + 1 - s)
    return num / den


@dataclass(frozen=True)
class DiscreteMeasure:
    """One discrete q-Hahn measure: mass v(s) * p^(2s-1) at each s in {0..N}."""

    base: QBase
    alpha: int
    beta: int
    N: int

    def weight(self, s: int) -> Scalar:
        return weight_value(self.base, self.alpha, self.beta, self.N, s)

    def mass(self, s: int) -> Scalar:
        return self.weight(s) * dx_half(self.base, s)

    def masses(self) -> list:
        table = weight_table(self.base, self.alpha, self.beta, self.N)
        return [w * dx_half(self.base, s) for s, w in enumerate(table)]


def measure(base: QBase, params: ParamSet, i: int) -> DiscreteMeasure:
    """The i-th measure (1-based) of the system: parameters (alpha_i, alpha0, N)."""
    if not 1 <= i <= params.r:
        raise DomainError(f"measure index {i} outside 1..{params.r}")
    return DiscreteMeasure(base, params.alphas[i - 1], params.alpha0, params.N)


def moment(base: QBase, params: ParamSet, i: int, k: int) -> Scalar:
    """Modified moment sum_s (s)^[k] v_i(s) p^(2s-1) over the support."""
    mu = measure(base, params, i)
    out = base.zero()
    for s, mass in enumerate(mu.masses()):
        out = out + canonical(base, s, k) * mass
    return out


def inner_sum(P: CanonicalPoly, params: ParamSet, i: int, k: int) -> Scalar:
    """Orthogonality sum sum_s P(s) (s)^[k] v_i(s) p^(2s-1).

    Vanishes for k <= n_i - 1 when P is the multiple orthogonal polynomial.
    """
    base = P.base
    mu = measure(base, params, i)
    out = base.zero()
    for s, mass in enumerate(mu.masses()):
        out = out + eval_poly(P, s) * canonical(base, s, k) * mass
    return out
