"""Exact multiple Hahn (q = 1) and multiple Jacobi polynomials, plus the two
limit studies: q -> 1 on a fixed support and N -> infinity onto [0, 1].

The Hahn and Jacobi builders are independent exact implementations (not
limit evaluations), so they can serve as oracles for the float studies.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import linalg
from .constructor import ConventionViolationError, MultiIndex, build_by_moments
from .exactnum import DomainError, float_base
from .lattice import eval_poly
from .measures import ParamSet, require_admissible

# ---------------------------------------------------------------------------
# dense power-basis polynomials over Fraction


def poly_eval(coeffs: Sequence[Fraction], x) -> Fraction:
    out = 0
    for c in reversed(list(coeffs)):
        out = out * x + c
    return out


def poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def poly_derivative(a):
    return [k * c for k, c in enumerate(a)][1:] or [Fraction(0)]


def poly_shift_pow(a, k):
    """Multiply by x^k."""
    return [Fraction(0)] * k + list(a)


def poly_div_xpow(a, k):
    """Exact division by x^k; the low coefficients must vanish."""
    if any(c != 0 for c in a[:k]):
        raise ConventionViolationError("polynomial is not divisible by the required power of x")
    return list(a[k:]) or [Fraction(0)]


def poly_div_one_minus_x(a, k):
    """Exact division by (1 - x)^k with zero remainder required."""
    cur = list(a)
    for _ in range(k):
        # synthetic division by (1 - x): process from the top degree down
        out = [Fraction(0)] * (len(cur) - 1)
        carry = Fraction(0)
        for i in range(len(cur) - 1, 0, -1):
            coef = cur[i] + carry
            out[i - 1] = -coef
            carry = coef
        if cur[0] + carry != 0:
            raise ConventionViolationError("polynomial is not divisible by (1 - x)")
        cur = out or [Fraction(0)]
    return cur


def poly_degree(a) -> int:
    for k in range(len(a) - 1, -1, -1):
        if a[k] != 0:
            return k
    return -1


# ---------------------------------------------------------------------------
# multiple Hahn polynomials on the linear lattice, exact


@dataclass(frozen=True)
class HahnMop:
    """Monic multiple Hahn polynomial, power-basis coefficients in s."""

    N: int
    alpha0: int
    alphas: tuple
    index: tuple
    coeffs: tuple

    def __call__(self, s) -> Fraction:
        return poly_eval(self.coeffs, Fraction(s))

    @property
    def degree(self) -> int:
        return poly_degree(self.coeffs)


def rising(x: int, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= x + j
    return out


def hahn_weight(N: int, alpha0: int, alpha_i: int, s: int) -> Fraction:
    """w_i(s) = (s+1)...(s+alpha_i) * (N-s+1)...(N-s+alpha0), positive on 0..N."""
    return rising(s + 1, alpha_i) * rising(N - s + 1, alpha0)


def hahn_build(N: int, alpha0: int, alphas, n) -> HahnMop:
    """Monic multiple Hahn polynomial via nested backward differences.

    The q = 1 analogue of the lattice Rodrigues construction: seed
    G(alpha0+N-s+1) / (G(s+1) G(N-d-s+1)) truncated to its support, per
    measure multiply by G(alpha_i+n_i+s+1), apply the plain backward
    difference n_i times, divide by G(alpha_i+s+1), and finally restore the
    outer factor G(s+1) G(N-s+1) / G(alpha0+N-s+1); then normalize monic.
    """
    n = MultiIndex(tuple(n))
    # the discrete alpha-gap condition is not required here: normality for a
    # specific index surfaces through the degree check below instead
    if N < 1 or alpha0 < 0 or any(a < 0 for a in alphas):
        raise DomainError("Hahn parameters must be nonnegative integers with N >= 1")
    d = n.total
    if d > N:
        raise DomainError(f"|n| = {d} exceeds N = {N}")
    if d == 0:
        return HahnMop(N, alpha0, tuple(alphas), tuple(n), (Fraction(1),))

    s_hi = min(d + 2, N)

    def fact(m: int) -> Fraction:
        return Fraction(math.factorial(m))

    def seed(s):
        if s < 0 or s > N - d:
            return Fraction(0)
        return fact(alpha0 + N - s) / (fact(s) * fact(N - d - s))

    values = {s: seed(s) for s in range(-d - 1, s_hi + 1)}
    for i in range(len(alphas), 0, -1):
        ai, ni = alphas[i - 1], n[i - 1]
        # multiply by G(alpha_i+n_i+s+1), difference, divide by G(alpha_i+s+1);
        # nonzero values only occur at s >= 0, where both gammas are finite
        for s in list(values):
            if values[s] != 0:
                values[s] = values[s] * fact(ai + ni + s)
        for _ in range(ni):
            lo = min(values) + 1
            values = {s: values[s] - values[s - 1] for s in range(lo, s_hi + 1)}
        for s in list(values):
            if values[s] != 0:
                values[s] = values[s] / fact(ai + s)
    grid = []
    for s in range(0, s_hi + 1):
        v = values[s]
        if v != 0:
            v = v * fact(s) * fact(N - s) / fact(alpha0 + N - s)
        grid.append(v)

    # Newton interpolation on the integer nodes 0..d, then monic normalization
    coeffs = _interp_power_basis(grid[: d + 1])
    if poly_degree(coeffs) != d:
        raise ConventionViolationError(f"nested differences gave degree {poly_degree(coeffs)}, expected {d}")
    for s in range(d + 1, s_hi + 1):
        if poly_eval(coeffs, Fraction(s)) != grid[s]:
            raise ConventionViolationError("nested differences are not a polynomial on the guard points")
    lead = coeffs[d]
    return HahnMop(N, alpha0, tuple(alphas), tuple(n), tuple(c / lead for c in coeffs))


def _interp_power_basis(values) -> list:
    """Power-basis interpolation through (s, values[s]) for s = 0..d."""
    d = len(values) - 1
    rows = [[Fraction(s) ** k for k in range(d + 1)] for s in range(d + 1)]
    return linalg.solve(rows, [Fraction(v) for v in values])


def hahn_orthogonality_residuals(H: HahnMop) -> list:
    """All sums over the support against s^k, k < n_i; zero for the true polynomial."""
    out = []
    for i, ai in enumerate(H.alphas):
        for k in range(H.index[i]):
            total = Fraction(0)
            for s in range(H.N + 1):
                total += H(s) * Fraction(s) ** k * hahn_weight(H.N, H.alpha0, ai, s)
            out.append(total)
    return out


def hahn_build_by_moments(N: int, alpha0: int, alphas, n) -> HahnMop:
    """Independent construction via the exact moment system (dual oracle)."""
    n = MultiIndex(tuple(n))
    d = n.total
    if d == 0:
        return HahnMop(N, alpha0, tuple(alphas), tuple(n), (Fraction(1),))
    rows, rhs = [], []
    for i, ai in enumerate(alphas):
        for k in range(n[i]):
            row = [Fraction(0)] * (d + 1)
            for s in range(N + 1):
                mass = hahn_weight(N, alpha0, ai, s) * Fraction(s) ** k
                for j in range(d + 1):
                    row[j] += mass * Fraction(s) ** j
            rows.append(row[:d])
            rhs.append(-row[d])
    coeffs = linalg.solve(rows, rhs) + [Fraction(1)]
    return HahnMop(N, alpha0, tuple(alphas), tuple(n), tuple(coeffs))


# ---------------------------------------------------------------------------
# multiple Jacobi polynomials on [0, 1], exact


@dataclass(frozen=True)
class JacobiMop:
    """Monic multiple Jacobi polynomial, power-basis coefficients in x."""

    alpha0: int
    alphas: tuple
    index: tuple
    coeffs: tuple

    def __call__(self, x) -> Fraction:
        return poly_eval(self.coeffs, x)

    @property
    def degree(self) -> int:
        return poly_degree(self.coeffs)


def jacobi_build(alpha0: int, alphas, n) -> JacobiMop:
    """Monic multiple Jacobi polynomial from the derivative representation.

    Start from (1-x)^(alpha0+d); for i = r..1 multiply by x^(alpha_i+n_i),
    differentiate n_i times, divide by x^(alpha_i) exactly; finally divide by
    (1-x)^alpha0 exactly and normalize monic.
    """
    n = MultiIndex(tuple(n))
    if alpha0 < 0 or any(a < 0 for a in alphas):
        raise DomainError("Jacobi parameters must be nonnegative integers")
    d = n.total
    one_minus_x = [Fraction(1), Fraction(-1)]
    cur = [Fraction(1)]
    for _ in range(alpha0 + d):
        cur = poly_mul(cur, one_minus_x)
    for i in range(len(alphas), 0, -1):
        ai, ni = alphas[i - 1], n[i - 1]
        cur = poly_shift_pow(cur, ai + ni)
        for _ in range(ni):
            cur = poly_derivative(cur)
        cur = poly_div_xpow(cur, ai)
    cur = poly_div_one_minus_x(cur, alpha0)
    if poly_degree(cur) != d:
        raise ConventionViolationError(f"derivative representation gave degree {poly_degree(cur)}, expected {d}")
    lead = cur[d]
    return JacobiMop(alpha0, tuple(alphas), tuple(n), tuple(c / lead for c in cur))


def beta_integral(a: int, b: int) -> Fraction:
    """int_0^1 x^a (1-x)^b dx = a! b! / (a+b+1)!."""
    return Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b + 1))


def jacobi_orthogonality_residuals(P: JacobiMop) -> list:
    """int_0^1 P(x) x^(alpha_i+k) (1-x)^alpha0 dx for all k < n_i, exactly."""
    out = []
    for i, ai in enumerate(P.alphas):
        for k in range(P.index[i]):
            total = Fraction(0)
            for j, c in enumerate(P.coeffs):
                if c != 0:
                    total += c * beta_integral(j + ai + k, P.alpha0)
            out.append(total)
    return out


def backward_expansion_check(n: int, values, s_index: int):
    """Both sides of the n-th backward difference expansion at values index s_index.

    Left: sum_k (-n)_k / k! * f(s-k) (equal to alternating binomial weights);
    right: n-fold plain backward difference.  Test oracle only.
    """
    lhs = Fraction(0)
    for k in range(n + 1):
        falling = Fraction(1)
        for j in range(k):
            falling *= Fraction(-n + j)
        lhs += falling / math.factorial(k) * values[s_index - k]
    work = list(values)
    for _ in range(n):
        work = [work[i] - work[i - 1] for i in range(1, len(work))]
        s_index -= 1
    return lhs, work[s_index]


# ---------------------------------------------------------------------------
# convergence studies


@dataclass
class ConvergenceTable:
    """Deviations of a limit transition along a sweep, with a log-log slope fit."""

    study: str
    parameter_name: str
    parameters: list
    deviations: list
    slope: float
    expected_slope: float
    tolerance: float
    precision_bits: int | None = None
    instance: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if all(v == 0 for v in self.deviations):
            return True  # exact agreement along the whole sweep
        return (
            abs(self.slope - self.expected_slope) <= self.tolerance
            and all(b < a for a, b in zip(self.deviations, self.deviations[1:]))
        )

    def to_dict(self) -> dict:
        return {
            "study": self.study,
            "parameter_name": self.parameter_name,
            "parameters": self.parameters,
            "deviations": self.deviations,
            "slope": self.slope,
            "expected_slope": self.expected_slope,
            "tolerance": self.tolerance,
            "precision_bits": self.precision_bits,
            "instance": self.instance,
            "pass": self.passed,
        }


def fit_slope(xs, ys, fallback: float = 0.0) -> float:
    """Least-squares slope of log y against log x; fallback on exact zeros."""
    if any(v == 0 for v in ys):
        return fallback
    return float(np.polyfit(np.log(np.asarray(xs, dtype=float)), np.log(np.asarray(ys, dtype=float)), 1)[0])


def q_to_one_study(params: ParamSet, n, eps_list, precision_bits: int = 256) -> ConvergenceTable:
    """Build the lattice polynomial at p = 1 + eps with the float backend and
    compare grid values against the exact Hahn polynomial.

    An ill-conditioned float solve doubles the working precision and retries
    (at most three times).
    """
    n = MultiIndex(tuple(n))
    require_admissible(params)
    H = hahn_build(params.N, params.alpha0, params.alphas, n)
    deviations = []
    for eps in eps_list:
        bits = precision_bits
        for attempt in range(4):
            try:
                with mpmath.workprec(bits):
                    base = float_base(mpmath.mpf(1) + mpmath.mpf(repr(eps)))
                    P = build_by_moments(base, params, n)
                    dev = max(
                        abs(eval_poly(P.poly, s) - mpmath.mpf(H(s).numerator) / H(s).denominator)
                        for s in range(params.N + 1)
                    )
                break
            except linalg.SingularSystemError:
                bits *= 2
                if attempt == 3:
                    raise
        deviations.append(float(dev))
    return ConvergenceTable(
        study="q-to-one",
        parameter_name="eps",
        parameters=[float(e) for e in eps_list],
        deviations=deviations,
        slope=fit_slope(eps_list, deviations, fallback=1.0),
        expected_slope=1.0,
        tolerance=0.2,
        precision_bits=precision_bits,
        instance={"N": params.N, "alpha0": params.alpha0, "alphas": list(params.alphas), "n": list(n)},
    )


def hahn_to_jacobi_study(alpha0: int, alphas, n, N_list) -> ConvergenceTable:
    """Deviation max_j |N^-d H(N x_j) - P(x_j)| at x_j = j/10, exact evaluation.

    Both polynomials are exact; only the final magnitudes become floats.  The
    deviation decays like 1/N.
    """
    n = MultiIndex(tuple(n))
    d = n.total
    jac = jacobi_build(alpha0, alphas, n)
    deviations = []
    for N in N_list:
        H = hahn_build(N, alpha0, alphas, n)
        worst = Fraction(0)
        for j in range(1, 10):
            xj = Fraction(j, 10)
            diff = H(N * xj) / Fraction(N) ** d - jac(xj)
            if abs(diff) > worst:
                worst = abs(diff)
        deviations.append(float(worst))
    return ConvergenceTable(
        study="hahn-to-jacobi",
        parameter_name="N",
        parameters=[int(N) for N in N_list],
        deviations=deviations,
        slope=fit_slope(N_list, deviations, fallback=-1.0),
        expected_slope=-1.0,
        tolerance=0.2,
        instance={"alpha0": alpha0, "alphas": list(alphas), "n": list(n)},
    )
