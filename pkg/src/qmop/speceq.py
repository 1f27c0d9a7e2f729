"""The xi-coefficient system, determinant lemma, and high-order difference equations.

Everything here is verified in exact arithmetic.  Several printed source
formulas carry convention-mirror q-power typos on this lattice; the
implemented forms below are the ones that hold identically, and each
verification report records the printed reading's residual where the two
differ.  The measured corrections, in terms of d = |n|:

  * raising constant: -q^((d-N-alpha0)/2) [d+alpha_i+alpha0], a factor q^d
    above the printed exponent;
  * lowering coefficients: the solution of the printed moment system times
    q^(1-d) decomposes the divided forward difference exactly;
  * the order-(r+1) equation holds as the consistency determinant of the
    lowering decomposition with the per-measure raising recurrences; the
    plain product of the r raising operators does not commute, so the
    printed operator form is valid only at r = 1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import linalg
from .constructor import MultiIndex, build_by_moments, instance_dict
from .exactnum import DomainError, QBase, Scalar, ppow, qbracket
from .lattice import CanonicalPoly, eval_poly, forward_step, interpolate
from .measures import ParamSet, require_admissible
from .operators import apply_op, raising_a, raising_b, raising_op
from .report import VerificationReport, scalar_str


class DegenerateIndexError(DomainError):
    """A bracket in the reciprocal matrix vanishes."""


# ---------------------------------------------------------------------------
# reciprocal-bracket matrix and its determinant


def build_A(base: QBase, n, alphas) -> list:
    """Matrix a_{k,l} = 1 / [n_k + alpha_k - alpha_l]."""
    n = tuple(n)
    r = len(n)
    out = []
    for k in range(r):
        row = []
        for l in range(r):
            arg = n[k] + alphas[k] - alphas[l]
            val = qbracket(base, arg)
            if val == 0:
                raise DegenerateIndexError(
                    f"degenerate index: [n_{k + 1} + alpha_{k + 1} - alpha_{l + 1}] = [{arg}] = 0"
                )
            row.append(1 / val)
        out.append(row)
    return out


def det_bruteforce(base: QBase, n, alphas) -> Scalar:
    return linalg.determinant(build_A(base, n, alphas))


def det_closed(base: QBase, n, alphas) -> Scalar:
    """Closed determinant with the product over ordered pairs k < l.

    prod_{k<l} [alpha_k - alpha_l][n_l - n_k + alpha_l - alpha_k]
    / prod_{k,l} [n_l + alpha_l - alpha_k].
    """
    n = tuple(n)
    r = len(n)
    num = base.one()
    for k in range(r):
        for l in range(k + 1, r):
            num = num * qbracket(base, alphas[k] - alphas[l])
            num = num * qbracket(base, n[l] - n[k] + alphas[l] - alphas[k])
    den = base.one()
    for k in range(r):
        for l in range(r):
            val = qbracket(base, n[l] + alphas[l] - alphas[k])
            if val == 0:
                raise DegenerateIndexError(f"degenerate index in determinant denominator")
            den = den * val
    return num / den


# ---------------------------------------------------------------------------
# xi system


def xi_solve(base: QBase, params: ParamSet, n) -> list:
    """Exact solution of S xi = b with s_{k,l} = [d+alpha0+alpha_l+1]/[n_k+alpha_k-alpha_l]
    and b_k = p^(d-1) [n_k+alpha_k+alpha0+1], restricted to rows/columns with n_k >= 1.

    Components with n_l = 0 are zero.  This normalization satisfies the sum
    rule sum xi_l = p^(d-1) [d] and matches the r = 2 closed forms; the
    lowering decomposition holds after the q^(1-d) rescale (``xi_lowering``).
    """
    n = MultiIndex(tuple(n))
    d = n.total
    active = [k for k in range(params.r) if n[k] >= 1]
    out = [base.zero()] * params.r
    if not active:
        return out
    S = []
    for k in active:
        row = []
        for l in active:
            arg = n[k] + params.alphas[k] - params.alphas[l]
            br = qbracket(base, arg)
            if br == 0:
                raise DegenerateIndexError(f"degenerate index: [{arg}] = 0")
            row.append(qbracket(base, d + params.alpha0 + params.alphas[l] + 1) / br)
        S.append(row)
    b = [ppow(base, d - 1) * qbracket(base, n[k] + params.alphas[k] + params.alpha0 + 1) for k in active]
    try:
        sol = linalg.solve(S, b)
    except linalg.SingularSystemError as exc:
        raise DegenerateIndexError(f"singular xi system: {exc}") from exc
    for pos, k in enumerate(active):
        out[k] = sol[pos]
    return out


def xi_lowering(base: QBase, params: ParamSet, n) -> list:
    """The coefficients that decompose the divided forward difference exactly."""
    d = MultiIndex(tuple(n)).total
    scale = base.q ** (1 - d) if d >= 1 else base.one()
    return [x * scale for x in xi_solve(base, params, n)]


def xi_closed_r2(base: QBase, n, alphas) -> list:
    """Closed r = 2 values: xi_1 = p^(d-1) [n1][n2+a2-a1]/[a2-a1], symmetrically xi_2."""
    if len(n) != 2:
        raise DomainError("closed xi form is specific to r = 2")
    if alphas[0] == alphas[1]:
        raise DegenerateIndexError("alpha_1 = alpha_2 makes the closed xi form degenerate")
    n1, n2 = n
    d = n1 + n2
    xi1 = ppow(base, d - 1) * qbracket(base, n1) * qbracket(base, n2 + alphas[1] - alphas[0]) / qbracket(
        base, alphas[1] - alphas[0]
    )
    xi2 = ppow(base, d - 1) * qbracket(base, n2) * qbracket(base, n1 + alphas[0] - alphas[1]) / qbracket(
        base, alphas[0] - alphas[1]
    )
    return [xi1, xi2]


def xi_sum_expected(base: QBase, d: int) -> Scalar:
    """p^(d-1) [d]: the sum rule for the solved (unrescaled) coefficients."""
    return ppow(base, d - 1) * qbracket(base, d)


def raising_constant_true(base: QBase, N: int, alpha0: int, alpha_i: int, d: int) -> Scalar:
    """-p^(d-N-alpha0) [d+alpha_i+alpha0]: the measured raising constant."""
    return -ppow(base, d - N - alpha0) * qbracket(base, d + alpha_i + alpha0)


def _shifted_down_params(params: ParamSet, l: int) -> ParamSet:
    alphas = list(params.alphas)
    alphas[l] += 1
    return ParamSet(params.N - 1, params.alpha0 + 1, tuple(alphas))


def _delta_div_poly(base: QBase, poly: CanonicalPoly) -> CanonicalPoly:
    d = max(poly.degree, 1)
    vals = [(eval_poly(poly, s + 1) - eval_poly(poly, s)) / forward_step(base, s) for s in range(d)]
    return interpolate(base, vals)


def verify_lowering_decomposition(base: QBase, params: ParamSet, n) -> VerificationReport:
    """Delta P / Delta x == sum_l xi_lowering_l * P(n - e_l; alphas + e_l, alpha0 + 1, N - 1).

    Terms with n_l = 0 are excluded.  Also records that the same holds for
    the unrescaled solution only after multiplying by q^(d-1).
    """
    t0 = time.perf_counter()
    n = MultiIndex(tuple(n))
    require_admissible(params)
    d = n.total
    P = build_by_moments(base, params, n)
    lhs = _delta_div_poly(base, P.poly)

    xi_low = xi_lowering(base, params, n)
    acc = CanonicalPoly(base, (base.zero(),))
    for l in range(params.r):
        if n[l] == 0:
            continue
        down = _shifted_down_params(params, l)
        require_admissible(down)
        n_down = list(n)
        n_down[l] -= 1
        term = build_by_moments(base, down, tuple(n_down))
        acc = acc.plus(term.poly.scaled(xi_low[l]))
    equal = lhs.eq_poly(acc)
    diff = lhs.plus(acc.scaled(-1))
    return VerificationReport(
        suite="lowering-decomposition",
        instance=instance_dict(base, params, n),
        passed=equal,
        residuals={
            "exact_zero_count": sum(1 for c in diff.coeffs if c == 0),
            "nonzero_count": sum(1 for c in diff.coeffs if c != 0),
        },
        details={
            "xi_lowering": [scalar_str(x) for x in xi_low],
            "xi_solved": [scalar_str(x) for x in xi_solve(base, params, n)],
            "rescale": f"q^(1-{d})",
        },
        elapsed_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# the order-(r_active + 1) difference equation


def high_order_residuals(base: QBase, params: ParamSet, n) -> dict:
    """Pointwise residuals of the high-order equation as consistency determinants.

    For each window top t, the lowering decomposition constrains the r
    component polynomials at t, t-1, ..., t-r_active while each raising
    recurrence propagates a component downward one step.  Eliminating the
    component values leaves one scalar relation on the window values of P;
    its violation is the determinant of the (r_active+1) square system.  The
    polynomial P solves the equation iff every determinant vanishes.
    """
    n = MultiIndex(tuple(n))
    require_admissible(params)
    d = n.total
    P = build_by_moments(base, params, n)
    return high_order_residuals_for(base, params, n, lambda s: eval_poly(P.poly, s))


def high_order_residuals_for(base: QBase, params: ParamSet, n, y: Callable[[int], Scalar]) -> dict:
    n = MultiIndex(tuple(n))
    d = n.total
    active = [l for l in range(params.r) if n[l] >= 1]
    ra = len(active)
    out = {"order": ra + 1, "windows": {}, "degenerate_minor": 0}
    if ra == 0:
        return out
    Afn = [raising_a(base, params.alphas[l] + 1, params.alpha0 + 1, params.N - 1) for l in range(params.r)]
    Bfn = [raising_b(base, params.alphas[l] + 1, params.alpha0 + 1, params.N - 1) for l in range(params.r)]
    xi_low = xi_lowering(base, params, n)
    cval = [raising_constant_true(base, params.N - 1, params.alpha0 + 1, params.alphas[l] + 1, d - 1) for l in range(params.r)]
    u = lambda t: (y(t + 1) - y(t)) / forward_step(base, t)

    # the elimination minor degenerates at top = N (the commutator weight
    # x(N) - x(s) vanishes there), so windows stop one point short
    for top in range(ra, params.N):
        alpha = {l: base.one() for l in active}
        beta = {l: base.zero() for l in active}
        rows = []
        for k in range(ra + 1):
            rows.append([alpha[l] for l in active] + [u(top - k) + sum(beta[l] for l in active)])
            if k == ra:
                break
            t = top - k
            for l in active:
                a_here = Afn[l](t)
                if a_here == 0:
                    rows = None
                    break
                grow = (a_here + Bfn[l](t)) / a_here
                beta[l] = (beta[l] * (a_here + Bfn[l](t)) + xi_low[l] * cval[l] * y(t)) / a_here
                alpha[l] = alpha[l] * grow
            if rows is None:
                break
        if rows is None:
            continue
        minor = linalg.determinant([row[:ra] for row in rows[:ra]])
        if minor == 0:
            out["degenerate_minor"] += 1
        out["windows"][top] = linalg.determinant(rows)
    return out


def literal_product_reading_residual(base: QBase, params: ParamSet, n) -> dict:
    """Residual of the printed operator-product form, recorded for reference.

    LHS: the r raising operators at (alpha_i+1, alpha0+1, N-1) composed onto
    Delta P / Delta x; RHS: -q^(-(N+d+alpha0-1)/2) sum_i xi_i [d+alpha0+alpha_i+1]
    times the complementary product applied to P.  The operators do not
    commute, so this form fails for r >= 2; at r = 1 it is exact.
    """
    n = MultiIndex(tuple(n))
    d = n.total
    P = build_by_moments(base, params, n)
    ops = [raising_op(base, params.alphas[i] + 1, params.alpha0 + 1, params.N - 1) for i in range(params.r)]
    cur = _delta_div_poly(base, P.poly)
    for i in range(params.r - 1, -1, -1):
        cur = apply_op(ops[i], cur)
    xiv = xi_solve(base, params, n)
    glob = -ppow(base, -(params.N + d + params.alpha0 - 1))
    acc = CanonicalPoly(base, (base.zero(),))
    for i in range(params.r):
        if xiv[i] == 0:
            continue
        term = P.poly
        for j in range(params.r - 1, -1, -1):
            if j == i:
                continue
            term = apply_op(ops[j], term)
        acc = acc.plus(term.scaled(glob * xiv[i] * qbracket(base, d + params.alpha0 + params.alphas[i] + 1)))
    diff = cur.plus(acc.scaled(-1))
    return {
        "zero": all(c == 0 for c in diff.coeffs),
        "nonzero_coeffs": sum(1 for c in diff.coeffs if c != 0),
    }


def verify_high_order(base: QBase, params: ParamSet, n, record_literal: bool = True) -> VerificationReport:
    """The (r_active+1)-order equation has P as an exact solution.

    Passes iff every window determinant is exactly zero and no structural
    minor degenerates.  The printed one-product-per-term reading is recorded
    in the details when requested (it fails for r >= 2).
    """
    t0 = time.perf_counter()
    n = MultiIndex(tuple(n))
    res = high_order_residuals(base, params, n)
    values = list(res["windows"].values())
    nonzero = sum(1 for v in values if v != 0)
    if res["order"] == 1:
        # no active orthogonality count: both sides vanish identically
        passed = True
    else:
        passed = bool(values) and nonzero == 0 and res["degenerate_minor"] == 0
    details = {"order": res["order"]}
    if record_literal and n.total >= 1:
        details["printed_product_reading"] = literal_product_reading_residual(base, params, n)
    return VerificationReport(
        suite="high-order-equation",
        instance=instance_dict(base, params, n),
        passed=passed,
        residuals={
            "windows": len(values),
            "exact_zero_count": len(values) - nonzero,
            "nonzero_count": nonzero,
        },
        details=details,
        elapsed_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# the r = 2 third-order equation in five-coefficient form


@dataclass(frozen=True)
class ThirdOrderCoeffs:
    """Coefficient functions of a4 D(grad^2) + a3 D(grad) + a2 D + a1 grad + a0."""

    a4: Callable[[int], Scalar]
    a3: Callable[[int], Scalar]
    a2: Callable[[int], Scalar]
    a1: Callable[[int], Scalar]
    a0: Callable[[int], Scalar]

    def as_row(self, s: int) -> list:
        return [self.a4(s), self.a3(s), self.a2(s), self.a1(s), self.a0(s)]


def third_order_coeffs(base: QBase, params: ParamSet, n) -> ThirdOrderCoeffs:
    """Verified third-order coefficients for r = 2, built from the raising
    coefficient pairs at the shifted stage and the lowering xi.

    Derived by eliminating the two component polynomials from the lowering
    decomposition and the raising recurrences; the equation annihilates the
    polynomial at every interior point.  The printed display differs (see
    ``third_order_printed_coeffs``) and does not annihilate it.
    """
    if params.r != 2:
        raise DomainError("third-order coefficients require exactly two measures")
    n = MultiIndex(tuple(n))
    d = n.total
    q = base.q
    # eliminate the first component; swap labels when it is absent
    swap = n[0] == 0 and n[1] > 0
    i1, i2 = (1, 0) if swap else (0, 1)
    A1 = raising_a(base, params.alphas[i1] + 1, params.alpha0 + 1, params.N - 1)
    B1 = raising_b(base, params.alphas[i1] + 1, params.alpha0 + 1, params.N - 1)
    A2 = raising_a(base, params.alphas[i2] + 1, params.alpha0 + 1, params.N - 1)
    B2 = raising_b(base, params.alphas[i2] + 1, params.alpha0 + 1, params.N - 1)
    xi = xi_lowering(base, params, n)
    xi1, xi2 = xi[i1], xi[i2]
    c1 = raising_constant_true(base, params.N - 1, params.alpha0 + 1, params.alphas[i1] + 1, d - 1)
    c2 = raising_constant_true(base, params.N - 1, params.alpha0 + 1, params.alphas[i2] + 1, d - 1)

    Dst = lambda t: A2(t) * B1(t) - A1(t) * B2(t)
    mix = lambda t: A1(t) * xi2 * c2 + A2(t) * xi1 * c1

    def a4(s):
        return Dst(s) * A1(s - 1) * A2(s - 1) * q ** (2 * s - 1)

    def a3(s):
        return -Dst(s) * A1(s - 1) * A2(s - 1) * q ** (s - 1) + Dst(s - 1) * (A1(s) + B1(s)) * A2(s) * q ** s

    def a2(s):
        return Dst(s - 1) * (A1(s) + B1(s)) * B2(s)

    def a1(s):
        return -Dst(s) * (A1(s - 1) * B2(s - 1) + forward_step(base, s - 1) * mix(s - 1))

    def a0(s):
        return Dst(s) * mix(s - 1) - Dst(s - 1) * (xi1 * c1 * (A2(s) + B2(s)) + (A1(s) + B1(s)) * xi2 * c2)

    return ThirdOrderCoeffs(a4, a3, a2, a1, a0)


def third_order_printed_coeffs(base: QBase, params: ParamSet, n) -> ThirdOrderCoeffs:
    """The five coefficient functions exactly as displayed in the source.

    Kept as a reference reading; its residual on the polynomial is nonzero
    (recorded as an erratum by the verifier).
    """
    if params.r != 2:
        raise DomainError("third-order coefficients require exactly two measures")
    n = MultiIndex(tuple(n))
    d = n.total
    q = base.q
    N, a0p = params.N, params.alpha0
    A1 = raising_a(base, params.alphas[0] + 1, a0p + 1, N - 1)
    B1 = raising_b(base, params.alphas[0] + 1, a0p + 1, N - 1)
    A2 = raising_a(base, params.alphas[1] + 1, a0p + 1, N - 1)
    B2 = raising_b(base, params.alphas[1] + 1, a0p + 1, N - 1)
    try:
        xi1, xi2 = xi_closed_r2(base, n, params.alphas)
    except DegenerateIndexError:
        xi1 = xi2 = base.zero()
    k1 = qbracket(base, d + params.alphas[0] + a0p + 1)
    k2 = qbracket(base, d + params.alphas[1] + a0p + 1)

    a4 = lambda s: q ** (2 * s - 3) * A1(s) * A2(s - 1)
    a3 = lambda s: A1(s) * (B2(s - 1) * q ** (s - 1) + (A2(s) * q ** (s - 1) - A2(s - 1) * q ** (s - 2))) + q ** (
        s - 1
    ) * B1(s) * A2(s)
    a2 = lambda s: B1(s) * B2(s) + A1(s) * (B2(s) - B2(s - 1))
    a1 = lambda s: ppow(base, 2 * s - (N + d + a0p + 3)) * (xi1 * k1 * A2(s) + xi2 * k2 * A1(s))
    a0 = lambda s: ppow(base, -(N + d + a0p + 1)) * (xi1 * k1 * B2(s) + xi2 * k2 * B1(s))
    return ThirdOrderCoeffs(a4, a3, a2, a1, a0)


def third_order_residual(base: QBase, coeffs: ThirdOrderCoeffs, y: Callable[[int], Scalar], s: int) -> Scalar:
    """a4 D(grad^2)y + a3 D(grad)y + a2 Dy + a1 grad y + a0 y at point s.

    D and grad are the divided forward/backward differences of the lattice.
    """
    q = base.q
    grad = lambda t: (y(t) - y(t - 1)) / q ** (t - 1)
    grad2 = lambda t: (grad(t) - grad(t - 1)) / q ** (t - 1)
    d_grad2 = (grad2(s + 1) - grad2(s)) / q ** s
    d_grad = (grad(s + 1) - grad(s)) / q ** s
    d_y = (y(s + 1) - y(s)) / q ** s
    return (
        coeffs.a4(s) * d_grad2
        + coeffs.a3(s) * d_grad
        + coeffs.a2(s) * d_y
        + coeffs.a1(s) * grad(s)
        + coeffs.a0(s) * y(s)
    )


def verify_third_order(base: QBase, params: ParamSet, n) -> VerificationReport:
    """The verified five-coefficient equation vanishes at every s in [1, N-1];
    the printed display's residual is recorded alongside."""
    t0 = time.perf_counter()
    n = MultiIndex(tuple(n))
    require_admissible(params)
    P = build_by_moments(base, params, n)
    y = lambda s: eval_poly(P.poly, s)
    co = third_order_coeffs(base, params, n)
    printed = third_order_printed_coeffs(base, params, n)
    nonzero = 0
    printed_nonzero = 0
    for s in range(1, params.N):
        if third_order_residual(base, co, y, s) != 0:
            nonzero += 1
        if third_order_residual(base, printed, y, s) != 0:
            printed_nonzero += 1
    return VerificationReport(
        suite="third-order",
        instance=instance_dict(base, params, n),
        passed=nonzero == 0,
        residuals={"points": params.N - 1, "nonzero_count": nonzero},
        details={"printed_display_nonzero_points": printed_nonzero},
        elapsed_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# q = 1 (multiple Hahn) third-order equation, exact rationals


def hahn_third_order_coeffs(N: int, alpha0: int, alphas, n) -> ThirdOrderCoeffs:
    """Corrected q = 1 third-order coefficients as exact polynomials in s.

    The q -> 1 specialization of ``third_order_coeffs``: the raising pair
    becomes A(s) = s (N + alpha0 + 1 - s), B_i(s) = (alpha_i + 1) N -
    (alpha_i + alpha0 + 2) s, and the stencil reduces to plain forward and
    backward differences on the linear lattice.
    """
    if len(alphas) != 2 or len(n) != 2:
        raise DomainError("the third-order form requires exactly two measures")
    swap = n[0] == 0 and n[1] > 0
    i1, i2 = (1, 0) if swap else (0, 1)
    a1p, a2p = alphas[i1], alphas[i2]
    n1, n2 = n[i1], n[i2]
    d = n1 + n2
    A = lambda s: Fraction(s * (N + alpha0 + 1 - s))
    B1 = lambda s: Fraction((a1p + 1) * N - (a1p + alpha0 + 2) * s)
    B2 = lambda s: Fraction((a2p + 1) * N - (a2p + alpha0 + 2) * s)
    if a1p != a2p and d >= 1:
        xi1 = Fraction(n1 * (n2 + a2p - a1p), a2p - a1p) if n1 else Fraction(0)
        xi2 = Fraction(n2 * (n1 + a1p - a2p), a1p - a2p) if n2 else Fraction(0)
    else:
        xi1 = xi2 = Fraction(0)
    c1 = -Fraction(d + a1p + alpha0 + 1)
    c2 = -Fraction(d + a2p + alpha0 + 1)
    Dst = lambda t: A(t) * (B1(t) - B2(t))
    mix = lambda t: A(t) * (xi2 * c2 + xi1 * c1)

    a4 = lambda s: Dst(s) * A(s - 1) ** 2
    a3 = lambda s: -Dst(s) * A(s - 1) ** 2 + Dst(s - 1) * (A(s) + B1(s)) * A(s)
    a2 = lambda s: Dst(s - 1) * (A(s) + B1(s)) * B2(s)
    a1 = lambda s: -Dst(s) * (A(s - 1) * B2(s - 1) + mix(s - 1))
    a0 = lambda s: Dst(s) * mix(s - 1) - Dst(s - 1) * (xi1 * c1 * (A(s) + B2(s)) + (A(s) + B1(s)) * xi2 * c2)
    return ThirdOrderCoeffs(a4, a3, a2, a1, a0)


def hahn_printed_third_order_coeffs(N: int, alpha0: int, alphas, n) -> ThirdOrderCoeffs:
    """The five q = 1 polynomials exactly as displayed in the source Remark.

    Recorded reading: does not annihilate the multiple Hahn polynomials
    (documented erratum); kept so reports can show its residual.
    """
    a1p, a2p = alphas
    n1, n2 = n
    a4 = lambda s: Fraction(s * (s - 1) * (alpha0 + N - s + 1) * (alpha0 + N - s + 2))
    a3 = lambda s: Fraction(
        s * (alpha0 + N - s + 1) * (2 * alpha0 + a2p + 4 + (a1p + a2p + 3) * N - (2 * alpha0 + a1p + a2p + 6) * s)
    )
    a2 = lambda s: Fraction(
        ((a1p + 1) * N - (alpha0 + a1p + 2) * s) * ((a2p + 1) * N - (alpha0 + a2p + 2) * s)
        - (alpha0 + a2p + 2) * (alpha0 + N - s + 1) * s
    )
    a1 = lambda s: Fraction(
        (n1 * (alpha0 + a1p + N + 1) + (alpha0 + a2p + N + 1) * n2 - n1 * n2) * (alpha0 + N - s + 1) * s
    )
    a0 = lambda s: Fraction(
        N * ((a2p + 1) * (alpha0 + a1p + N + 1) * n1 + (a1p + 1) * (alpha0 + a2p + N + 1) * n2 + (alpha0 + N) * n1 * n2)
        - ((alpha0 + a2p + 2) * (alpha0 + a1p + N + 1) * n1 + (alpha0 + a1p + 2) * (alpha0 + a2p + N + 1) * n2 + (N - 1) * n1 * n2) * s
    )
    return ThirdOrderCoeffs(a4, a3, a2, a1, a0)


def hahn_third_order_residual(coeffs: ThirdOrderCoeffs, y: Callable[[int], Fraction], s: int) -> Fraction:
    """Plain-difference stencil on the linear lattice."""
    grad = lambda t: y(t) - y(t - 1)
    grad2 = lambda t: grad(t) - grad(t - 1)
    return (
        coeffs.a4(s) * (grad2(s + 1) - grad2(s))
        + coeffs.a3(s) * (grad(s + 1) - grad(s))
        + coeffs.a2(s) * (y(s + 1) - y(s))
        + coeffs.a1(s) * grad(s)
        + coeffs.a0(s) * y(s)
    )


# ---------------------------------------------------------------------------
# r = 1 classical second-order reduction


@dataclass(frozen=True)
class ClassicalCoeffs:
    """sigma D(grad y) + tau D y + lambda_n y = 0 data for one classical family."""

    sigma: Callable[[int], Scalar]
    tau: Callable[[int], Scalar]
    lam: Scalar


def classical_coeffs(base: QBase, alpha: int, beta: int, N: int, n: int) -> ClassicalCoeffs:
    """Verified second-order coefficients for the classical weight with
    beta on the s side and alpha on the N - s side.

    sigma(s) = q^s A(s) = p^-(N+beta+2 alpha+1) x(s) (x(N+alpha+1) - x(s)),
    tau(s) = [N][beta+1] - x(s) [alpha+beta+2] p^-(alpha+N),
    lambda_n = p^-(N+alpha) [n][n+alpha+beta+1].

    These differ from the printed classical display by convention-mirror
    q-powers and a root offset; the printed triple is kept in
    ``classical_printed_coeffs`` for reference.
    """
    Afn = raising_a(base, beta + 1, alpha + 1, N - 1)
    Bfn = raising_b(base, beta + 1, alpha + 1, N - 1)
    sigma = lambda s: forward_step(base, s) * Afn(s)
    lam = ppow(base, -(N + alpha)) * qbracket(base, n) * qbracket(base, n + alpha + beta + 1)
    return ClassicalCoeffs(sigma, Bfn, lam)


def classical_printed_coeffs(base: QBase, alpha: int, beta: int, N: int, n: int) -> ClassicalCoeffs:
    from .lattice import x_of

    sigma = lambda s: -ppow(base, -(N + alpha)) * x_of(base, s) ** 2 + ppow(base, -1) * qbracket(
        base, N + alpha
    ) * x_of(base, s)
    tau = lambda s: -ppow(base, beta + 2 - N) * qbracket(base, alpha + beta + 2) * x_of(base, s) + base.q ** (
        alpha + beta + 1
    ) * qbracket(base, beta + 1) * qbracket(base, N - 1)
    lam = ppow(base, beta + 2 - N) * qbracket(base, n) * qbracket(base, n + alpha + beta + 1)
    return ClassicalCoeffs(sigma, tau, lam)


def classical_residual(base: QBase, co: ClassicalCoeffs, y: Callable[[int], Scalar], s: int) -> Scalar:
    q = base.q
    grad = lambda t: (y(t) - y(t - 1)) / q ** (t - 1)
    d_grad = (grad(s + 1) - grad(s)) / q ** s
    d_y = (y(s + 1) - y(s)) / q ** s
    return co.sigma(s) * d_grad + co.tau(s) * d_y + co.lam * y(s)


def classical_reduction(base: QBase, alpha: int, beta: int, N: int, n: int) -> VerificationReport:
    """The classical polynomial solves the verified second-order equation at
    every interior point; the printed triple's residual is recorded."""
    t0 = time.perf_counter()
    params = ParamSet(N, alpha, (beta,))
    require_admissible(params)
    P = build_by_moments(base, params, (n,))
    y = lambda s: eval_poly(P.poly, s)
    co = classical_coeffs(base, alpha, beta, N, n)
    printed = classical_printed_coeffs(base, alpha, beta, N, n)
    nonzero = sum(1 for s in range(1, N) if classical_residual(base, co, y, s) != 0)
    printed_nonzero = sum(1 for s in range(1, N) if classical_residual(base, printed, y, s) != 0)
    return VerificationReport(
        suite="classical",
        instance={"p": scalar_str(base.p), "N": N, "alpha": alpha, "beta": beta, "n": n},
        passed=nonzero == 0,
        residuals={"points": N - 1, "nonzero_count": nonzero},
        details={"printed_display_nonzero_points": printed_nonzero},
        elapsed_s=time.perf_counter() - t0,
    )
