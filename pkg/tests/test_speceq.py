import random
from fractions import Fraction

import mpmath
import pytest

from qmop import speceq
from qmop.constructor import MultiIndex, build_by_moments
from qmop.exactnum import exact_base, float_base, ppow, qbracket
from qmop.lattice import CanonicalPoly, eval_poly
from qmop.measures import ParamSet
from qmop.limits import hahn_build

B2 = exact_base(2)
B32 = exact_base(Fraction(3, 2))
B12 = exact_base(Fraction(1, 2))

REF_PARAMS = ParamSet(8, 1, (0, 9))
REF_N = (2, 1)


# --------------------------------------------------------------------------
# determinant lemma


def test_build_A_examples():
    assert speceq.build_A(B2, (1,), (0,)) == [[1 / qbracket(B2, 1)]]
    A = speceq.build_A(B2, (1, 1), (0, 2))
    assert A[0][1] == 1 / qbracket(B2, -1) == -1
    assert A[1][0] == 1 / qbracket(B2, 3)
    with pytest.raises(speceq.DegenerateIndexError):
        speceq.build_A(B2, (2, 1), (0, 2))  # n_1 + a_1 - a_2 = 0


def test_det_r1():
    for b in (B2, B32):
        for n1 in (1, 2, 3):
            assert speceq.det_closed(b, (n1,), (0,)) == 1 / qbracket(b, n1)


def test_det_r2_worked_identity():
    # closed form [2]^2 / [3]; brute force 1 + 1/[3]; they agree because
    # [2]^2 = [3] + 1
    for b in (B2, B32, B12):
        closed = speceq.det_closed(b, (1, 1), (0, 2))
        assert closed == qbracket(b, 2) ** 2 / qbracket(b, 3)
        assert closed == speceq.det_bruteforce(b, (1, 1), (0, 2))
        assert qbracket(b, 2) ** 2 == qbracket(b, 3) + 1


def test_det_closed_matches_bruteforce_up_to_r4():
    rng = random.Random(42)
    count = 0
    while count < 60:
        r = rng.randint(1, 4)
        n = tuple(rng.randint(1, 3) for _ in range(r))
        offsets = sorted(rng.sample(range(0, 60, 7), r))
        alphas = tuple(o + rng.randint(0, 2) for o in offsets)
        base = rng.choice((B2, B32, B12))
        try:
            closed = speceq.det_closed(base, n, alphas)
        except speceq.DegenerateIndexError:
            continue
        assert closed == speceq.det_bruteforce(base, n, alphas)
        count += 1


# --------------------------------------------------------------------------
# xi system


def test_xi_r1_value():
    for b in (B2, B32):
        for n1 in (1, 2, 3):
            xs = speceq.xi_solve(b, ParamSet(8, 1, (0,)), (n1,))
            assert xs == [ppow(b, n1 - 1) * qbracket(b, n1)]


def test_xi_closed_r2_examples():
    xs = speceq.xi_closed_r2(B32, (1, 0), (0, 9))
    assert xs[0] == 1 and xs[1] == 0
    assert speceq.xi_solve(B32, REF_PARAMS, REF_N) == speceq.xi_closed_r2(B32, REF_N, (0, 9))
    for b in (B2, B12):
        for n in [(1, 1), (2, 1), (3, 2), (1, 3)]:
            assert speceq.xi_solve(b, REF_PARAMS, n) == speceq.xi_closed_r2(b, n, (0, 9))


def test_xi_sum_rule():
    for b in (B2, B32, B12):
        for params, n in [
            (REF_PARAMS, (2, 1)),
            (REF_PARAMS, (1, 1)),
            (ParamSet(8, 1, (0, 9, 18)), (1, 2, 1)),
            (ParamSet(8, 0, (2,)), (3,)),
        ]:
            xs = speceq.xi_solve(b, params, n)
            assert sum(xs) == speceq.xi_sum_expected(b, sum(n))


def test_xi_scale_linearity():
    # scaling b scales the solution: solve with doubled right-hand side
    xs = speceq.xi_solve(B32, REF_PARAMS, REF_N)
    low = speceq.xi_lowering(B32, REF_PARAMS, REF_N)
    assert [v * B32.q ** (1 - 3) for v in xs] == low


def test_xi_degenerate_error():
    # n_1 + alpha_1 - alpha_2 = 0 makes a reciprocal bracket blow up
    with pytest.raises(speceq.DegenerateIndexError):
        speceq.xi_solve(B32, ParamSet(2, 0, (0, 2)), (2, 1))


def test_xi_q_to_one_limit():
    # float solve at p -> 1 approaches the integer-arithmetic limit (20/9, 7/9)
    with mpmath.workprec(256):
        base = float_base(mpmath.mpf(1) + mpmath.mpf(10) ** -9)
        xs = speceq.xi_solve(base, REF_PARAMS, REF_N)
        assert abs(xs[0] - mpmath.mpf(20) / 9) < 1e-6
        assert abs(xs[1] - mpmath.mpf(7) / 9) < 1e-6


# --------------------------------------------------------------------------
# lowering decomposition


@pytest.mark.parametrize(
    "base,params,n",
    [
        (B32, REF_PARAMS, (2, 1)),
        (B2, REF_PARAMS, (1, 1)),
        (B12, REF_PARAMS, (2, 2)),
        (B32, ParamSet(8, 1, (0, 9, 18)), (1, 1, 1)),
        (B2, ParamSet(8, 0, (2,)), (3,)),
        (B32, REF_PARAMS, (1, 0)),
    ],
)
def test_lowering_decomposition_exact(base, params, n):
    rep = speceq.verify_lowering_decomposition(base, params, n)
    assert rep.passed
    assert rep.residuals["nonzero_count"] == 0


def test_lowering_decomposition_r1_constant():
    rep = speceq.verify_lowering_decomposition(B2, ParamSet(8, 0, (2,)), (3,))
    # xi_lowering = q^(1-n) * p^(n-1) [n] = p^(1-n) [n]
    assert rep.details["xi_lowering"] == ["21/16"]  # p=2, n=3: [3]/p^2 = (21/4)/4


def test_lowering_degree_one_trivial():
    rep = speceq.verify_lowering_decomposition(B32, REF_PARAMS, (1, 0))
    assert rep.passed


# --------------------------------------------------------------------------
# high-order equation


@pytest.mark.parametrize(
    "base,params,n",
    [
        (B32, REF_PARAMS, (2, 1)),
        (B2, REF_PARAMS, (1, 1)),
        (B12, REF_PARAMS, (3, 2)),
        (B32, ParamSet(8, 1, (0, 9, 18)), (1, 1, 1)),
        (B2, ParamSet(12, 2, (0, 12, 24)), (2, 1, 2)),
        (B2, ParamSet(6, 1, (2,)), (3,)),
        (B32, REF_PARAMS, (2, 0)),
        (B32, REF_PARAMS, (0, 0)),
    ],
)
def test_high_order_equation_zero_residual(base, params, n):
    rep = speceq.verify_high_order(base, params, n)
    assert rep.passed
    assert rep.residuals.get("nonzero_count", 0) == 0


def test_high_order_r1_equals_printed_reading():
    rep = speceq.verify_high_order(B2, ParamSet(6, 1, (2,)), (3,))
    assert rep.passed
    assert rep.details["printed_product_reading"]["zero"] is True


def test_high_order_printed_reading_fails_at_r2():
    rep = speceq.verify_high_order(B32, REF_PARAMS, REF_N)
    assert rep.passed
    assert rep.details["printed_product_reading"]["zero"] is False


def test_high_order_negative_control():
    P = build_by_moments(B32, REF_PARAMS, REF_N)
    bumped = CanonicalPoly(B32, (P.poly.coeffs[0] + 1,) + P.poly.coeffs[1:])
    res = speceq.high_order_residuals_for(B32, REF_PARAMS, MultiIndex(REF_N), lambda s: eval_poly(bumped, s))
    assert any(v != 0 for v in res["windows"].values())


@pytest.mark.xfail(
    strict=True,
    reason=(
        "the printed operator-product form of the high-order equation is not "
        "satisfied for r >= 2: the shifted raising operators do not commute, "
        "and the left side is not even in the span of the complementary "
        "products; recorded in every ode report as printed_product_reading"
    ),
)
def test_high_order_printed_product_form_as_stated():
    res = speceq.literal_product_reading_residual(B32, REF_PARAMS, MultiIndex(REF_N))
    assert res["zero"]


# --------------------------------------------------------------------------
# third-order r = 2 form


@pytest.mark.parametrize(
    "base,params,n",
    [
        (B32, REF_PARAMS, (2, 1)),
        (B2, REF_PARAMS, (1, 1)),
        (B12, REF_PARAMS, (2, 2)),
        (B2, ParamSet(12, 0, (1, 13)), (3, 2)),
        (B32, REF_PARAMS, (0, 2)),
        (B32, REF_PARAMS, (0, 0)),
    ],
)
def test_third_order_zero_residual(base, params, n):
    rep = speceq.verify_third_order(base, params, n)
    assert rep.passed
    assert rep.residuals["nonzero_count"] == 0


def test_third_order_coherent_with_high_order():
    # the five-coefficient residual vanishes iff the determinant form does
    for n in [(2, 1), (1, 2), (1, 1)]:
        assert speceq.verify_third_order(B32, REF_PARAMS, n).passed
        assert speceq.verify_high_order(B32, REF_PARAMS, n).passed


def test_third_order_requires_r2():
    from qmop.exactnum import DomainError

    with pytest.raises(DomainError):
        speceq.third_order_coeffs(B2, ParamSet(6, 1, (2,)), (1,))


def test_third_order_printed_display_recorded_as_erratum():
    rep = speceq.verify_third_order(B32, REF_PARAMS, REF_N)
    assert rep.details["printed_display_nonzero_points"] > 0


# --------------------------------------------------------------------------
# q = 1 third-order (multiple Hahn) form

HAHN_TUPLES = [
    (8, 1, (0, 9), (2, 1)),
    (8, 1, (0, 9), (1, 1)),
    (10, 0, (0, 10), (2, 2)),
    (9, 2, (1, 11), (1, 2)),
    (8, 0, (2, 11), (3, 1)),
    (12, 1, (0, 12), (1, 3)),
]


@pytest.mark.parametrize("N,alpha0,alphas,n", HAHN_TUPLES)
def test_hahn_third_order_zero_residual(N, alpha0, alphas, n):
    H = hahn_build(N, alpha0, alphas, n)
    co = speceq.hahn_third_order_coeffs(N, alpha0, alphas, n)
    for s in range(1, N):
        assert speceq.hahn_third_order_residual(co, H, s) == 0


def test_hahn_printed_shapes_have_zero_boundary_factor():
    co = speceq.hahn_printed_third_order_coeffs(8, 1, (0, 9), (2, 1))
    assert co.a4(0) == 0 and co.a4(1) == 0


@pytest.mark.xfail(
    strict=True,
    reason=(
        "the five polynomials displayed for the q = 1 third-order equation do "
        "not annihilate the multiple Hahn polynomials (checked exactly against "
        "two independent constructions); the corrected coefficients in "
        "hahn_third_order_coeffs do"
    ),
)
def test_hahn_printed_third_order_as_stated():
    N, alpha0, alphas, n = HAHN_TUPLES[0]
    H = hahn_build(N, alpha0, alphas, n)
    co = speceq.hahn_printed_third_order_coeffs(N, alpha0, alphas, n)
    for s in range(1, N):
        assert speceq.hahn_third_order_residual(co, H, s) == 0


def test_hahn_coeffs_match_q_limit_of_third_order():
    # normalized q coefficients at p = 1 + 1e-6 approach the exact q = 1 ones
    N, alpha0, alphas, n = 8, 1, (0, 9), (2, 1)
    hco = speceq.hahn_third_order_coeffs(N, alpha0, alphas, n)
    with mpmath.workprec(256):
        base = float_base(mpmath.mpf(1) + mpmath.mpf(10) ** -6)
        qco = speceq.third_order_coeffs(base, ParamSet(N, alpha0, alphas), n)
        for s in (2, 3, 5, 7):
            ref4 = hco.a4(s)
            got4 = qco.a4(s)
            for hval, qval in [
                (hco.a3(s), qco.a3(s)),
                (hco.a2(s), qco.a2(s)),
                (hco.a1(s), qco.a1(s)),
                (hco.a0(s), qco.a0(s)),
            ]:
                want = mpmath.mpf(hval.numerator) / hval.denominator / (mpmath.mpf(ref4.numerator) / ref4.denominator)
                got = qval / got4
                assert abs(got - want) <= 1e-4 * max(1, abs(want))


# --------------------------------------------------------------------------
# classical r = 1 reduction


@pytest.mark.parametrize(
    "base,alpha,beta,N,n",
    [
        (B2, 0, 0, 6, 0),
        (B2, 0, 0, 6, 1),
        (B2, 1, 2, 6, 3),
        (B32, 2, 0, 7, 2),
        (B12, 1, 1, 5, 2),
    ],
)
def test_classical_reduction(base, alpha, beta, N, n):
    rep = speceq.classical_reduction(base, alpha, beta, N, n)
    assert rep.passed
    assert rep.residuals["nonzero_count"] == 0


def test_classical_printed_triple_recorded_as_erratum():
    rep = speceq.classical_reduction(B2, 1, 2, 6, 3)
    assert rep.details["printed_display_nonzero_points"] > 0


def test_classical_lambda_structure():
    # lambda_n = p^-(N+alpha) [n][n+alpha+beta+1], zero at n = 0
    co = speceq.classical_coeffs(B2, 1, 2, 6, 0)
    assert co.lam == 0
    co = speceq.classical_coeffs(B2, 1, 2, 6, 3)
    assert co.lam == ppow(B2, -7) * qbracket(B2, 3) * qbracket(B2, 7)
