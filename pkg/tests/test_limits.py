from fractions import Fraction

import pytest

from qmop import limits
from qmop.constructor import ConventionViolationError
from qmop.exactnum import DomainError
from qmop.measures import ParamSet


def test_hahn_first_degree_uniform_weight():
    for N in (4, 6, 9):
        H = limits.hahn_build(N, 0, (0,), (1,))
        assert H.coeffs == (Fraction(-N, 2), Fraction(1))


def test_hahn_zero_index():
    assert limits.hahn_build(8, 1, (0, 9), (0, 0)).coeffs == (Fraction(1),)


@pytest.mark.parametrize(
    "N,alpha0,alphas,n",
    [
        (8, 1, (0, 9), (2, 1)),
        (10, 0, (0, 10), (2, 2)),
        (9, 2, (1, 11), (1, 2)),
        (12, 1, (0, 12), (1, 3)),
    ],
)
def test_hahn_orthogonality_and_dual(N, alpha0, alphas, n):
    H = limits.hahn_build(N, alpha0, alphas, n)
    assert all(v == 0 for v in limits.hahn_orthogonality_residuals(H))
    assert H.coeffs == limits.hahn_build_by_moments(N, alpha0, alphas, n).coeffs
    assert H.coeffs[-1] == 1


def test_hahn_index_bounds():
    with pytest.raises(DomainError):
        limits.hahn_build(3, 0, (0, 5), (2, 2))


def test_jacobi_examples():
    J = limits.jacobi_build(0, (0,), (1,))
    assert J.coeffs == (Fraction(-1, 2), Fraction(1))
    assert limits.jacobi_build(1, (0, 2), (0, 0)).coeffs == (Fraction(1),)


@pytest.mark.parametrize(
    "alpha0,alphas,n",
    [(1, (0, 2), (1, 1)), (0, (0, 1), (2, 1)), (2, (1, 3), (2, 2)), (0, (0,), (4,))],
)
def test_jacobi_orthogonality_exact(alpha0, alphas, n):
    J = limits.jacobi_build(alpha0, alphas, n)
    assert all(v == 0 for v in limits.jacobi_orthogonality_residuals(J))
    assert J.coeffs[-1] == 1


def test_jacobi_division_guard():
    with pytest.raises(ConventionViolationError):
        limits.poly_div_xpow([Fraction(1), Fraction(1)], 1)
    with pytest.raises(ConventionViolationError):
        limits.poly_div_one_minus_x([Fraction(1), Fraction(1)], 1)


def test_backward_expansion_examples():
    vals = [Fraction(v) for v in (3, 1, 4, 1, 5, 9, 2, 6)]
    lhs, rhs = limits.backward_expansion_check(1, vals, 5)
    assert lhs == rhs == vals[5] - vals[4]
    sq = [Fraction(s * s) for s in range(8)]
    lhs, rhs = limits.backward_expansion_check(2, sq, 6)
    assert lhs == rhs == 2
    cubic = [Fraction(2 * s**3 - s + 1) for s in range(9)]
    lhs, rhs = limits.backward_expansion_check(4, cubic, 7)
    assert lhs == rhs == 0


def test_q_to_one_study_reference():
    tbl = limits.q_to_one_study(ParamSet(8, 1, (0, 9)), (2, 1), [1e-2, 1e-3, 1e-4])
    assert tbl.deviations[0] > tbl.deviations[1] > tbl.deviations[2]
    assert abs(tbl.slope - 1.0) <= 0.2
    assert tbl.passed
    assert tbl.precision_bits == 256


def test_q_to_one_rejects_p_equal_one():
    with pytest.raises(DomainError):
        limits.q_to_one_study(ParamSet(8, 1, (0, 9)), (1, 1), [0.0])


def test_hahn_to_jacobi_study_small():
    tbl = limits.hahn_to_jacobi_study(1, (0, 2), (1, 1), [50, 100, 200])
    assert tbl.deviations[0] > tbl.deviations[1] > tbl.deviations[2]
    assert abs(tbl.slope + 1.0) <= 0.2


def test_hahn_to_jacobi_zero_index():
    tbl = limits.hahn_to_jacobi_study(1, (0, 2), (0, 0), [20, 40])
    assert tbl.deviations == [0.0, 0.0] or all(v == 0 for v in tbl.deviations)


def test_convergence_table_serialization():
    tbl = limits.hahn_to_jacobi_study(1, (0, 2), (1, 1), [50, 100])
    d = tbl.to_dict()
    assert d["study"] == "hahn-to-jacobi"
    assert d["pass"] in (True, False)
    assert len(d["parameters"]) == len(d["deviations"]) == 2
