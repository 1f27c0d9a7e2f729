"""Structured verification reports shared by the library, service, and CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

# Reading decisions baked into this implementation.  They resolve printed
# ambiguities in the source formulas and are embedded in every report so a
# consumer can tell which reading produced the numbers.  Each was pinned by
# an exact identity test; the superseded printed readings stay available in
# the code (functions suffixed _printed) and their residuals are recorded.
CONVENTIONS = {
    # the weight pairs alpha_i with s and alpha0 with N - s
    "weight_slot": "alpha_i_with_s",
    # the determinant product runs over 1 <= k < l <= r
    "detA_index": "k<l",
    # the operator coefficient pair (A, B) acts through the plain backward
    # difference f(s) - f(s-1); the divided form absorbs a step q^(s-1) into A
    "operator_difference": "plain_backward",
    # measured raising constant: -q^((|n|-N-alpha0)/2) [|n|+alpha_i+alpha0],
    # a factor q^|n| above the printed exponent
    "raising_constant": "q^((|n|-N-alpha0)/2)",
    # the lowering decomposition holds with the solved coefficients rescaled
    # by q^(1-|n|); the unscaled solution matches the closed forms and the sum rule
    "xi_scaling": "q^(1-|n|)",
    # the high-order equation is verified as the consistency determinant of
    # the lowering decomposition with the raising recurrences; the
    # complementary operator product is exact only at r = 1 (the shifted
    # raising operators do not commute) and its residual is recorded
    "theorem_rhs": "elimination_determinant",
}


def scalar_str(value) -> str:
    """Lossless string for exact rationals; repr for floats."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if isinstance(value, int):
        return str(value)
    return repr(value)


@dataclass
class VerificationReport:
    """Outcome of one identity suite on one instance."""

    suite: str
    instance: dict
    passed: bool
    residuals: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))
    elapsed_s: float = 0.0

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "instance": self.instance,
            "pass": self.passed,
            "residuals": self.residuals,
            "details": self.details,
            "conventions": self.conventions,
        }
        if include_timing:
            out["timing_s"] = self.elapsed_s
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing=include_timing), sort_keys=True, indent=2)


def combine(suite: str, instance: dict, reports: list) -> "VerificationReport":
    """Aggregate sub-reports; passes iff all pass."""
    return VerificationReport(
        suite=suite,
        instance=instance,
        passed=all(r.passed for r in reports),
        residuals={r.suite: r.residuals for r in reports},
        details={r.suite: r.details for r in reports},
        elapsed_s=sum(r.elapsed_s for r in reports),
    )
