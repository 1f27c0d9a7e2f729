"""Service operations: pydantic models in, pydantic models out.

The FastAPI app and the CLI both dispatch here, so in-process and HTTP
clients see identical payloads.  Domain errors propagate as exceptions and
are mapped to status codes by the callers.
"""

from __future__ import annotations

from .. import speceq
from ..constructor import (
    build_by_moments,
    build_by_rodrigues,
    instance_dict,
    rodrigues_leading_ratio,
    verify_orthogonality,
)
from ..exactnum import DomainError
from ..limits import hahn_to_jacobi_study, q_to_one_study
from ..measures import require_admissible
from ..operators import shifted_raising_params, verify_raising_identity
from ..report import CONVENTIONS, VerificationReport, combine, scalar_str
from .schemas import (
    ConstructResponse,
    DetAResponse,
    InstanceSpec,
    LimitsRequest,
    LimitsResponse,
    ReportModel,
    VerifyRequest,
    XiResponse,
)


class SuiteNotApplicableError(DomainError):
    """The requested suite does not apply to the instance."""


def construct(spec: InstanceSpec) -> ConstructResponse:
    base, params, n = spec.base(), spec.params(), spec.index()
    require_admissible(params)
    by_moments = build_by_moments(base, params, n)
    by_rodrigues = build_by_rodrigues(base, params, n)
    return ConstructResponse(
        instance=instance_dict(base, params, n),
        moments_coefficients=[scalar_str(c) for c in by_moments.poly.coeffs],
        rodrigues_coefficients=[scalar_str(c) for c in by_rodrigues.poly.coeffs],
        equal=by_moments.poly.eq_poly(by_rodrigues.poly),
        degree=by_moments.degree,
        prefactor_ratio=scalar_str(rodrigues_leading_ratio(base, params, n)),
        conventions=dict(CONVENTIONS),
    )


def _report_model(report: VerificationReport, include_timing: bool = True) -> ReportModel:
    return ReportModel.model_validate(report.to_dict(include_timing=include_timing))


def _suite_reports(spec: InstanceSpec, suite: str) -> list:
    base, params, n = spec.base(), spec.params(), spec.index()
    require_admissible(params)
    reports = []

    def run_orthogonality():
        reports.append(verify_orthogonality(build_by_moments(base, params, n)))
        reports.append(verify_orthogonality(build_by_rodrigues(base, params, n)))

    def run_raising():
        applicable = []
        for i in range(1, params.r + 1):
            if params.alphas[i - 1] < 1 or params.alpha0 < 1:
                continue
            try:
                require_admissible(shifted_raising_params(params, i))
            except DomainError:
                continue
            applicable.append(i)
        if not applicable:
            raise SuiteNotApplicableError(
                "raising needs alpha_i >= 1, alpha0 >= 1 and an admissible shifted parameter set for some i"
            )
        for i in applicable:
            reports.append(verify_raising_identity(base, params, n, i))

    def run_lowering():
        reports.append(speceq.verify_lowering_decomposition(base, params, n))

    def run_ode():
        reports.append(speceq.verify_high_order(base, params, n))

    def run_third_order():
        if params.r != 2:
            raise SuiteNotApplicableError("the third-order suite requires exactly two measures")
        reports.append(speceq.verify_third_order(base, params, n))

    def run_classical():
        if params.r != 1:
            raise SuiteNotApplicableError("the classical suite requires exactly one measure")
        reports.append(speceq.classical_reduction(base, params.alpha0, params.alphas[0], params.N, n[0]))

    if suite == "orthogonality":
        run_orthogonality()
    elif suite == "raising":
        run_raising()
    elif suite == "lowering":
        run_lowering()
    elif suite == "ode":
        run_ode()
    elif suite == "third-order":
        run_third_order()
    elif suite == "classical":
        run_classical()
    elif suite == "all":
        run_orthogonality()
        run_lowering()
        run_ode()
        try:
            run_raising()
        except SuiteNotApplicableError:
            pass
        if params.r == 2:
            run_third_order()
        if params.r == 1:
            run_classical()
    return reports


def verify(request: VerifyRequest, include_timing: bool = True) -> ReportModel:
    reports = _suite_reports(request.instance, request.suite)
    if len(reports) == 1:
        return _report_model(reports[0], include_timing)
    spec = request.instance
    merged = combine(request.suite, instance_dict(spec.base(), spec.params(), spec.index()), reports)
    return _report_model(merged, include_timing)


def xi(spec: InstanceSpec) -> XiResponse:
    base, params, n = spec.base(), spec.params(), spec.index()
    require_admissible(params)
    solved = speceq.xi_solve(base, params, n)
    lowering = speceq.xi_lowering(base, params, n)
    d = n.total
    total = base.zero()
    for v in solved:
        total = total + v
    sum_ok = total == speceq.xi_sum_expected(base, d) if d >= 1 else total == 0
    closed_match = None
    if params.r == 2:
        closed_match = solved == speceq.xi_closed_r2(base, n, params.alphas)
    return XiResponse(
        instance=instance_dict(base, params, n),
        xi_solved=[scalar_str(v) for v in solved],
        xi_lowering=[scalar_str(v) for v in lowering],
        sum_value=scalar_str(total),
        sum_rule_ok=sum_ok,
        closed_form_match=closed_match,
        conventions=dict(CONVENTIONS),
    )


def det_a(spec: InstanceSpec) -> DetAResponse:
    base, params, n = spec.base(), spec.params(), spec.index()
    closed = speceq.det_closed(base, n, params.alphas)
    brute = speceq.det_bruteforce(base, n, params.alphas)
    return DetAResponse(
        instance=instance_dict(base, params, n),
        det_closed=scalar_str(closed),
        det_bruteforce=scalar_str(brute),
        equal=closed == brute,
        conventions=dict(CONVENTIONS),
    )


def limits_study(request: LimitsRequest) -> LimitsResponse:
    spec = request.instance
    if request.study == "q1":
        table = q_to_one_study(
            spec.params(), spec.index(), request.sweep, precision_bits=spec.precision_bits or 256
        )
    else:
        table = hahn_to_jacobi_study(spec.alpha0, spec.alphas, spec.index(), [int(v) for v in request.sweep])
    return LimitsResponse.model_validate(table.to_dict())
