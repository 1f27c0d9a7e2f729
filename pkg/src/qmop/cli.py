"""Command-line client for the verification service.

By default commands run in process against the same handlers the HTTP
service exposes; ``--server URL`` sends the identical payloads to a running
instance instead.  Exit codes: 0 pass, 1 verification failure, disagreement,
or degenerate index, 2 usage or precondition errors.
"""

from __future__ import annotations

import json
import sys

import click
import httpx
from pydantic import ValidationError

from .exactnum import DomainError
from .measures import AdmissibilityError
from .speceq import DegenerateIndexError
from .service import handlers
from .service.handlers import SuiteNotApplicableError
from .service.schemas import InstanceSpec, LimitsRequest, VerifyRequest


def _load_instance(path: str, precision_bits=None) -> InstanceSpec:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read instance file {path}: {exc}")
    if precision_bits is not None:
        payload["precision_bits"] = precision_bits
    try:
        return InstanceSpec.model_validate(payload)
    except ValidationError as exc:
        click.echo(f"invalid instance: {exc}", err=True)
        sys.exit(2)


def _call(ctx, endpoint: str, payload: dict, local):
    """Dispatch one operation; returns (status_code, response dict)."""
    server = ctx.obj.get("server")
    if server:
        resp = httpx.post(f"{server.rstrip('/')}/{endpoint}", json=payload, timeout=600.0)
        try:
            return resp.status_code, resp.json()
        except json.JSONDecodeError:
            return resp.status_code, {"detail": resp.text}
    try:
        result = local()
        return 200, result.model_dump(by_alias=True)
    except DegenerateIndexError as exc:
        return 409, {"detail": str(exc)}
    except (AdmissibilityError, SuiteNotApplicableError) as exc:
        return 422, {"detail": str(exc)}
    except ValidationError as exc:
        return 422, {"detail": str(exc)}
    except DomainError as exc:
        return 422, {"detail": str(exc)}


def _emit(ctx, payload: dict, lines=None) -> None:
    if ctx.obj.get("no_timing"):
        payload = {k: v for k, v in payload.items() if k != "timing_s"}
    if ctx.obj.get("json_only") or lines is None:
        click.echo(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            click.echo(line)
        click.echo(json.dumps(payload, sort_keys=True, indent=2))


def _bail(code: int, payload: dict) -> None:
    click.echo(json.dumps(payload, sort_keys=True, indent=2), err=True)
    sys.exit(1 if code == 409 else 2)


@click.group()
@click.option("--server", default=None, help="URL of a running service; default runs in process.")
@click.option("--json", "json_only", is_flag=True, help="Print machine-readable JSON only.")
@click.option("--no-timing", is_flag=True, help="Strip the timing field for byte-stable output.")
@click.pass_context
def main(ctx, server, json_only, no_timing):
    """Exact workbench for q-Hahn multiple orthogonal polynomials."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server
    ctx.obj["json_only"] = json_only
    ctx.obj["no_timing"] = no_timing


@main.command()
@click.option("-i", "--instance", "path", required=True, type=click.Path())
@click.pass_context
def construct(ctx, path):
    """Build the polynomial both ways and compare coefficients."""
    spec = _load_instance(path)
    code, payload = _call(ctx, "construct", spec.model_dump(), lambda: handlers.construct(spec))
    if code != 200:
        _bail(code, payload)
    _emit(ctx, payload, [f"degree {payload['degree']}, builders equal: {payload['equal']}"])
    sys.exit(0 if payload["equal"] else 1)


@main.command()
@click.option("-i", "--instance", "path", required=True, type=click.Path())
@click.option("--suite", default="all", help="orthogonality|raising|lowering|ode|third-order|classical|all")
@click.pass_context
def verify(ctx, path, suite):
    """Run one identity suite and report exact residuals."""
    spec = _load_instance(path)
    try:
        request = VerifyRequest(instance=spec, suite=suite)
    except ValidationError as exc:
        click.echo(f"invalid request: {exc}", err=True)
        sys.exit(2)
    code, payload = _call(
        ctx, "verify", request.model_dump(), lambda: handlers.verify(request, include_timing=not ctx.obj["no_timing"])
    )
    if code != 200:
        _bail(code, payload)
    _emit(ctx, payload, [f"suite {payload['suite']}: {'pass' if payload['pass'] else 'FAIL'}"])
    sys.exit(0 if payload["pass"] else 1)


@main.command()
@click.option("-i", "--instance", "path", required=True, type=click.Path())
@click.pass_context
def xi(ctx, path):
    """Solve the xi system; check the sum rule and the r = 2 closed forms."""
    spec = _load_instance(path)
    code, payload = _call(ctx, "xi", spec.model_dump(), lambda: handlers.xi(spec))
    if code != 200:
        _bail(code, payload)
    ok = payload["sum_rule_ok"] and payload["closed_form_match"] is not False
    _emit(ctx, payload, [f"xi = {payload['xi_solved']}, sum rule ok: {payload['sum_rule_ok']}"])
    sys.exit(0 if ok else 1)


@main.command("det-a")
@click.option("-i", "--instance", "path", required=True, type=click.Path())
@click.pass_context
def det_a(ctx, path):
    """Compare the closed determinant formula with the brute-force value."""
    spec = _load_instance(path)
    code, payload = _call(ctx, "det-a", spec.model_dump(), lambda: handlers.det_a(spec))
    if code != 200:
        _bail(code, payload)
    _emit(ctx, payload, [f"det = {payload['det_closed']}, agreement: {payload['equal']}"])
    sys.exit(0 if payload["equal"] else 1)


@main.command()
@click.option("-i", "--instance", "path", required=True, type=click.Path())
@click.option("--study", required=True, help="q1|jacobi")
@click.option("--sweep", required=True, help="comma-separated sweep values")
@click.option("--precision-bits", default=None, type=int)
@click.pass_context
def limits(ctx, path, study, sweep, precision_bits):
    """Run a limit study and fit the convergence slope."""
    spec = _load_instance(path, precision_bits)
    try:
        values = [float(v) for v in sweep.split(",") if v.strip()]
        request = LimitsRequest(instance=spec, study=study, sweep=values)
    except (ValueError, ValidationError) as exc:
        click.echo(f"invalid sweep/study: {exc}", err=True)
        sys.exit(2)
    code, payload = _call(ctx, "limits", request.model_dump(), lambda: handlers.limits_study(request))
    if code != 200:
        _bail(code, payload)
    _emit(ctx, payload, [f"slope {payload['slope']:.3f} (expected {payload['expected_slope']}): "
                         f"{'pass' if payload['pass'] else 'FAIL'}"])
    sys.exit(0 if payload["pass"] else 1)


if __name__ == "__main__":
    main()
