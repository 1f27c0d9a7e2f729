"""FastAPI application exposing the construction and verification operations.

Status codes: 200 on computed results (the body carries the pass flag),
409 on degenerate indices, 422 on inadmissible parameters, inapplicable
suites, or malformed requests.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..exactnum import DomainError
from ..measures import AdmissibilityError
from ..speceq import DegenerateIndexError
from . import handlers
from .handlers import SuiteNotApplicableError
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

app = FastAPI(
    title="q-Hahn multiple orthogonal polynomial workbench",
    description=(
        "Exact construction of type-II q-Hahn multiple orthogonal polynomials "
        "and verification of their operator identities, difference equations, "
        "and limit transitions."
    ),
    version=__version__,
)


@app.exception_handler(DegenerateIndexError)
async def _degenerate(request: Request, exc: DegenerateIndexError):
    return JSONResponse(status_code=409, content={"detail": str(exc)})


@app.exception_handler(AdmissibilityError)
async def _inadmissible(request: Request, exc: AdmissibilityError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(SuiteNotApplicableError)
async def _not_applicable(request: Request, exc: SuiteNotApplicableError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(DomainError)
async def _domain(request: Request, exc: DomainError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/construct", response_model=ConstructResponse)
def construct(spec: InstanceSpec) -> ConstructResponse:
    return handlers.construct(spec)


@app.post("/verify", response_model=ReportModel, response_model_by_alias=True)
def verify(request: VerifyRequest) -> ReportModel:
    return handlers.verify(request)


@app.post("/xi", response_model=XiResponse)
def xi(spec: InstanceSpec) -> XiResponse:
    return handlers.xi(spec)


@app.post("/det-a", response_model=DetAResponse)
def det_a(spec: InstanceSpec) -> DetAResponse:
    return handlers.det_a(spec)


@app.post("/limits", response_model=LimitsResponse, response_model_by_alias=True)
def limits(request: LimitsRequest) -> LimitsResponse:
    return handlers.limits_study(request)
