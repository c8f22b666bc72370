"""HTTP front end for the toolkit.

Each route parses its request model, delegates to the shared handler,
and returns the common Report. Domain errors come back as a structured
400 instead of a stack trace.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import GermflowError, ParseError
from .handlers import (
    handle_analyze,
    handle_blowup,
    handle_euclid,
    handle_exp,
    handle_flagcheck,
    handle_holonomy,
    handle_log,
    handle_orbit,
    handle_period,
)
from .models import (
    AnalyzeRequest,
    BlowupRequest,
    ErrorDetail,
    ErrorReport,
    EuclidRequest,
    ExpRequest,
    FlagcheckRequest,
    HolonomyRequest,
    LogRequest,
    OrbitRequest,
    PeriodRequest,
    Report,
)

app = FastAPI(title="germflow", version=__version__)


def error_report(exc: Exception) -> ErrorReport:
    detail = ErrorDetail(type=type(exc).__name__, message=str(exc))
    if isinstance(exc, ParseError):
        detail.line = exc.line
        detail.column = exc.column
    return ErrorReport(error=detail)


@app.exception_handler(GermflowError)
async def germ_error(request: Request, exc: GermflowError):
    return JSONResponse(status_code=400, content=error_report(exc).model_dump())


@app.exception_handler(ValueError)
async def value_error(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content=error_report(exc).model_dump())


@app.get("/v1/health")
async def health():
    return {"status": "ok", "version": __version__}


@app.post("/v1/analyze", response_model=Report, response_model_exclude_none=False)
async def analyze(req: AnalyzeRequest) -> Report:
    return handle_analyze(req)


@app.post("/v1/holonomy", response_model=Report)
async def holonomy(req: HolonomyRequest) -> Report:
    return handle_holonomy(req)


@app.post("/v1/blowup", response_model=Report)
async def blowup(req: BlowupRequest) -> Report:
    return handle_blowup(req)


@app.post("/v1/exp", response_model=Report)
async def exp(req: ExpRequest) -> Report:
    return handle_exp(req)


@app.post("/v1/log", response_model=Report)
async def log(req: LogRequest) -> Report:
    return handle_log(req)


@app.post("/v1/period", response_model=Report)
async def period(req: PeriodRequest) -> Report:
    return handle_period(req)


@app.post("/v1/orbit", response_model=Report)
async def orbit(req: OrbitRequest) -> Report:
    return handle_orbit(req)


@app.post("/v1/euclid", response_model=Report)
async def euclid(req: EuclidRequest) -> Report:
    return handle_euclid(req)


@app.post("/v1/flagcheck", response_model=Report)
async def flagcheck(req: FlagcheckRequest) -> Report:
    return handle_flagcheck(req)
