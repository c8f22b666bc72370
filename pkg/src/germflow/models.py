"""Request and response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from . import __version__


class AnalyzeRequest(BaseModel):
    expr: str
    order: int = 8
    pmax: int = 24
    precision: Optional[int] = None


class HolonomyRequest(BaseModel):
    expr: str
    order: int = 8
    axis: Optional[int] = None
    precision: Optional[int] = None


class BlowupRequest(BaseModel):
    expr: str
    chart: str = "t_x"
    order: Optional[int] = None
    axis: int = 2


class ExpRequest(BaseModel):
    expr: str
    order: int = 8


class LogRequest(BaseModel):
    expr: str
    order: int = 8


class PeriodRequest(BaseModel):
    expr: str
    order: int = 8
    pmax: int = 24


class OrbitRequest(BaseModel):
    expr: str
    start: str
    radius: str = "1"
    order: int = 8
    cap: int = 1000


class EuclidRequest(BaseModel):
    p: List[int]
    q: List[int]


class FlagcheckRequest(BaseModel):
    expr: str
    form: str
    order: int = 8
    axis: int = 2


class Report(BaseModel):
    """One report shape for every operation; fields a given operation does
    not produce stay null."""

    input: str
    order: Optional[int] = None
    eigenvalues: Optional[List[str]] = None
    condition_star: Optional[bool] = None
    distinguished_axis: Optional[int] = None
    holonomy: Optional[List[str]] = None
    period: Optional[int] = None
    first_integrals: Optional[List[str]] = None
    flag_checks: Optional[Dict[str, bool]] = None
    result: Optional[Dict[str, Any]] = None
    verdict: Optional[str] = None
    notes: List[str] = Field(default_factory=list)
    version: str = __version__


class ErrorDetail(BaseModel):
    type: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None


class ErrorReport(BaseModel):
    error: ErrorDetail
    version: str = __version__
