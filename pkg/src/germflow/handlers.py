"""Handlers shared by the HTTP routes and the command line.

Every handler takes a request model, runs the exact computation, and
returns the common Report. Domain failures (GermflowError, ValueError)
propagate to the caller, which turns them into an ErrorReport.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .blowup import CHARTS, blowup_diffeo, blowup_vector_field_axis, chart_names
from .errors import GermflowError
from .germs import (
    eigen_data,
    exp_time_one,
    formal_period,
    infinitesimal_generator,
    orbit_cardinality,
)
from .holonomy import holonomy_generator, normalize_axis
from .integrability import (
    diagnose,
    frobenius_check,
    interior_product,
    kupka_nonvanishing,
    pure_meromorphic_combination,
)
from .models import (
    AnalyzeRequest,
    BlowupRequest,
    EuclidRequest,
    ExpRequest,
    FlagcheckRequest,
    HolonomyRequest,
    LogRequest,
    OrbitRequest,
    PeriodRequest,
    Report,
)
from .parsing import (
    MapSpec,
    bind_map,
    bind_vector_field,
    parse_gaussian_point,
    parse_germ,
    parse_map,
    parse_one_form,
    parse_vector_field,
)
from .scalars import TauScalar, render_gaussian
from .series import render_series

HOLONOMY_NAMES = ("x1", "x2")


def _render_components(components, names):
    return [render_series(c, names) for c in components]


def _render_eigenvalues(X):
    try:
        data = eigen_data(X)
    except GermflowError:
        return None
    return [render_gaussian(v) for v in data.eigenvalues]


def _numeric_eigenvalues(X, precision):
    data = eigen_data(X)
    out = []
    for v in data.eigenvalues:
        val = TauScalar.coerce(v).numeric_eval(precision)
        if val.imag == 0:
            out.append(mpmath.nstr(val.real, precision))
        else:
            out.append(mpmath.nstr(val, precision))
    return out


def handle_analyze(req: AnalyzeRequest) -> Report:
    X = parse_vector_field(req.expr, req.order, dim=3)
    rep = diagnose(X, order=req.order, pmax=req.pmax)
    report = Report(
        input=req.expr,
        order=req.order,
        eigenvalues=_render_eigenvalues(X),
        condition_star=rep.star.holds if rep.star is not None else None,
        distinguished_axis=rep.axis,
        period=rep.period,
        verdict=rep.verdict.value,
        notes=list(rep.notes),
    )
    if rep.holonomy is not None:
        report.holonomy = _render_components(rep.holonomy.components, HOLONOMY_NAMES)
    if rep.first_integrals:
        report.first_integrals = _render_components(
            rep.first_integrals, ("x", "y", "z")
        )
    if req.precision:
        report.result = {
            "eigenvalues_numeric": _numeric_eigenvalues(X, req.precision)
        }
    return report


def handle_holonomy(req: HolonomyRequest) -> Report:
    X = parse_vector_field(req.expr, max(req.order, 1), dim=3)
    nf = normalize_axis(X, axis=req.axis)
    h = holonomy_generator(X, axis=req.axis, order=req.order)
    report = Report(
        input=req.expr,
        order=req.order,
        eigenvalues=_render_eigenvalues(X),
        condition_star=nf.star.holds,
        distinguished_axis=nf.axis,
        holonomy=_render_components(h.components, HOLONOMY_NAMES),
    )
    if req.precision:
        report.result = {
            "eigenvalues_numeric": _numeric_eigenvalues(X, req.precision)
        }
    return report


def handle_blowup(req: BlowupRequest) -> Report:
    if req.chart not in CHARTS:
        raise ValueError("chart must be one of %s" % (CHARTS,))
    order = req.order if req.order is not None else 8
    node = parse_germ(req.expr)
    if isinstance(node, MapSpec):
        G = bind_map(node, order + 1)
        lifted = blowup_diffeo(G, chart=req.chart, order=order)
        names = chart_names(req.chart, dim=2)
        kind = "map"
        components = lifted.components
    else:
        X = bind_vector_field(node, order + 1, dim=3)
        lifted = blowup_vector_field_axis(
            X, axis=req.axis, chart=req.chart, order=order
        )
        names = chart_names(req.chart, dim=3)
        kind = "field"
        components = lifted.components
    return Report(
        input=req.expr,
        order=order,
        result={
            "kind": kind,
            "chart": req.chart,
            "names": list(names),
            "components": _render_components(components, names),
        },
    )


def handle_exp(req: ExpRequest) -> Report:
    X = parse_vector_field(req.expr, req.order, dim=2)
    phi = exp_time_one(X, order=req.order)
    return Report(
        input=req.expr,
        order=req.order,
        result={"components": _render_components(phi.components, ("x", "y"))},
    )


def handle_log(req: LogRequest) -> Report:
    h = parse_map(req.expr, req.order)
    V = infinitesimal_generator(h, order=req.order)
    return Report(
        input=req.expr,
        order=req.order,
        result={"components": _render_components(V.components, ("x", "y"))},
    )


def handle_period(req: PeriodRequest) -> Report:
    h = parse_map(req.expr, req.order)
    period = formal_period(h, pmax=req.pmax)
    report = Report(input=req.expr, order=req.order, period=period)
    if period is None:
        report.notes.append("no formal period up to pmax=%d" % req.pmax)
    return report


def handle_orbit(req: OrbitRequest) -> Report:
    h = parse_map(req.expr, req.order)
    start = parse_gaussian_point(req.start)
    radius = Fraction(req.radius)
    out = orbit_cardinality(h, start, radius, cap=req.cap)
    return Report(
        input=req.expr,
        order=req.order,
        result={"count": out.count, "escaped": out.escaped},
    )


def handle_euclid(req: EuclidRequest) -> Report:
    combo = pure_meromorphic_combination(req.p, req.q)
    label = "p=%s q=%s" % (",".join(map(str, req.p)), ",".join(map(str, req.q)))
    if combo is None:
        return Report(input=label, result={"result": "not_transverse"})
    return Report(
        input=label,
        result={
            "result": "mixed",
            "weights": list(combo.weights),
            "a": combo.a,
            "b": combo.b,
        },
    )


def handle_flagcheck(req: FlagcheckRequest) -> Report:
    X = parse_vector_field(req.expr, req.order, dim=3)
    w = parse_one_form(req.form, req.order, dim=3)
    checks = {
        "interior_vanishes": interior_product(X, w).is_zero(),
        "frobenius": frobenius_check(w),
        "kupka": kupka_nonvanishing(w, req.axis),
    }
    return Report(
        input="%s ; %s" % (req.expr, req.form),
        order=req.order,
        flag_checks=checks,
    )
