"""Quadratic blow-up of plane map germs and of three-dimensional fields
along an invariant axis.

Both charts of the blow-up are supported.  Chart "t_x" glues the second
transverse variable as a multiple of the first (y = t x, base x, slope
t = y/x); chart "s_y" is the mirror (x = s y, base y, slope s = x/y).
Transformed objects live at the chart origin in coordinates (slope, base)
for maps and (slope, base, axis) for fields.

Exactness bookkeeping: pushing a monomial x^i y^j through y = t x gives
t^j x^{i+j}, so a source series known to total degree K determines every
pushed monomial of base power at most K.  Quotients by the base variable
lose one power, hence transforms truncated at order N require the input
known to order N + 1.
"""

from __future__ import annotations

from typing import Optional

from .errors import ChartNotInvariant, NotUnitDenominator, OrderTooLow
from .series import DiffeoGerm, TruncatedSeries
from .germs import VectorFieldGerm

CHARTS = ("t_x", "s_y")

_SLOPE_NAMES = {"t_x": ("t", "x"), "s_y": ("s", "y")}


def chart_names(chart: str, dim: int = 2) -> tuple:
    """Display names of the chart coordinates (slope, base[, axis])."""
    _check_chart(chart)
    names = _SLOPE_NAMES[chart]
    return names if dim == 2 else names + ("z",)


def _check_chart(chart: str):
    if chart not in CHARTS:
        raise ValueError("unknown chart %r; expected one of %r" % (chart, CHARTS))


def _push_plane(s: TruncatedSeries, chart: str) -> TruncatedSeries:
    """Substitute the chart parametrization into a plane series, producing a
    series in (slope, base).

    Chart t_x sends (x, y) to (x, t x), so x^i y^j becomes t^j x^{i+j}; each
    source monomial maps to a single target, so the pushed series is correct
    on every monomial whose base power does not exceed the input order.  The
    declared order doubles so no pushed monomial is dropped."""
    out = {}
    for ex, c in s.coeffs.items():
        i, j = ex
        if chart == "t_x":
            slope, base = j, i + j
        else:
            slope, base = i, i + j
        nex = (slope, base)
        prev = out.get(nex)
        out[nex] = c if prev is None else prev + c
    return TruncatedSeries(s.dim, 2 * s.order, out)


def blowup_diffeo(G: DiffeoGerm, chart: str = "t_x", order: Optional[int] = None) -> DiffeoGerm:
    """Strict transform of a plane map germ under one quadratic blow-up.

    In chart t_x the transform is ((g2 o sigma) / (g1 o sigma), g1 o sigma)
    with sigma(t, x) = (x, t x); the quotient must be a germ, so the base
    component's own base coefficient must be a unit and the transform must
    fix the chart origin."""
    _check_chart(chart)
    if G.dim != 2:
        raise ValueError("blow-up of map germs is defined in dimension two")
    if order is None:
        order = G.order - 1
    if order < 1:
        raise OrderTooLow("output order must be at least 1")
    if G.order < order + 1:
        raise OrderTooLow(
            "input known to order %d cannot determine the transform at order %d;"
            " need order %d" % (G.order, order, order + 1)
        )
    base_slot = 0 if chart == "t_x" else 1
    slope_slot = 1 - base_slot
    # In the output layout, variable 0 is the slope and variable 1 the base.
    A = _push_plane(G.components[base_slot], chart)
    B = _push_plane(G.components[slope_slot], chart)
    den = A.divide_by_variable(1)
    if not den.constant_term():
        raise NotUnitDenominator(
            "base component vanishes to second order along the chart center"
        )
    num = B.divide_by_variable(1)
    if num.constant_term():
        raise ChartNotInvariant(
            "transform does not fix the chart origin (constant slope term %s)"
            % num.constant_term()
        )
    slope_comp = (num * den.inverse_unit()).truncate(order)
    base_comp = A.truncate(order)
    return DiffeoGerm([slope_comp, base_comp])


def blowup_vector_field_axis(
    X: VectorFieldGerm,
    axis: int = 2,
    chart: str = "t_x",
    order: Optional[int] = None,
    divide_out: bool = False,
) -> VectorFieldGerm:
    """Pullback of a three-dimensional field under the blow-up of an
    invariant axis, in one chart, with coordinates (slope, base, axis).

    For chart t_x with transverse pair (x, y) and y = t x the slope
    component is the quotient-rule expression (y' x - y x')/x^2, which is a
    germ exactly when both transverse components of X lie in the ideal of
    the transverse variables (the blown-up axis is invariant).  With
    divide_out=True the common monomial factor of the three components is
    removed, so tangent fields with cleaner coefficients can be compared."""
    _check_chart(chart)
    if X.dim != 3:
        raise ValueError("axis blow-up is defined in dimension three")
    if axis not in (0, 1, 2):
        raise ValueError("axis index out of range")
    if order is None:
        order = X.order - 1
    if order < 1:
        raise OrderTooLow("output order must be at least 1")
    if X.order < order + 1:
        raise OrderTooLow(
            "input known to order %d cannot determine the transform at order %d;"
            " need order %d" % (X.order, order, order + 1)
        )
    trans = [i for i in range(3) if i != axis]
    v1, v2 = trans
    for i in trans:
        for ex in X.components[i].coeffs:
            if ex[v1] == 0 and ex[v2] == 0:
                raise ChartNotInvariant(
                    "component %d has an axis-only term %r; the blown-up axis"
                    " is not invariant" % (i, ex)
                )
    base_src = v1 if chart == "t_x" else v2
    slope_src = v2 if chart == "t_x" else v1

    # Output layout: slot 0 slope, slot 1 base, slot 2 axis.
    def push_field_component(s):
        out = {}
        for ex, c in s.coeffs.items():
            i, j = ex[base_src], ex[slope_src]
            nex = [0, 0, 0]
            nex[0] = j
            nex[1] = i + j
            nex[2] = ex[axis]
            key = tuple(nex)
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
        return TruncatedSeries(3, 2 * s.order, out)

    comp_base = push_field_component(X.components[base_src])
    comp_slope_src = push_field_component(X.components[slope_src])
    comp_axis = push_field_component(X.components[axis])

    P = comp_slope_src.divide_by_variable(1)
    Q = comp_base.divide_by_variable(1)
    slope_out = P - Q.multiply_by_variable(0)
    comps = [slope_out.truncate(order), comp_base.truncate(order), comp_axis.truncate(order)]

    if divide_out:
        common = None
        for comp in comps:
            for ex in comp.coeffs:
                common = ex if common is None else tuple(
                    min(a, b) for a, b in zip(common, ex)
                )
        if common and any(common):
            comps = [
                comp if comp.is_zero() else _divide_monomial(comp, common)
                for comp in comps
            ]
    return VectorFieldGerm(comps)


def _divide_monomial(s: TruncatedSeries, exponents) -> TruncatedSeries:
    out = s
    for idx, p in enumerate(exponents):
        if p:
            out = out.divide_by_variable(idx, p)
    return out
