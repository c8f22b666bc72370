"""Holonomy generators of the distinguished axis, computed exactly.

For a field in the normal form

    X = -m1 [x1 (1 + a1) + x2 b1] d/dx1  -  m2 x2 (1 + a2) d/dx2  +  x3 d/dx3

with positive integers m1, m2, the loop x3 = gamma(t) = e^{2 pi i t} around
the axis lifts to leaves as a pair of series Gamma_j(t, x1, x2) whose
coefficients satisfy a triangular hierarchy of linear ODEs

    dc/dt = -tau m c + tau * forcing,      tau = 2 pi i,

with forcing assembled from coefficients of strictly smaller total degree
(and, in the first component, from same-degree second-component entries that
are solved first).  Every coefficient stays inside the class of finite sums
p_k(t) e^{2 pi i k t} with polynomial p_k, so the hierarchy is solved exactly
and the holonomy generator is Gamma evaluated at t = 1.

Closure of that class needs the axis-variable dependence of a1 and a2 to sit
inside the ideal (x1, x2): a monomial of a1 or a2 free of x1, x2 would make a
coefficient equation non-autonomous in itself and push the solution outside
finite exponential sums.  Such inputs are rejected as unsupported coupling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    Degenerate,
    DimensionMismatch,
    NonIntegerRatio,
    NotStarGerm,
    UnsupportedCoupling,
)
from .germs import StarVerdict, VectorFieldGerm, condition_star, EigenData
from .scalars import GaussianRational, TauScalar, render_tau_scalar
from .series import DiffeoGerm, TruncatedSeries


class ExpPoly:
    """A finite sum over integer frequencies k of p_k(t) e^{2 pi i k t} with
    polynomial p_k over the tau-scalars.

    terms maps k to a coefficient map {power of t: TauScalar}.  Closed under
    sum, product and d/dt; evaluation at t = 1 collapses every exponential to
    1 and is how holonomy coefficients become scalars."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, poly in terms.items():
                p = {}
                for d, c in poly.items():
                    c = TauScalar.coerce(c)
                    if c:
                        p[int(d)] = c
                if p:
                    clean[int(k)] = p
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    @staticmethod
    def _raw(terms):
        obj = ExpPoly.__new__(ExpPoly)
        object.__setattr__(obj, "terms", terms)
        return obj

    @staticmethod
    def zero() -> "ExpPoly":
        return ExpPoly._raw({})

    @staticmethod
    def constant(value) -> "ExpPoly":
        v = TauScalar.coerce(value)
        if not v:
            return ExpPoly.zero()
        return ExpPoly._raw({0: {0: v}})

    @staticmethod
    def exponential(freq: int, coeff=1) -> "ExpPoly":
        """coeff * e^{2 pi i freq t}."""
        c = TauScalar.coerce(coeff)
        if not c:
            return ExpPoly.zero()
        return ExpPoly._raw({freq: {0: c}})

    @staticmethod
    def monomial(freq: int, t_power: int, coeff=1) -> "ExpPoly":
        c = TauScalar.coerce(coeff)
        if not c:
            return ExpPoly.zero()
        return ExpPoly._raw({freq: {t_power: c}})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(
            frozenset((k, frozenset(p.items())) for k, p in self.terms.items())
        )

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.constant(other)
        out = {k: dict(p) for k, p in self.terms.items()}
        for k, poly in other.terms.items():
            tgt = out.setdefault(k, {})
            for d, c in poly.items():
                s = tgt.get(d)
                s = c if s is None else s + c
                if s:
                    tgt[d] = s
                else:
                    tgt.pop(d, None)
            if not tgt:
                out.pop(k)
        return ExpPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly._raw(
            {k: {d: -c for d, c in p.items()} for k, p in self.terms.items()}
        )

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.constant(other)
        return self + (-other)

    def scale(self, scalar) -> "ExpPoly":
        s = TauScalar.coerce(scalar)
        if not s:
            return ExpPoly.zero()
        return ExpPoly._raw(
            {k: {d: c * s for d, c in p.items()} for k, p in self.terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            return self.scale(other)
        out = {}
        for k1, p1 in self.terms.items():
            for k2, p2 in other.terms.items():
                k = k1 + k2
                tgt = out.setdefault(k, {})
                for d1, c1 in p1.items():
                    for d2, c2 in p2.items():
                        d = d1 + d2
                        prod = c1 * c2
                        s = tgt.get(d)
                        s = prod if s is None else s + prod
                        if s:
                            tgt[d] = s
                        else:
                            tgt.pop(d, None)
                if not tgt:
                    out.pop(k, None)
        return ExpPoly._raw({k: p for k, p in out.items() if p})

    __rmul__ = __mul__

    def shift_frequency(self, delta: int) -> "ExpPoly":
        """Multiply by e^{2 pi i delta t}."""
        return ExpPoly._raw({k + delta: dict(p) for k, p in self.terms.items()})

    def derivative(self) -> "ExpPoly":
        """d/dt, using d/dt e^{2 pi i k t} = tau k e^{2 pi i k t}."""
        out = {}
        tau = TauScalar.tau()
        for k, poly in self.terms.items():
            tgt = {}
            for d, c in poly.items():
                if d > 0:
                    s = tgt.get(d - 1)
                    add = c * d
                    s = add if s is None else s + add
                    if s:
                        tgt[d - 1] = s
                    else:
                        tgt.pop(d - 1, None)
                if k != 0:
                    s = tgt.get(d)
                    add = c * tau * k
                    s = add if s is None else s + add
                    if s:
                        tgt[d] = s
                    else:
                        tgt.pop(d, None)
            if tgt:
                out[k] = tgt
        return ExpPoly._raw(out)

    def eval_at_zero(self) -> TauScalar:
        total = TauScalar.zero()
        for poly in self.terms.values():
            c = poly.get(0)
            if c:
                total = total + c
        return total

    def eval_at_one(self) -> TauScalar:
        """t = 1: every exponential is 1, every polynomial sums its
        coefficients."""
        total = TauScalar.zero()
        for poly in self.terms.values():
            for c in poly.values():
                total = total + c
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for k in sorted(self.terms):
            poly = self.terms[k]
            ptxt = []
            for d in sorted(poly):
                c = poly[d]
                ctext = render_tau_scalar(c)
                if d == 0:
                    ptxt.append(ctext)
                else:
                    tpow = "t" if d == 1 else "t^%d" % d
                    if ctext == "1":
                        ptxt.append(tpow)
                    elif ctext == "-1":
                        ptxt.append("-" + tpow)
                    else:
                        if " + " in ctext or " - " in ctext:
                            ctext = "(%s)" % ctext
                        ptxt.append("%s*%s" % (ctext, tpow))
            body = ptxt[0]
            for piece in ptxt[1:]:
                body += (" - " + piece[1:]) if piece.startswith("-") else (" + " + piece)
            if k == 0:
                pieces.append(body)
            else:
                if body == "1":
                    wrapped = ""
                elif body == "-1":
                    wrapped = "-"
                elif " + " in body or " - " in body:
                    wrapped = "(%s)*" % body
                else:
                    wrapped = body + "*"
                pieces.append("%sexp(%d*tau*t)" % (wrapped, k))
        out = pieces[0]
        for piece in pieces[1:]:
            out += (" - " + piece[1:]) if piece.startswith("-") else (" + " + piece)
        return out

    def __repr__(self):
        return "ExpPoly(%r)" % (self.terms,)

    def __str__(self):
        return self.render()


def ode_solve(m: int, forcing: ExpPoly, c0) -> ExpPoly:
    """The unique exponential-polynomial solution of

        dc/dt = -tau m c + tau * forcing,   c(0) = c0,

    for a positive integer m.  Non-resonant frequencies k != -m take a
    polynomial ansatz solved from the top degree down; the resonant frequency
    k = -m integrates to tau * beta * t^{d+1} / (d+1) inside the e^{-2 pi i m t}
    factor; the homogeneous piece matches the initial value."""
    if m <= 0:
        raise ValueError("decay constant m must be a positive integer")
    c0 = TauScalar.coerce(c0)
    tau = TauScalar.tau()
    particular = ExpPoly.zero()
    for k, poly in forcing.terms.items():
        if k != -m:
            # p' + tau (k + m) p = tau q, solved degree by degree downward.
            lam = TauScalar.tau() * (k + m)
            deg = max(poly)
            coeffs = {}
            upper = TauScalar.zero()
            for d in range(deg, -1, -1):
                beta = poly.get(d, TauScalar.zero())
                val = (tau * beta - upper) / lam
                if val:
                    coeffs[d] = val
                upper = val * (d) if d else TauScalar.zero()
                # upper becomes (d) * a_d for the next (lower) degree's p' term
            if coeffs:
                particular = particular + ExpPoly._raw({k: coeffs})
        else:
            # Inside the e^{-2 pi i m t} factor the equation reduces to
            # p' = tau q: integrate each power.
            coeffs = {}
            for d, beta in poly.items():
                coeffs[d + 1] = tau * beta / (d + 1)
            if coeffs:
                particular = particular + ExpPoly._raw({k: coeffs})
    residual0 = c0 - particular.eval_at_zero()
    homogeneous = ExpPoly.exponential(-m, residual0)
    return particular + homogeneous


def eval_at_one(c: ExpPoly) -> TauScalar:
    return c.eval_at_one()


@dataclass(frozen=True)
class HolonomyNormalForm:
    """The data (m1, m2, a1, b1, a2) of the normal form, plus the coordinate
    bookkeeping: transverse holds the original indices that became (x1, x2)
    and axis the original index of the distinguished axis."""

    m1: int
    m2: int
    a1: TruncatedSeries
    b1: TruncatedSeries
    a2: TruncatedSeries
    transverse: tuple
    axis: int
    star: StarVerdict


def _permute_series(s: TruncatedSeries, perm) -> TruncatedSeries:
    """Reindex variables: new variable j is old variable perm[j]."""
    out = {}
    for ex, c in s.coeffs.items():
        out[tuple(ex[p] for p in perm)] = c
    return TruncatedSeries(s.dim, s.order, out)


def normalize_axis(field: VectorFieldGerm, axis: Optional[int] = None) -> HolonomyNormalForm:
    """Bring a three-dimensional germ into the holonomy normal form.

    Requirements checked along the way: the linear part is diagonal except
    for at most one transverse cross term, its diagonal carries the
    eigenvalues, the spectrum satisfies the one-line two-sided condition with
    the isolated eigenvalue on the requested axis, the axis component is
    x3 times a unit (absorbed by rescaling the field), the transverse
    eigenvalue ratios are negative integers, and at most one transverse
    component is coupled, with no axis-only monomials inside a1 or a2."""
    if field.dim != 3:
        raise DimensionMismatch("axis normalization is defined in dimension three")
    m = field.linear_matrix()
    diag = [m[i][i] for i in range(3)]
    for i, d in enumerate(diag):
        if not d:
            raise Degenerate("zero eigenvalue on axis %d" % i)
        if not d.is_gaussian():
            raise Degenerate("eigenvalue on axis %d carries tau" % i)
    eigs = EigenData(tuple(d.as_gaussian() for d in diag))
    star = condition_star(eigs)
    if not star.holds:
        raise NotStarGerm("eigenvalues do not lie on one line with both sides occupied")
    if axis is None:
        axis = star.isolated_index
    elif axis != star.isolated_index:
        raise NotStarGerm(
            "requested axis %d is not the isolated eigenvalue (index %d)"
            % (axis, star.isolated_index)
        )
    t1, t2 = [i for i in range(3) if i != axis]
    # Off-diagonal entries touching the axis must vanish;
    # the transverse block may be triangular but not fully coupled.
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            if (i == axis or j == axis) and m[i][j]:
                raise NotStarGerm(
                    "linear part couples the axis at entry (%d, %d)" % (i, j)
                )
    # A transverse component is coupled when it has a monomial outside the
    # ideal of its own variable.  One coupled component is allowed and is
    # moved into the first slot, where x2 b1 can absorb it.
    dirty1 = any(ex[t1] == 0 for ex in field.components[t1].coeffs)
    dirty2 = any(ex[t2] == 0 for ex in field.components[t2].coeffs)
    if dirty1 and dirty2:
        raise UnsupportedCoupling("coupling present in both transverse components")
    if dirty2:
        t1, t2 = t2, t1
    lam1, lam2, lam3 = eigs.eigenvalues[t1], eigs.eigenvalues[t2], eigs.eigenvalues[axis]
    ms = []
    for lam in (lam1, lam2):
        ratio = lam / lam3
        if not ratio.is_real():
            raise NonIntegerRatio("transverse ratio %s is not real" % ratio)
        r = ratio.re
        if r >= 0 or r.denominator != 1:
            raise NonIntegerRatio("transverse ratio %s is not a negative integer" % r)
        ms.append(int(-r))
    m1, m2 = ms

    perm = (t1, t2, axis)
    comps = [_permute_series(field.components[p], perm) for p in perm]
    order = field.order

    axis_comp = comps[2]
    if any(ex[2] == 0 for ex in axis_comp.coeffs):
        raise NotStarGerm("axis component is not divisible by the axis variable")
    unit = axis_comp.divide_by_variable(2)
    # Rescale X by the unit so the axis component becomes exactly x3;
    # the transverse components are divided by the same unit.
    unit_inv = unit.inverse_unit()
    comp1 = (comps[0] * unit_inv).scale(TauScalar.from_rational(Fraction(-1, m1)))
    comp2 = (comps[1] * unit_inv).scale(TauScalar.from_rational(Fraction(-1, m2)))
    # comp1 = x1 (1 + a1) + x2 b1 and comp2 = x2 (1 + a2).

    a2_coeffs = {}
    for ex, c in comp2.coeffs.items():
        if ex[1] == 0:
            raise UnsupportedCoupling(
                "second transverse component has a term %r outside the (x2) ideal" % (ex,)
            )
        nex = (ex[0], ex[1] - 1, ex[2])
        a2_coeffs[nex] = c
    a2 = TruncatedSeries(3, order, a2_coeffs) - 1

    a1_coeffs = {}
    b1_coeffs = {}
    for ex, c in comp1.coeffs.items():
        if ex[0] > 0:
            a1_coeffs[(ex[0] - 1, ex[1], ex[2])] = c
        elif ex[1] > 0:
            b1_coeffs[(ex[0], ex[1] - 1, ex[2])] = c
        else:
            raise UnsupportedCoupling(
                "first transverse component has a term %r outside the (x1, x2) ideal"
                % (ex,)
            )
    a1 = TruncatedSeries(3, order, a1_coeffs) - 1
    b1 = TruncatedSeries(3, order, b1_coeffs)

    for name, s in (("a1", a1), ("a2", a2)):
        for ex in s.coeffs:
            if ex[0] == 0 and ex[1] == 0:
                raise UnsupportedCoupling(
                    "%s carries an axis-only monomial %r; the coefficient"
                    " hierarchy would leave the exponential-polynomial class"
                    % (name, ex)
                )

    return HolonomyNormalForm(
        m1=m1,
        m2=m2,
        a1=a1,
        b1=b1,
        a2=a2,
        transverse=(t1, t2),
        axis=axis,
        star=star,
    )


class _XPoly:
    """A polynomial in the two transverse variables with ExpPoly
    coefficients, truncated by total degree.  Internal to the lift."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs=None):
        self.order = order
        self.coeffs = {}
        if coeffs:
            for ex, c in coeffs.items():
                if sum(ex) <= order and c:
                    self.coeffs[ex] = c

    @staticmethod
    def zero(order):
        return _XPoly(order)

    @staticmethod
    def constant(c, order):
        out = _XPoly(order)
        if c:
            out.coeffs[(0, 0)] = c
        return out

    def copy(self):
        out = _XPoly(self.order)
        out.coeffs = dict(self.coeffs)
        return out

    def add(self, other):
        out = self.copy()
        for ex, c in other.coeffs.items():
            s = out.coeffs.get(ex)
            s = c if s is None else s + c
            if s:
                out.coeffs[ex] = s
            else:
                out.coeffs.pop(ex, None)
        return out

    def mul(self, other):
        out = _XPoly(self.order)
        for ex1, c1 in self.coeffs.items():
            d1 = ex1[0] + ex1[1]
            for ex2, c2 in other.coeffs.items():
                if d1 + ex2[0] + ex2[1] > self.order:
                    continue
                ex = (ex1[0] + ex2[0], ex1[1] + ex2[1])
                p = c1 * c2
                s = out.coeffs.get(ex)
                s = p if s is None else s + p
                if s:
                    out.coeffs[ex] = s
                else:
                    out.coeffs.pop(ex, None)
        return out

    def shift_frequency(self, delta):
        out = _XPoly(self.order)
        out.coeffs = {ex: c.shift_frequency(delta) for ex, c in self.coeffs.items()}
        return out

    def scale(self, scalar):
        out = _XPoly(self.order)
        for ex, c in self.coeffs.items():
            v = c.scale(scalar)
            if v:
                out.coeffs[ex] = v
        return out

    def coefficient(self, ex):
        return self.coeffs.get(ex, ExpPoly.zero())


def _substitute(series: TruncatedSeries, gamma1: _XPoly, gamma2: _XPoly, order: int) -> _XPoly:
    """Evaluate a 3-variable series at (Gamma1, Gamma2, gamma(t)), where the
    axis variable becomes the frequency shift e^{2 pi i t}."""
    result = _XPoly.zero(order)
    powers1 = {0: _XPoly.constant(ExpPoly.constant(1), order)}
    powers2 = {0: _XPoly.constant(ExpPoly.constant(1), order)}

    def power(cache, base, n):
        got = cache.get(n)
        if got is None:
            got = power(cache, base, n - 1).mul(base)
            cache[n] = got
        return got

    for ex, c in series.coeffs.items():
        p, q, r = ex
        if p + q > order:
            continue
        term = _XPoly.constant(ExpPoly.constant(c), order)
        if p:
            term = term.mul(power(powers1, gamma1, p))
        if q:
            term = term.mul(power(powers2, gamma2, q))
        if r:
            term = term.shift_frequency(r)
        result = result.add(term)
    return result


@dataclass(frozen=True)
class LiftTable:
    """Solved coefficients of the lifted leaves: entries[(component, (i, j))]
    is the ExpPoly coefficient of x1^i x2^j in Gamma_component, components
    numbered 1 and 2, total degree up to order."""

    order: int
    m1: int
    m2: int
    entries: dict

    def entry(self, component: int, exponents) -> ExpPoly:
        return self.entries.get((component, tuple(exponents)), ExpPoly.zero())


def _degree_exponents(d):
    return [(i, d - i) for i in range(d, -1, -1)]


def lift_coefficients(nf: HolonomyNormalForm, order: int) -> LiftTable:
    """Solve the coefficient hierarchy up to the requested transverse order.

    Degrees are processed in increasing order; inside one degree the second
    component is solved first, because the pure-axis part of b1 couples the
    first component to same-degree second-component entries."""
    m1, m2 = nf.m1, nf.m2
    gamma1 = _XPoly.zero(order)
    gamma2 = _XPoly.zero(order)
    entries = {}
    minus_m1 = TauScalar.from_rational(-m1)
    minus_m2 = TauScalar.from_rational(-m2)

    for d in range(1, order + 1):
        # Second component: forcing from Gamma2 * a2(Gamma1, Gamma2, gamma).
        a2_sub = _substitute(nf.a2, gamma1, gamma2, d)
        k2 = gamma2.mul(a2_sub)
        for ex in _degree_exponents(d):
            c0 = 1 if (d == 1 and ex == (0, 1)) else 0
            forcing = k2.coefficient(ex).scale(minus_m2)
            sol = ode_solve(m2, forcing, c0)
            if sol:
                entries[(2, ex)] = sol
                gamma2.coeffs[ex] = sol
        # First component: forcing from Gamma1 * a1(...) + Gamma2 * b1(...),
        # with gamma2 already holding its degree-d entries.
        a1_sub = _substitute(nf.a1, gamma1, gamma2, d)
        b1_sub = _substitute(nf.b1, gamma1, gamma2, d)
        k1 = gamma1.mul(a1_sub).add(gamma2.mul(b1_sub))
        for ex in _degree_exponents(d):
            c0 = 1 if (d == 1 and ex == (1, 0)) else 0
            forcing = k1.coefficient(ex).scale(minus_m1)
            sol = ode_solve(m1, forcing, c0)
            if sol:
                entries[(1, ex)] = sol
                gamma1.coeffs[ex] = sol

    return LiftTable(order=order, m1=m1, m2=m2, entries=entries)


def lift_residual(nf: HolonomyNormalForm, table: LiftTable):
    """Residual of the lifted equations: substitute the solved table back and
    return, per component and multidegree, d/dt Gamma + tau m (Gamma (1+a) + ...)
    which must vanish identically.  Used by tests as an exactness oracle."""
    order = table.order
    gamma1 = _XPoly.zero(order)
    gamma2 = _XPoly.zero(order)
    for (comp, ex), c in table.entries.items():
        (gamma1 if comp == 1 else gamma2).coeffs[ex] = c
    a1_sub = _substitute(nf.a1, gamma1, gamma2, order)
    a2_sub = _substitute(nf.a2, gamma1, gamma2, order)
    b1_sub = _substitute(nf.b1, gamma1, gamma2, order)
    tau = TauScalar.tau()
    rhs1 = gamma1.add(gamma1.mul(a1_sub)).add(gamma2.mul(b1_sub)).scale(tau * (-nf.m1))
    rhs2 = gamma2.add(gamma2.mul(a2_sub)).scale(tau * (-nf.m2))
    residuals = {}
    for d in range(1, order + 1):
        for ex in _degree_exponents(d):
            r1 = table.entry(1, ex).derivative() - rhs1.coefficient(ex)
            r2 = table.entry(2, ex).derivative() - rhs2.coefficient(ex)
            if r1:
                residuals[(1, ex)] = r1
            if r2:
                residuals[(2, ex)] = r2
    return residuals


def holonomy_from_table(table: LiftTable) -> DiffeoGerm:
    """Evaluate the lift at t = 1 and assemble the transverse return map."""
    comps = []
    for comp in (1, 2):
        coeffs = {}
        for (c, ex), poly in table.entries.items():
            if c != comp:
                continue
            val = poly.eval_at_one()
            if val:
                coeffs[ex] = val
        comps.append(TruncatedSeries(2, table.order, coeffs))
    return DiffeoGerm(comps)


def holonomy_generator(
    field: VectorFieldGerm,
    axis: Optional[int] = None,
    order: Optional[int] = None,
) -> DiffeoGerm:
    """Holonomy generator of the distinguished axis of a normal-form-eligible
    field, as a transverse map germ in the normalized coordinates (x1, x2),
    truncated at the requested transverse total degree."""
    nf = normalize_axis(field, axis)
    if order is None:
        order = field.order
    table = lift_coefficients(nf, order)
    return holonomy_from_table(table)
