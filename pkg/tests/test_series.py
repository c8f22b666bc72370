"""Truncated power series and formal diffeomorphism germs."""

import random
from fractions import Fraction

import pytest

from germflow.errors import DimensionMismatch, NotInvertible, NotUnitDenominator
from germflow.scalars import GaussianRational, TauScalar
from germflow.series import (
    DiffeoGerm,
    TruncatedSeries,
    compose_map,
    invert,
    render_series,
)


def rand_series(rng, dim, order, terms=6, tau=False):
    s = TruncatedSeries.zero(dim, order)
    for _ in range(terms):
        expo = tuple(rng.randint(0, order) for _ in range(dim))
        if sum(expo) > order:
            continue
        coeff = GaussianRational(rng.randint(-4, 4), rng.randint(-2, 2))
        if tau and rng.random() < 0.3:
            coeff = TauScalar.coerce(coeff) * TauScalar.tau(rng.choice((-1, 1)))
        s = s + TruncatedSeries.monomial(coeff, expo, order)
    return s


def test_ring_axioms_random():
    rng = random.Random(5)
    for _ in range(60):
        dim = rng.choice((2, 3))
        a = rand_series(rng, dim, 6)
        b = rand_series(rng, dim, 6)
        c = rand_series(rng, dim, 6)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)


def test_truncation_drops_high_degrees():
    x = TruncatedSeries.variable(0, 2, 8)
    s = (TruncatedSeries.constant(1, 2, 8) + x) ** 8
    t = s.truncate(3)
    assert t.order == 3
    assert t.coefficient((3, 0)) == TauScalar.from_rational(56)
    assert t.coefficient((4, 0)) == TauScalar.zero()


def test_dimension_mismatch_raises():
    a = TruncatedSeries.variable(0, 2, 4)
    b = TruncatedSeries.variable(0, 3, 4)
    with pytest.raises(DimensionMismatch):
        a + b


def test_partial_derivative():
    x = TruncatedSeries.variable(0, 2, 6)
    y = TruncatedSeries.variable(1, 2, 6)
    s = x ** 3 * y + y ** 2
    d = s.partial(0)
    assert d.coefficient((2, 1)) == TauScalar.from_rational(3)
    assert d.coefficient((0, 2)) == TauScalar.zero()
    # d/dy
    d2 = s.partial(1)
    assert d2.coefficient((3, 0)) == TauScalar.from_rational(1)
    assert d2.coefficient((0, 1)) == TauScalar.from_rational(2)


def test_compose_matches_evaluation_when_exact():
    # degree caps chosen so the composition never truncates; evaluating
    # it then equals composing the evaluations
    rng = random.Random(17)
    for _ in range(30):
        order = 12
        f = rand_series(rng, 2, 3, terms=4).with_order(order)
        g1 = rand_series(rng, 2, 2, terms=3).with_order(order)
        g1 = g1 - TruncatedSeries.constant(g1.constant_term(), 2, order)
        g2 = rand_series(rng, 2, 2, terms=3).with_order(order)
        g2 = g2 - TruncatedSeries.constant(g2.constant_term(), 2, order)
        h = f.compose((g1, g2))
        pt = (GaussianRational(Fraction(1, 7), 0), GaussianRational(0, Fraction(1, 9)))
        inner = (g1.eval_gaussian(pt), g2.eval_gaussian(pt))
        assert h.eval_gaussian(pt) == f.eval_gaussian(inner)


def test_compose_exact_on_polynomials():
    # (x + y^2) composed with (x + y, y) gives x + y + y^2 exactly
    f = TruncatedSeries.variable(0, 2, 6) + TruncatedSeries.variable(1, 2, 6) ** 2
    gx = TruncatedSeries.variable(0, 2, 6) + TruncatedSeries.variable(1, 2, 6)
    gy = TruncatedSeries.variable(1, 2, 6)
    h = f.compose((gx, gy))
    expected = gx + TruncatedSeries.variable(1, 2, 6) ** 2
    assert h == expected


def test_divide_by_variable():
    x = TruncatedSeries.variable(0, 2, 6)
    y = TruncatedSeries.variable(1, 2, 6)
    s = x * y + x ** 2
    q = s.divide_by_variable(0)
    # germs are exact polynomial data, so the quotient keeps the order
    assert q == y + x
    with pytest.raises(NotUnitDenominator):
        y.divide_by_variable(0)


def test_inverse_unit():
    one = TruncatedSeries.constant(1, 2, 6)
    x = TruncatedSeries.variable(0, 2, 6)
    u = one + x
    v = u.inverse_unit()
    assert (u * v) == one
    with pytest.raises(NotUnitDenominator):
        x.inverse_unit()


def test_geometric_series_coefficients():
    one = TruncatedSeries.constant(1, 2, 8)
    x = TruncatedSeries.variable(0, 2, 8)
    inv = (one - x).inverse_unit()
    for k in range(9):
        assert inv.coefficient((k, 0)) == TauScalar.one()


def test_render_series_ordering():
    x = TruncatedSeries.variable(0, 2, 4)
    y = TruncatedSeries.variable(1, 2, 4)
    s = y ** 2 + x - x * y
    assert render_series(s) == "x - x*y + y^2"
    assert render_series(TruncatedSeries.zero(2, 3)) == "0"


def test_render_with_names():
    t = TruncatedSeries.variable(0, 2, 4)
    x = TruncatedSeries.variable(1, 2, 4)
    s = t + t ** 2 * x
    assert render_series(s, ("t", "x")) == "t + t^2*x"


def test_diffeo_compose_inverse_round_trip():
    rng = random.Random(31)
    for _ in range(25):
        order = 6
        x = TruncatedSeries.variable(0, 2, order)
        y = TruncatedSeries.variable(1, 2, order)
        # invertible linear part plus random higher terms
        gx = x + rand_series(rng, 2, order) * x * y
        gy = y + rand_series(rng, 2, order) * y ** 2
        g = DiffeoGerm([gx, gy])
        ginv = g.inverse()
        assert g.compose(ginv).is_identity()
        assert ginv.compose(g).is_identity()


def test_diffeo_rejects_constant_term():
    one = TruncatedSeries.constant(1, 2, 4)
    x = TruncatedSeries.variable(0, 2, 4)
    y = TruncatedSeries.variable(1, 2, 4)
    with pytest.raises(Exception):
        DiffeoGerm([x + one, y])


def test_diffeo_rejects_degenerate_linear_part():
    x = TruncatedSeries.variable(0, 2, 4)
    y = TruncatedSeries.variable(1, 2, 4)
    with pytest.raises(NotInvertible):
        DiffeoGerm([x + y, x + y])


def test_compose_map_and_invert_helpers():
    x = TruncatedSeries.variable(0, 2, 6)
    y = TruncatedSeries.variable(1, 2, 6)
    g = DiffeoGerm([x + y ** 2, y])
    assert compose_map(g, invert(g)).is_identity()


def test_tangent_identity_flag():
    x = TruncatedSeries.variable(0, 2, 5)
    y = TruncatedSeries.variable(1, 2, 5)
    assert DiffeoGerm([x + y ** 2, y]).is_tangent_to_identity()
    assert not DiffeoGerm([x.scale(2), y]).is_tangent_to_identity()


def test_eval_gaussian_exact():
    x = TruncatedSeries.variable(0, 2, 6)
    y = TruncatedSeries.variable(1, 2, 6)
    s = x ** 2 + y.scale(GaussianRational(0, 1))
    val = s.eval_gaussian((GaussianRational(Fraction(1, 2), 0), GaussianRational(2, 0)))
    assert val == GaussianRational(Fraction(1, 4), 2)
