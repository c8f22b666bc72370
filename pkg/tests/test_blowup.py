"""Blow-ups of plane diffeomorphisms and of three dimensional fields along
the distinguished axis, in both standard charts."""

import random

import pytest

from germflow.blowup import blowup_diffeo, blowup_vector_field_axis, chart_names
from germflow.errors import ChartNotInvariant, NotUnitDenominator, OrderTooLow
from germflow.germs import VectorFieldGerm
from germflow.parsing import parse_map, parse_vector_field
from germflow.scalars import GaussianRational, TauScalar
from germflow.series import DiffeoGerm, TruncatedSeries


def mono3(coeff, e, order):
    return TruncatedSeries.monomial(coeff, e, order)


def test_chart_names():
    assert chart_names("t_x") == ("t", "x")
    assert chart_names("s_y") == ("s", "y")
    assert chart_names("t_x", dim=3) == ("t", "x", "z")
    assert chart_names("s_y", dim=3) == ("s", "y", "z")


def test_blowup_identity():
    g = blowup_diffeo(parse_map("(x, y)", 7), order=6)
    assert g.is_identity()


def test_blowup_parabolic_golden():
    g = blowup_diffeo(parse_map("(x + y^2, y)", 11), order=10)
    expected = parse_map(
        "(t - t^3*x + t^5*x^2 - t^7*x^3 + t^9*x^4, x + t^2*x^2)", 10, frame=("t", "x")
    )
    assert g == expected


def test_blowup_preserves_fibered_product():
    # the second component of (x + y^2, y) is y itself, so upstairs the
    # product t x (the pullback of y) is preserved exactly
    g = blowup_diffeo(parse_map("(x + y^2, y)", 9), order=8)
    t = TruncatedSeries.variable(0, 2, 8)
    x = TruncatedSeries.variable(1, 2, 8)
    assert g.components[0] * g.components[1] == t * x


def test_blowup_other_chart_golden():
    g = blowup_diffeo(parse_map("(x + y^2, y)", 7), chart="s_y", order=6)
    expected = parse_map("(s + y, y)", 6, frame=("s", "y"))
    assert g == expected


def test_blowup_conjugacy_random():
    # sigma(t, x) = (x, t x) intertwines the lift with the original map
    rng = random.Random(97)
    for _ in range(20):
        order = 7
        x = TruncatedSeries.variable(0, 2, order)
        y = TruncatedSeries.variable(1, 2, order)
        ax = x.scale(rng.choice((1, 2, -1)))
        by = y.scale(rng.randint(0, 2))
        A = ax + by
        B = y.scale(rng.choice((1, 3)))
        for _ in range(3):
            e = (rng.randint(0, 3), rng.randint(0, 3))
            if sum(e) < 2 or sum(e) > order:
                continue
            coeff = GaussianRational(rng.randint(-2, 2), 0)
            if rng.random() < 0.5:
                A = A + mono3(coeff, e, order)
            else:
                B = B + mono3(coeff, e, order) * y
        G = DiffeoGerm([A, B])
        lifted = blowup_diffeo(G, order=order - 1)
        n = order - 1
        t_up = TruncatedSeries.variable(0, 2, order)
        x_up = TruncatedSeries.variable(1, 2, order)
        sigma = (x_up, t_up * x_up)
        lhs_first = lifted.components[1]
        lhs_second = (lifted.components[0] * lifted.components[1]).truncate(n)
        assert lhs_first == A.compose(sigma).truncate(n)
        assert lhs_second == B.compose(sigma).truncate(n)


def test_blowup_requires_one_extra_order():
    G = parse_map("(x + y^2, y)", 6)
    with pytest.raises(OrderTooLow):
        blowup_diffeo(G, order=6)


def test_blowup_chart_not_invariant():
    # the x axis direction is not fixed when the second component picks up
    # a first order x term
    G = parse_map("(x, x + y)", 6)
    with pytest.raises(ChartNotInvariant):
        blowup_diffeo(G, order=5)


def test_blowup_degenerate_denominator():
    G = parse_map("(y, x)", 6)
    with pytest.raises(NotUnitDenominator):
        blowup_diffeo(G, order=5)


MAIN5 = "-(x - (1/tau)*y^2*z^5) d/dx - 3*y d/dy + z d/dz"
MAIN2 = "-(x - (1/tau)*y^2*z^2) d/dx - 3*y d/dy + z d/dz"


def expected_lift(l, order):
    # (-2t - tau^-1 t^3 x z^l, -x + tau^-1 t^2 x^2 z^l, z)
    minus_tau_inv = TauScalar.tau(-1) * TauScalar.from_rational(-1)
    comp_t = mono3(-2, (1, 0, 0), order) + mono3(minus_tau_inv, (3, 1, l), order)
    comp_x = mono3(-1, (0, 1, 0), order) + mono3(TauScalar.tau(-1), (2, 2, l), order)
    comp_z = mono3(1, (0, 0, 1), order)
    return (comp_t, comp_x, comp_z)


def test_axis_blowup_quintic_golden():
    X = parse_vector_field(MAIN5, 12, dim=3)
    lifted = blowup_vector_field_axis(X, order=10)
    assert tuple(lifted.components) == expected_lift(5, 10)


def test_axis_blowup_quadratic_golden():
    X = parse_vector_field(MAIN2, 9, dim=3)
    lifted = blowup_vector_field_axis(X, order=8)
    assert tuple(lifted.components) == expected_lift(2, 8)


def test_axis_blowup_other_chart():
    X = parse_vector_field(MAIN5, 12, dim=3)
    lifted = blowup_vector_field_axis(X, chart="s_y", order=10)
    tau_inv = TauScalar.tau(-1)
    comp_s = mono3(2, (1, 0, 0), 10) + mono3(tau_inv, (0, 1, 5), 10)
    comp_y = mono3(-3, (0, 1, 0), 10)
    comp_z = mono3(1, (0, 0, 1), 10)
    assert tuple(lifted.components) == (comp_s, comp_y, comp_z)


def test_axis_blowup_pushforward_identity():
    # the lift satisfies x tdot + t xdot = ydot pulled back through
    # sigma(t, x, z) = (x, t x, z), and the base and axis components are
    # plain pullbacks
    rng = random.Random(59)
    order = 9
    x = TruncatedSeries.variable(0, 3, order)
    y = TruncatedSeries.variable(1, 3, order)
    z = TruncatedSeries.variable(2, 3, order)
    for _ in range(12):
        def in_ideal():
            s = TruncatedSeries.zero(3, order)
            for _ in range(4):
                e = (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 3))
                if e[0] + e[1] == 0 or sum(e) > order - 1:
                    continue
                s = s + mono3(GaussianRational(rng.randint(-3, 3), 0), e, order)
            return s
        v1 = x.scale(rng.choice((-2, -1, 1))) + in_ideal()
        v2 = y.scale(rng.choice((-3, 1))) + in_ideal()
        v3 = z + in_ideal() * z
        X = VectorFieldGerm([v1, v2, v3])
        n = order - 1
        lifted = blowup_vector_field_axis(X, order=n)
        t_up = TruncatedSeries.variable(0, 3, order)
        x_up = TruncatedSeries.variable(1, 3, order)
        z_up = TruncatedSeries.variable(2, 3, order)
        sigma = (x_up, t_up * x_up, z_up)
        tdot, xdot, zdot = lifted.components
        assert xdot == v1.compose(sigma).truncate(n)
        assert zdot == v3.compose(sigma).truncate(n)
        lhs = (x_up.truncate(n) * tdot + t_up.truncate(n) * xdot).truncate(n)
        assert lhs == v2.compose(sigma).truncate(n)


def test_axis_blowup_chart_not_invariant():
    X = parse_vector_field("-(x + z^2) d/dx - 3*y d/dy + z d/dz", 8, dim=3)
    with pytest.raises(ChartNotInvariant):
        blowup_vector_field_axis(X, order=6)


def test_axis_blowup_divide_out():
    # all lifted components share the monomial factor x, which divide_out
    # removes
    order = 8
    x = TruncatedSeries.variable(0, 3, order)
    y = TruncatedSeries.variable(1, 3, order)
    z = TruncatedSeries.variable(2, 3, order)
    X = VectorFieldGerm([x * x, x * y, x * z])
    plain = blowup_vector_field_axis(X, order=6)
    reduced = blowup_vector_field_axis(X, order=6, divide_out=True)
    t6 = TruncatedSeries.zero(3, 6)
    x6 = TruncatedSeries.variable(1, 3, 6)
    z6 = TruncatedSeries.variable(2, 3, 6)
    assert tuple(plain.components) == (t6, x6 * x6, x6 * z6)
    assert tuple(reduced.components) == (t6, x6, z6)
