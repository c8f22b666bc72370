"""Vector field germs: spectra, the two-sided line condition, formal flows,
periods, and exact orbit counting."""

import random
from fractions import Fraction

import pytest

from germflow.errors import Degenerate, NotDiagonal, NotTangentToIdentity, OrderTooLow
from germflow.germs import (
    VectorFieldGerm,
    condition_star,
    eigen_data,
    exp_time_one,
    formal_period,
    infinitesimal_generator,
    is_tangent,
    iterate,
    orbit_cardinality,
)
from germflow.parsing import parse_map, parse_vector_field
from germflow.scalars import GaussianRational, TauScalar
from germflow.series import DiffeoGerm, TruncatedSeries


def test_eigen_data_reads_diagonal():
    X = parse_vector_field("-x d/dx - 3*y d/dy + z d/dz", 4)
    data = eigen_data(X)
    assert [v for v in data.eigenvalues] == [
        GaussianRational(-1, 0),
        GaussianRational(-3, 0),
        GaussianRational(1, 0),
    ]


def test_eigen_data_rejects_rotation_coupling():
    X = parse_vector_field("y d/dx - x d/dy + z d/dz", 4)
    with pytest.raises(NotDiagonal):
        eigen_data(X)


def test_eigen_data_rejects_zero_eigenvalue():
    X = parse_vector_field("x d/dx + 0 d/dy + z d/dz", 4)
    with pytest.raises(Degenerate):
        eigen_data(X)


def test_condition_star_main_spectrum():
    X = parse_vector_field("-x d/dx - 3*y d/dy + z d/dz", 4)
    verdict = condition_star(eigen_data(X))
    assert verdict.holds
    assert verdict.isolated_index == 2


def test_condition_star_rejects_one_sided():
    X = parse_vector_field("x d/dx + 2*y d/dy + 3*z d/dz", 4)
    assert not condition_star(eigen_data(X)).holds


def test_condition_star_complex_line():
    # eigenvalues i, 2i, -i sit on one real line through the origin with
    # -i alone on its side
    X = parse_vector_field("i*x d/dx + 2*i*y d/dy - i*z d/dz", 4)
    verdict = condition_star(eigen_data(X))
    assert verdict.holds
    assert verdict.isolated_index == 2


def test_condition_star_rejects_off_line():
    X = parse_vector_field("x d/dx + i*y d/dy - z d/dz", 4)
    assert not condition_star(eigen_data(X)).holds


def test_iterate_matches_repeated_composition():
    g = parse_map("(x + y^2, y)", 8)
    h = g
    for n in range(2, 6):
        h = h.compose(g)
        assert iterate(g, n) == h


def test_formal_period_rotation():
    assert formal_period(parse_map("(i*x, -y)", 4)) == 4
    assert formal_period(parse_map("(-x, -y)", 4)) == 2
    assert formal_period(parse_map("(x, y)", 4)) == 1


def test_formal_period_none_for_parabolic():
    assert formal_period(parse_map("(x + y^2, y)", 6), pmax=24) is None


def test_formal_period_respects_pmax():
    # period 6 rotation is invisible when pmax stops at 5
    g = parse_map("(-x, y)", 4)
    assert formal_period(g, pmax=1) is None
    assert formal_period(g, pmax=2) == 2


def test_orbit_counts_parabolic_family():
    # orbit of (0, 1/m) under (x + y^2, y): x climbs by 1/m^2 per step,
    # so 2*m^2 + 1 lattice points fit in the closed unit polydisc
    g = parse_map("(x + y^2, y)", 6)
    for m in range(2, 6):
        out = orbit_cardinality(g, (0, Fraction(1, m)), 1)
        assert not out.escaped
        assert out.count == 2 * m * m + 1


def test_orbit_outside_disc_is_empty():
    g = parse_map("(x + y^2, y)", 6)
    out = orbit_cardinality(g, (3, 0), 1)
    assert out.count == 0


def test_orbit_escape_budget():
    g = parse_map("(x + y^2, y)", 6)
    out = orbit_cardinality(g, (0, Fraction(1, 10)), 1, cap=20)
    assert out.escaped
    assert out.count == 20


def test_orbit_periodic_is_finite():
    g = parse_map("(i*x, -y)", 4)
    out = orbit_cardinality(g, (Fraction(1, 2), Fraction(1, 2)), 1)
    assert not out.escaped
    assert out.count == 4


def test_exp_time_one_nilpotent_shear():
    # y^2 d/dx integrates to the shear (x + y^2, y)
    X = parse_vector_field("y^2 d/dx + 0 d/dy", 6, dim=2)
    phi = exp_time_one(X)
    assert phi == parse_map("(x + y^2, y)", 6)


def test_exp_time_one_conserves_monomial():
    # x*y*(y d/dy - x d/dx) has x*y as a first integral, so the time-one
    # map multiplies x and y by reciprocal units
    X = parse_vector_field("-x^2*y d/dx + x*y^2 d/dy", 10, dim=2)
    phi = exp_time_one(X, order=10)
    xy = TruncatedSeries.variable(0, 2, 10) * TruncatedSeries.variable(1, 2, 10)
    assert xy.compose(tuple(phi.components)) == xy


def test_exp_requires_vanishing_linear_part():
    X = parse_vector_field("x d/dx + y d/dy", 4, dim=2)
    with pytest.raises(OrderTooLow):
        exp_time_one(X)


def test_log_requires_tangent_to_identity():
    with pytest.raises(NotTangentToIdentity):
        infinitesimal_generator(parse_map("(2*x, y)", 4))


def test_exp_log_round_trip_random():
    rng = random.Random(71)
    order = 8
    for _ in range(30):
        comps = []
        for var in range(2):
            s = TruncatedSeries.zero(2, order)
            for _ in range(3):
                e = (rng.randint(0, 3), rng.randint(0, 3))
                if sum(e) < 2 or sum(e) > order:
                    continue
                coeff = GaussianRational(rng.randint(-3, 3), rng.randint(-1, 1))
                s = s + TruncatedSeries.monomial(coeff, e, order)
            comps.append(s)
        X = VectorFieldGerm(comps)
        phi = exp_time_one(X, order=order)
        back = infinitesimal_generator(phi, order=order)
        assert is_tangent(back, X)


def test_log_exp_round_trip_random():
    rng = random.Random(72)
    order = 8
    x = TruncatedSeries.variable(0, 2, order)
    y = TruncatedSeries.variable(1, 2, order)
    for _ in range(30):
        hx = x
        hy = y
        for _ in range(3):
            e = (rng.randint(0, 3), rng.randint(0, 3))
            if sum(e) < 2 or sum(e) > order:
                continue
            coeff = GaussianRational(rng.randint(-2, 2), 0)
            if rng.random() < 0.5:
                hx = hx + TruncatedSeries.monomial(coeff, e, order)
            else:
                hy = hy + TruncatedSeries.monomial(coeff, e, order)
        h = DiffeoGerm([hx, hy])
        V = infinitesimal_generator(h, order=order)
        again = exp_time_one(V, order=order)
        assert again == h


def test_apply_to_is_a_derivation():
    rng = random.Random(73)
    X = parse_vector_field("-x d/dx - 3*y d/dy + z d/dz", 8)
    for _ in range(10):
        def sample():
            s = TruncatedSeries.zero(3, 8)
            for _ in range(4):
                e = tuple(rng.randint(0, 2) for _ in range(3))
                s = s + TruncatedSeries.monomial(rng.randint(-3, 3), e, 8)
            return s
        f, g = sample(), sample()
        left = X.apply_to(f * g)
        right = X.apply_to(f) * g + f * X.apply_to(g)
        assert left == right.truncate(left.order)
