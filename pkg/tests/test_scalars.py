"""Exact scalar arithmetic: Gaussian rationals and tau polynomials."""

import random
from fractions import Fraction

import mpmath
import pytest

from germflow.errors import NotMonomial
from germflow.scalars import GaussianRational, I, TauScalar, render_gaussian, render_tau_scalar


def test_gaussian_field_axioms_random():
    rng = random.Random(11)
    for _ in range(200):
        a = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                             Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        b = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                             Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        c = GaussianRational(rng.randint(-4, 4), rng.randint(-4, 4))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a - a == GaussianRational(0, 0)
        if b != GaussianRational(0, 0):
            assert (a * b) / b == a


def test_gaussian_i_squares_to_minus_one():
    assert I * I == GaussianRational(-1, 0)
    assert I.conjugate() == GaussianRational(0, -1)
    assert (I * I.conjugate()).re == 1


def test_gaussian_norm_and_real():
    g = GaussianRational(Fraction(3, 5), Fraction(-4, 5))
    assert g.norm_sq() == 1
    assert not g.is_real()
    assert GaussianRational(7, 0).is_real()


def test_render_gaussian_forms():
    assert render_gaussian(GaussianRational(0, 0)) == "0"
    assert render_gaussian(GaussianRational(Fraction(1, 2), 0)) == "1/2"
    assert render_gaussian(GaussianRational(0, 1)) == "i"
    assert render_gaussian(GaussianRational(0, -1)) == "-i"
    assert render_gaussian(GaussianRational(1, 1)) in ("1 + i", "1+i")


def test_tau_scalar_ring_random():
    rng = random.Random(23)

    def sample():
        s = TauScalar.zero()
        for _ in range(rng.randint(0, 3)):
            s = s + TauScalar.tau(rng.randint(-2, 2)) * TauScalar.coerce(
                GaussianRational(rng.randint(-5, 5), rng.randint(-5, 5))
            )
        return s
    for _ in range(200):
        a, b, c = sample(), sample(), sample()
        assert a + b == b + a
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a - a == TauScalar.zero()


def test_tau_powers_multiply_exactly():
    assert TauScalar.tau() * TauScalar.tau(-1) == TauScalar.one()
    assert TauScalar.tau(2) * TauScalar.tau(3) == TauScalar.tau(5)


def test_tau_monomial_inverse():
    s = TauScalar.tau(3) * TauScalar.coerce(GaussianRational(0, Fraction(2, 7)))
    assert s.is_monomial()
    assert s * s.inverse() == TauScalar.one()
    mixed = TauScalar.one() + TauScalar.tau()
    assert not mixed.is_monomial()
    with pytest.raises(NotMonomial):
        mixed.inverse()


def test_tau_gaussian_round_trip():
    s = TauScalar.coerce(GaussianRational(Fraction(5, 3), -2))
    assert s.is_gaussian()
    assert s.as_gaussian() == GaussianRational(Fraction(5, 3), -2)
    assert not TauScalar.tau().is_gaussian()


def test_numeric_eval_matches_mpmath():
    # tau - 1/2 evaluated numerically is -1/2 + 2*pi*i
    s = TauScalar.tau() - TauScalar.from_rational(Fraction(1, 2))
    val = s.numeric_eval(25)
    with mpmath.workdps(30):
        expected = mpmath.mpc(-0.5, 0) + 2 * mpmath.pi * mpmath.mpc(0, 1)
        assert abs(val - expected) < mpmath.mpf(10) ** (-20)


def test_numeric_eval_negative_power():
    s = TauScalar.tau(-1)
    val = s.numeric_eval(20)
    with mpmath.workdps(25):
        expected = 1 / (2 * mpmath.pi * mpmath.mpc(0, 1))
        assert abs(val - expected) < mpmath.mpf(10) ** (-15)


def test_render_tau_scalar():
    s = TauScalar.tau(-1) + TauScalar.from_rational(2)
    text = render_tau_scalar(s)
    assert "tau^-1" in text and "2" in text
    assert render_tau_scalar(TauScalar.zero()) == "0"


def test_constant_part():
    s = TauScalar.tau() + TauScalar.from_rational(Fraction(3, 4))
    assert s.constant_part() == GaussianRational(Fraction(3, 4), 0)
