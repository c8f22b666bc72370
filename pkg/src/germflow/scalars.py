"""Exact scalar arithmetic.

The coefficient field is Q(i), Gaussian rationals.  On top of it sits the
Laurent ring Q(i)[tau, tau^-1] where tau stands for 2*pi*i.  Since 2*pi*i is
transcendental over Q(i), a Laurent polynomial in tau vanishes iff every
coefficient vanishes, so equality in this ring is decidable term by term.
All period integrals and lifted coefficients of the holonomy construction
live here.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .errors import NotMonomial


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("expected an exact rational, got %r" % (x,))


class GaussianRational:
    """A complex number a + b*i with exact rational a, b.

    Immutable.  Fraction keeps both parts in lowest terms, so equality and
    hashing are structural.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(_as_fraction(x))

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) + (-self)

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        n = other.norm_sq()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return "GaussianRational(%s, %s)" % (self.re, self.im)

    def __str__(self):
        return render_gaussian(self)


I = GaussianRational(0, 1)


def _frac_str(q: Fraction) -> str:
    return str(q)


def render_gaussian(g: GaussianRational) -> str:
    """Render as an expression the cli parser accepts: '3', '-1/2', '2*i',
    '1 + 2*i'."""
    if g.im == 0:
        return _frac_str(g.re)
    if g.im == 1:
        im = "i"
    elif g.im == -1:
        im = "-i"
    else:
        im = "%s*i" % _frac_str(g.im)
    if g.re == 0:
        return im
    if im.startswith("-"):
        return "%s - %s" % (_frac_str(g.re), im[1:])
    return "%s + %s" % (_frac_str(g.re), im)


class TauScalar:
    """A Laurent polynomial sum_k c_k * tau^k with Gaussian rational c_k.

    Stored as a map from integer exponent to nonzero coefficient; the empty
    map is zero.  Units of the ring are exactly the single-term elements,
    which is why general division is restricted to them.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for k, c in terms.items():
                c = GaussianRational.coerce(c)
                if c:
                    t[int(k)] = c
        object.__setattr__(self, "terms", t)

    def __setattr__(self, name, value):
        raise AttributeError("TauScalar is immutable")

    @staticmethod
    def zero() -> "TauScalar":
        return TauScalar()

    @staticmethod
    def one() -> "TauScalar":
        return TauScalar({0: 1})

    @staticmethod
    def from_rational(q) -> "TauScalar":
        return TauScalar({0: GaussianRational.coerce(q)})

    @staticmethod
    def tau(power: int = 1) -> "TauScalar":
        return TauScalar({power: 1})

    @staticmethod
    def coerce(x) -> "TauScalar":
        if isinstance(x, TauScalar):
            return x
        if isinstance(x, (int, Fraction, GaussianRational)):
            return TauScalar({0: GaussianRational.coerce(x)})
        raise TypeError("cannot coerce %r to TauScalar" % (x,))

    def __add__(self, other):
        other = TauScalar.coerce(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k)
            s = c if s is None else s + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return TauScalar._raw(t)

    __radd__ = __add__

    @staticmethod
    def _raw(terms: dict) -> "TauScalar":
        obj = TauScalar.__new__(TauScalar)
        object.__setattr__(obj, "terms", terms)
        return obj

    def __neg__(self):
        return TauScalar._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-TauScalar.coerce(other))

    def __rsub__(self, other):
        return TauScalar.coerce(other) + (-self)

    def __mul__(self, other):
        other = TauScalar.coerce(other)
        if not self.terms or not other.terms:
            return TauScalar._raw({})
        t = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                p = c1 * c2
                s = t.get(k)
                s = p if s is None else s + p
                if s:
                    t[k] = s
                else:
                    t.pop(k, None)
        return TauScalar._raw(t)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial_parts(self):
        """Return (exponent, coefficient) of a single-term scalar."""
        if len(self.terms) != 1:
            raise NotMonomial("tau-scalar with %d terms is not a monomial" % len(self.terms))
        [(k, c)] = self.terms.items()
        return k, c

    def inverse(self) -> "TauScalar":
        """Inverse of a unit, i.e. of a single-term scalar."""
        if not self.terms:
            raise ZeroDivisionError("inverse of zero tau-scalar")
        k, c = self.monomial_parts()
        return TauScalar({-k: GaussianRational(1) / c})

    def __truediv__(self, other):
        other = TauScalar.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return TauScalar.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = TauScalar.coerce(other)
        if not isinstance(other, TauScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def constant_part(self) -> GaussianRational:
        return self.terms.get(0, GaussianRational(0))

    def is_gaussian(self) -> bool:
        """True when no tau power appears, so the value lies in Q(i)."""
        return all(k == 0 for k in self.terms)

    def as_gaussian(self) -> GaussianRational:
        if not self.is_gaussian():
            raise NotMonomial("scalar carries tau and is not a plain Gaussian rational")
        return self.constant_part()

    def numeric_eval(self, precision: int = 15):
        """Evaluate tau -> 2*pi*i as an mpmath complex number.

        precision counts decimal digits; the working precision is padded so
        each of the real and imaginary parts is accurate to better than
        10**(1 - precision).
        """
        with mpmath.workdps(precision + 10):
            tau = 2 * mpmath.pi * mpmath.mpc(0, 1)
            acc = mpmath.mpc(0)
            for k, c in sorted(self.terms.items()):
                coeff = mpmath.mpc(
                    mpmath.mpf(c.re.numerator) / c.re.denominator,
                    mpmath.mpf(c.im.numerator) / c.im.denominator,
                )
                acc += coeff * tau ** k
            return +acc

    def __repr__(self):
        return "TauScalar(%r)" % (self.terms,)

    def __str__(self):
        return render_tau_scalar(self)


def render_tau_scalar(s: TauScalar) -> str:
    """Canonical text, ascending tau power, reparseable by the cli parser."""
    if not s.terms:
        return "0"
    pieces = []
    for k in sorted(s.terms):
        c = s.terms[k]
        if k == 0:
            piece = _wrap_sum(render_gaussian(c))
        else:
            power = "tau" if k == 1 else "tau^%d" % k
            if c == GaussianRational(1):
                piece = power
            elif c == GaussianRational(-1):
                piece = "-" + power
            else:
                piece = "%s*%s" % (_wrap_sum(render_gaussian(c)), power)
        pieces.append(piece)
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def _wrap_sum(text: str) -> str:
    """Parenthesize a rendered value that is itself a sum."""
    if " + " in text or " - " in text:
        return "(%s)" % text
    return text
