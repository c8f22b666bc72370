"""Exception types shared across the toolkit.

Every structural failure raises a named error so callers (and the service
layer) can map it to a stable report.  Plain ZeroDivisionError is used for
division by an exact zero scalar, matching stdlib arithmetic.
"""


class GermflowError(Exception):
    """Base class for all domain errors."""


class NotMonomial(GermflowError):
    """Division requested by a tau-scalar that is not a single term."""


class DimensionMismatch(GermflowError):
    """Operands live over different variable counts."""


class NotInvertible(GermflowError):
    """A map germ whose linear part is not a unit matrix over the scalar ring."""


class NotDiagonal(GermflowError):
    """A vector field whose linear part is not diagonal where required."""


class Degenerate(GermflowError):
    """A linear part with a zero or non-rational eigenvalue."""


class NotTangentToIdentity(GermflowError):
    """A map germ whose linear part is not the identity matrix."""


class OrderTooLow(GermflowError):
    """A generator with constant or linear terms where order >= 2 is required."""


class NotStarGerm(GermflowError):
    """Eigenvalues do not satisfy the one-line two-sided condition."""


class NonIntegerRatio(GermflowError):
    """Transverse eigenvalue ratios to the axis are not negative integers."""


class UnsupportedCoupling(GermflowError):
    """Coupling shape outside the triangular class the lift can solve."""


class ChartNotInvariant(GermflowError):
    """The germ does not fix the chart origin, or the axis is not invariant."""


class NotUnitDenominator(GermflowError):
    """A quotient whose denominator has no unit cofactor after clearing monomials."""


class NotLinear(GermflowError):
    """A vector field with nonlinear terms where a linear one is required."""


class ParseError(GermflowError):
    """Syntax error in a germ specification, with source position."""

    def __init__(self, message, line, column, expected=()):
        super().__init__(message)
        self.line = line
        self.column = column
        self.expected = tuple(expected)

    def __str__(self):
        base = super().__str__()
        return "line %d, column %d: %s" % (self.line, self.column, base)


class UnknownVariable(GermflowError):
    """An identifier that is not a known variable or constant."""
