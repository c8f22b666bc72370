"""Sparse multivariate power series truncated by total degree, and the
invertible map germs built from them.

A series of order N keeps every monomial of total degree <= N and nothing
above; arithmetic truncates at the smaller operand order, so results are
exact to the order they claim.  Coefficients are TauScalar values.

Multidegrees are plain int tuples.  Their canonical comparison key is
(total degree, exponent tuple); rendering uses total degree ascending and
reverse lexicographic ties so that x prints before y inside one degree.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch, NotInvertible, NotUnitDenominator
from .scalars import GaussianRational, TauScalar, render_tau_scalar


def degree_key(exponents: tuple) -> tuple:
    """Total order on multidegrees: total degree first, then lexicographic."""
    return (sum(exponents), exponents)


def _render_key(exponents: tuple) -> tuple:
    neg = tuple(-e for e in exponents)
    return (sum(exponents), neg)


class TruncatedSeries:
    """A polynomial representative of a power series modulo degree > order.

    coeffs maps exponent tuples to nonzero TauScalar values.  dim is the
    number of variables, order the truncation degree (inclusive).
    """

    __slots__ = ("dim", "order", "coeffs")

    def __init__(self, dim: int, order: int, coeffs=None):
        if dim < 1:
            raise ValueError("dim must be positive")
        if order < 0:
            raise ValueError("order must be nonnegative")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        clean = {}
        if coeffs:
            for ex, c in coeffs.items():
                ex = tuple(int(e) for e in ex)
                if len(ex) != dim:
                    raise DimensionMismatch("exponent %r has wrong arity" % (ex,))
                if any(e < 0 for e in ex):
                    raise ValueError("negative exponent %r" % (ex,))
                if sum(ex) > order:
                    continue
                c = TauScalar.coerce(c)
                if c:
                    clean[ex] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @staticmethod
    def _raw(dim, order, coeffs):
        obj = TruncatedSeries.__new__(TruncatedSeries)
        object.__setattr__(obj, "dim", dim)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(dim: int, order: int) -> "TruncatedSeries":
        return TruncatedSeries._raw(dim, order, {})

    @staticmethod
    def constant(value, dim: int, order: int) -> "TruncatedSeries":
        v = TauScalar.coerce(value)
        if not v:
            return TruncatedSeries.zero(dim, order)
        return TruncatedSeries._raw(dim, order, {(0,) * dim: v})

    @staticmethod
    def variable(index: int, dim: int, order: int) -> "TruncatedSeries":
        if not 0 <= index < dim:
            raise DimensionMismatch("variable index %d out of range" % index)
        if order < 1:
            return TruncatedSeries.zero(dim, order)
        ex = tuple(1 if j == index else 0 for j in range(dim))
        return TruncatedSeries._raw(dim, order, {ex: TauScalar.one()})

    @staticmethod
    def monomial(coeff, exponents, order: int) -> "TruncatedSeries":
        exponents = tuple(exponents)
        return TruncatedSeries(len(exponents), order, {exponents: coeff})

    # -- structure ---------------------------------------------------------

    def _check(self, other: "TruncatedSeries"):
        if self.dim != other.dim:
            raise DimensionMismatch("series over %d and %d variables" % (self.dim, other.dim))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coefficient(self, exponents) -> TauScalar:
        return self.coeffs.get(tuple(exponents), TauScalar.zero())

    def constant_term(self) -> TauScalar:
        return self.coeffs.get((0,) * self.dim, TauScalar.zero())

    def valuation(self):
        """Smallest total degree of a nonzero term, None for the zero series."""
        if not self.coeffs:
            return None
        return min(sum(ex) for ex in self.coeffs)

    def lowest_term(self):
        """(exponents, coefficient) of the minimal monomial in canonical order."""
        if not self.coeffs:
            return None
        ex = min(self.coeffs, key=degree_key)
        return ex, self.coeffs[ex]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            if order == self.order:
                return self
            raise ValueError("truncate cannot raise the order; use with_order")
        kept = {ex: c for ex, c in self.coeffs.items() if sum(ex) <= order}
        return TruncatedSeries._raw(self.dim, order, kept)

    def with_order(self, order: int) -> "TruncatedSeries":
        """Redeclare the truncation order, treating the stored coefficients as
        exact polynomial data.  Raising the order is only meaningful when the
        series is known to be a polynomial, which is the caller's assertion."""
        if order < self.order:
            return self.truncate(order)
        if order == self.order:
            return self
        return TruncatedSeries._raw(self.dim, order, dict(self.coeffs))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, TauScalar)):
            other = TruncatedSeries.constant(other, self.dim, self.order)
        self._check(other)
        order = min(self.order, other.order)
        out = {ex: c for ex, c in self.coeffs.items() if sum(ex) <= order}
        for ex, c in other.coeffs.items():
            if sum(ex) > order:
                continue
            s = out.get(ex)
            s = c if s is None else s + c
            if s:
                out[ex] = s
            else:
                out.pop(ex, None)
        return TruncatedSeries._raw(self.dim, order, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(
            self.dim, self.order, {ex: -c for ex, c in self.coeffs.items()}
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, TauScalar)):
            other = TruncatedSeries.constant(other, self.dim, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, scalar) -> "TruncatedSeries":
        s = TauScalar.coerce(scalar)
        if not s:
            return TruncatedSeries.zero(self.dim, self.order)
        return TruncatedSeries._raw(
            self.dim, self.order, {ex: c * s for ex, c in self.coeffs.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, TauScalar)):
            return self.scale(other)
        self._check(other)
        order = min(self.order, other.order)
        out = {}
        for ex1, c1 in self.coeffs.items():
            d1 = sum(ex1)
            if d1 > order:
                continue
            for ex2, c2 in other.coeffs.items():
                if d1 + sum(ex2) > order:
                    continue
                ex = tuple(a + b for a, b in zip(ex1, ex2))
                p = c1 * c2
                s = out.get(ex)
                s = p if s is None else s + p
                if s:
                    out[ex] = s
                else:
                    out.pop(ex, None)
        return TruncatedSeries._raw(self.dim, order, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of series are not defined")
        result = TruncatedSeries.constant(1, self.dim, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.dim, self.order, frozenset(self.coeffs.items())))

    # -- calculus ----------------------------------------------------------

    def partial(self, index: int) -> "TruncatedSeries":
        """Partial derivative; the order drops by one."""
        if not 0 <= index < self.dim:
            raise DimensionMismatch("variable index %d out of range" % index)
        order = max(self.order - 1, 0)
        out = {}
        for ex, c in self.coeffs.items():
            e = ex[index]
            if e == 0:
                continue
            nex = ex[:index] + (e - 1,) + ex[index + 1 :]
            if sum(nex) > order:
                continue
            out[nex] = c * e
        return TruncatedSeries._raw(self.dim, order, out)

    # -- substitution ------------------------------------------------------

    def compose(self, args) -> "TruncatedSeries":
        """Substitute args[i] for variable i.  Every argument must have zero
        constant term so the substitution is well defined on truncations."""
        args = list(args)
        if len(args) != self.dim:
            raise DimensionMismatch(
                "need %d substitution series, got %d" % (self.dim, len(args))
            )
        if not args:
            raise DimensionMismatch("empty substitution")
        tdim = args[0].dim
        order = min([self.order] + [a.order for a in args])
        for a in args:
            if a.dim != tdim:
                raise DimensionMismatch("substitution series over mixed variable counts")
            if a.constant_term():
                raise ValueError("substitution argument has a nonzero constant term")
        one = TruncatedSeries.constant(1, tdim, order)
        cache = [{0: one} for _ in range(self.dim)]
        trimmed = [a.truncate(order) if a.order > order else a for a in args]

        def power(i, k):
            col = cache[i]
            got = col.get(k)
            if got is None:
                got = power(i, k - 1) * trimmed[i]
                col[k] = got
            return got

        acc = TruncatedSeries.zero(tdim, order)
        for ex in sorted(self.coeffs, key=degree_key):
            if sum(ex) > order:
                continue
            term = TruncatedSeries.constant(self.coeffs[ex], tdim, order)
            for i, e in enumerate(ex):
                if e:
                    term = term * power(i, e)
            acc = acc + term
        return acc

    def restrict_to_axis(self, axis: int) -> "TruncatedSeries":
        """Set every variable except axis to zero."""
        out = {}
        for ex, c in self.coeffs.items():
            if all(e == 0 for j, e in enumerate(ex) if j != axis):
                out[ex] = c
        return TruncatedSeries._raw(self.dim, self.order, out)

    def divide_by_variable(self, index: int, power: int = 1) -> "TruncatedSeries":
        """Exact division by a variable power; every term must be divisible."""
        out = {}
        for ex, c in self.coeffs.items():
            if ex[index] < power:
                raise NotUnitDenominator(
                    "term %r not divisible by variable %d^%d" % (ex, index, power)
                )
            nex = ex[:index] + (ex[index] - power,) + ex[index + 1 :]
            out[nex] = c
        return TruncatedSeries._raw(self.dim, self.order, out)

    def multiply_by_variable(self, index: int, power: int = 1) -> "TruncatedSeries":
        out = {}
        for ex, c in self.coeffs.items():
            nex = ex[:index] + (ex[index] + power,) + ex[index + 1 :]
            if sum(nex) <= self.order:
                out[nex] = c
        return TruncatedSeries._raw(self.dim, self.order, out)

    def inverse_unit(self) -> "TruncatedSeries":
        """Reciprocal of a series whose constant term is a unit scalar,
        by the geometric series up to the truncation order."""
        c0 = self.constant_term()
        if not c0 or not c0.is_monomial():
            raise NotUnitDenominator("constant term %s is not a unit" % c0)
        inv0 = c0.inverse()
        u = self.scale(inv0) - 1
        acc = TruncatedSeries.constant(1, self.dim, self.order)
        term = TruncatedSeries.constant(1, self.dim, self.order)
        for k in range(1, self.order + 1):
            term = term * u
            if term.is_zero():
                break
            acc = acc + (-term if k % 2 == 1 else term)
        return acc.scale(inv0)

    # -- exact evaluation ---------------------------------------------------

    def eval_gaussian(self, point) -> GaussianRational:
        """Evaluate the polynomial at Gaussian rational coordinates.  Raises
        when a coefficient carries tau, since the value would leave Q(i)."""
        point = [GaussianRational.coerce(p) for p in point]
        if len(point) != self.dim:
            raise DimensionMismatch("point arity %d, series dim %d" % (len(point), self.dim))
        total = GaussianRational(0)
        for ex, c in self.coeffs.items():
            g = c.as_gaussian()
            v = g
            for p, e in zip(point, ex):
                for _ in range(e):
                    v = v * p
            total = total + v
        return total

    # -- rendering -----------------------------------------------------------

    def render(self, names) -> str:
        return render_series(self, names)

    def __repr__(self):
        return "TruncatedSeries(dim=%d, order=%d, %d terms)" % (
            self.dim,
            self.order,
            len(self.coeffs),
        )


DEFAULT_NAMES = {1: ("x",), 2: ("x", "y"), 3: ("x", "y", "z")}


def render_series(s: TruncatedSeries, names=None) -> str:
    """Canonical text form: monomials ordered by total degree, ties broken so
    earlier variables print first; coefficient sums parenthesized."""
    if names is None:
        names = DEFAULT_NAMES[s.dim]
    if len(names) != s.dim:
        raise DimensionMismatch("need %d variable names" % s.dim)
    if not s.coeffs:
        return "0"
    pieces = []
    for ex in sorted(s.coeffs, key=_render_key):
        c = s.coeffs[ex]
        mono = "*".join(
            (n if e == 1 else "%s^%d" % (n, e)) for n, e in zip(names, ex) if e
        )
        ctext = render_tau_scalar(c)
        if not mono:
            piece = _paren_if_sum(ctext)
        elif ctext == "1":
            piece = mono
        elif ctext == "-1":
            piece = "-" + mono
        else:
            piece = "%s*%s" % (_paren_if_sum(ctext), mono)
        pieces.append(piece)
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def _paren_if_sum(text: str) -> str:
    if " + " in text or " - " in text:
        return "(%s)" % text
    stripped = text[1:] if text.startswith("-") else text
    if "*" in stripped and stripped.count("*") > 1 and "tau" in stripped:
        return "(%s)" % text
    return text


def _matrix_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    raise DimensionMismatch("determinants only implemented through dimension 3")


def _matrix_inverse(m):
    n = len(m)
    det = _matrix_det(m)
    if not det or not det.is_monomial():
        raise NotInvertible("linear part determinant %s is not a unit" % det)
    dinv = det.inverse()
    if n == 1:
        return [[dinv]]
    if n == 2:
        return [
            [m[1][1] * dinv, -m[0][1] * dinv],
            [-m[1][0] * dinv, m[0][0] * dinv],
        ]
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            sub = [
                [m[r][c] for c in range(3) if c != j] for r in range(3) if r != i
            ]
            sign = 1 if (i + j) % 2 == 0 else -1
            cof[i][j] = _matrix_det(sub) * sign
    return [[cof[j][i] * dinv for j in range(3)] for i in range(3)]


class DiffeoGerm:
    """A germ of biholomorphism fixing the origin, stored component-wise.

    Components share dim and order, have zero constant terms, and the linear
    part is invertible over the scalar ring (its determinant is a unit)."""

    __slots__ = ("components", "dim", "order")

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise DimensionMismatch("a map germ needs at least one component")
        dim = components[0].dim
        if len(components) != dim:
            raise DimensionMismatch(
                "%d components for %d variables" % (len(components), dim)
            )
        order = min(c.order for c in components)
        components = tuple(c.truncate(order) if c.order > order else c for c in components)
        for c in components:
            if c.dim != dim:
                raise DimensionMismatch("components over mixed variable counts")
            if c.constant_term():
                raise ValueError("map germ does not fix the origin")
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        _matrix_inverse(self.linear_matrix())

    def __setattr__(self, name, value):
        raise AttributeError("DiffeoGerm is immutable")

    @staticmethod
    def identity(dim: int, order: int) -> "DiffeoGerm":
        return DiffeoGerm(
            [TruncatedSeries.variable(i, dim, order) for i in range(dim)]
        )

    def linear_matrix(self):
        m = []
        for c in self.components:
            row = []
            for j in range(self.dim):
                ex = tuple(1 if k == j else 0 for k in range(self.dim))
                row.append(c.coefficient(ex))
            m.append(row)
        return m

    def is_identity(self) -> bool:
        return self == DiffeoGerm.identity(self.dim, self.order)

    def is_tangent_to_identity(self) -> bool:
        m = self.linear_matrix()
        one, zero = TauScalar.one(), TauScalar.zero()
        return all(
            m[i][j] == (one if i == j else zero)
            for i in range(self.dim)
            for j in range(self.dim)
        )

    def compose(self, other: "DiffeoGerm") -> "DiffeoGerm":
        """self after other: (self . other)(x) = self(other(x))."""
        if self.dim != other.dim:
            raise DimensionMismatch("composition of germs over different dimensions")
        return DiffeoGerm([c.compose(other.components) for c in self.components])

    def inverse(self) -> "DiffeoGerm":
        """The compositional inverse, solved degree by degree.

        Writing g = L + g_high, the inverse h satisfies h = L^-1 (id - g_high . h);
        each pass of that fixed point gains one degree of agreement."""
        dim, order = self.dim, self.order
        m = self.linear_matrix()
        linv = _matrix_inverse(m)
        ident = [TruncatedSeries.variable(i, dim, order) for i in range(dim)]
        high = []
        for i, c in enumerate(self.components):
            lin = TruncatedSeries.zero(dim, order)
            for j in range(dim):
                lin = lin + TruncatedSeries.variable(j, dim, order).scale(m[i][j])
            high.append(c - lin)
        current = [
            sum_series([ident[j].scale(linv[i][j]) for j in range(dim)], dim, order)
            for i in range(dim)
        ]
        for _ in range(order):
            inner = [h.compose(current) for h in high]
            current = [
                sum_series(
                    [(ident[k] - inner[k]).scale(linv[i][k]) for k in range(dim)],
                    dim,
                    order,
                )
                for i in range(dim)
            ]
        result = DiffeoGerm(current)
        check = self.compose(result)
        if not check.is_identity():
            raise NotInvertible("inverse iteration failed to close at order %d" % order)
        return result

    def eval_gaussian(self, point):
        return tuple(c.eval_gaussian(point) for c in self.components)

    def truncate(self, order: int) -> "DiffeoGerm":
        return DiffeoGerm([c.truncate(order) for c in self.components])

    def with_order(self, order: int) -> "DiffeoGerm":
        return DiffeoGerm([c.with_order(order) for c in self.components])

    def __eq__(self, other):
        if not isinstance(other, DiffeoGerm):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def render(self, names=None):
        if names is None:
            names = DEFAULT_NAMES[self.dim]
        return tuple(render_series(c, names) for c in self.components)

    def __repr__(self):
        return "DiffeoGerm(dim=%d, order=%d)" % (self.dim, self.order)


def sum_series(parts, dim: int, order: int) -> TruncatedSeries:
    acc = TruncatedSeries.zero(dim, order)
    for p in parts:
        acc = acc + p
    return acc


def compose_map(outer: DiffeoGerm, inner: DiffeoGerm) -> DiffeoGerm:
    """Composition outer(inner(x)) as a standalone helper."""
    return outer.compose(inner)


def invert(germ: DiffeoGerm) -> DiffeoGerm:
    return germ.inverse()
