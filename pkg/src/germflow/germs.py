"""Vector field germs at a singular point and the dynamics of map germs:
eigenvalue structure, the one-line two-sided spectrum condition, tangency of
foliations, iteration, periods, orbit counting, and the formal exponential
and logarithm in dimension two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    Degenerate,
    DimensionMismatch,
    NotDiagonal,
    NotTangentToIdentity,
    OrderTooLow,
)
from .scalars import GaussianRational, TauScalar
from .series import DEFAULT_NAMES, DiffeoGerm, TruncatedSeries, render_series, sum_series


class VectorFieldGerm:
    """A holomorphic vector field germ singular at the origin.

    Stored as one series per coordinate direction; all components share dim
    and order and have zero constant term."""

    __slots__ = ("components", "dim", "order")

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise DimensionMismatch("a vector field needs at least one component")
        dim = components[0].dim
        if len(components) != dim:
            raise DimensionMismatch(
                "%d components for %d variables" % (len(components), dim)
            )
        order = min(c.order for c in components)
        components = tuple(
            c.truncate(order) if c.order > order else c for c in components
        )
        for c in components:
            if c.dim != dim:
                raise DimensionMismatch("components over mixed variable counts")
            if c.constant_term():
                raise ValueError("vector field germ must vanish at the origin")
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("VectorFieldGerm is immutable")

    @staticmethod
    def zero(dim: int, order: int) -> "VectorFieldGerm":
        return VectorFieldGerm([TruncatedSeries.zero(dim, order)] * dim)

    def linear_matrix(self):
        m = []
        for c in self.components:
            row = []
            for j in range(self.dim):
                ex = tuple(1 if k == j else 0 for k in range(self.dim))
                row.append(c.coefficient(ex))
            m.append(row)
        return m

    def is_linear(self) -> bool:
        return all(
            all(sum(ex) <= 1 for ex in c.coeffs) for c in self.components
        )

    def is_generic(self) -> bool:
        """Diagonal linear part with nonzero entries and every coordinate
        hyperplane invariant (component i divisible by variable i)."""
        m = self.linear_matrix()
        for i in range(self.dim):
            for j in range(self.dim):
                if i == j:
                    if not m[i][j]:
                        return False
                elif m[i][j]:
                    return False
        for i, c in enumerate(self.components):
            if any(ex[i] == 0 for ex in c.coeffs):
                return False
        return True

    def apply_to(self, f: TruncatedSeries) -> TruncatedSeries:
        """The derivation X(f) = sum_i X_i * df/dx_i.

        Exact to degree min(f.order, self.order): the unknown top-degree
        coefficients of each df/dx_i only ever multiply the constant term of
        a component, which vanishes."""
        if f.dim != self.dim:
            raise DimensionMismatch("function and field over different variable counts")
        order = min(f.order, self.order)
        acc = TruncatedSeries.zero(self.dim, order)
        for i, c in enumerate(self.components):
            p = f.partial(i).with_order(order)
            acc = acc + (c.truncate(min(order, c.order)) * p)
        return acc

    def scale_by_series(self, u: TruncatedSeries) -> "VectorFieldGerm":
        return VectorFieldGerm([c * u for c in self.components])

    def truncate(self, order: int) -> "VectorFieldGerm":
        return VectorFieldGerm([c.truncate(order) for c in self.components])

    def with_order(self, order: int) -> "VectorFieldGerm":
        return VectorFieldGerm([c.with_order(order) for c in self.components])

    def __eq__(self, other):
        if not isinstance(other, VectorFieldGerm):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def render(self, names=None):
        if names is None:
            names = DEFAULT_NAMES[self.dim]
        return tuple(render_series(c, names) for c in self.components)

    def __repr__(self):
        return "VectorFieldGerm(dim=%d, order=%d)" % (self.dim, self.order)


@dataclass(frozen=True)
class EigenData:
    """Eigenvalues of a diagonal linear part, as Gaussian rationals, in
    coordinate order."""

    eigenvalues: tuple

    def __iter__(self):
        return iter(self.eigenvalues)


@dataclass(frozen=True)
class StarVerdict:
    """Outcome of the spectrum test: all eigenvalues on one real line through
    the origin, with both open sides occupied.  When it holds for three
    eigenvalues, exactly one of them sits alone on its side; that index names
    the distinguished axis."""

    holds: bool
    isolated_index: Optional[int] = None
    line_direction: Optional[GaussianRational] = None


def eigen_data(field: VectorFieldGerm) -> EigenData:
    """Eigenvalues of a field whose linear part is diagonal with nonzero
    Gaussian rational entries."""
    m = field.linear_matrix()
    n = field.dim
    for i in range(n):
        for j in range(n):
            if i != j and m[i][j]:
                raise NotDiagonal(
                    "linear part has off-diagonal entry at (%d, %d)" % (i, j)
                )
    eigs = []
    for i in range(n):
        d = m[i][i]
        if not d:
            raise Degenerate("zero eigenvalue on axis %d" % i)
        if not d.is_gaussian():
            raise Degenerate("eigenvalue on axis %d carries tau" % i)
        eigs.append(d.as_gaussian())
    return EigenData(tuple(eigs))


def _canonical_direction(g: GaussianRational) -> GaussianRational:
    """Scale a nonzero Gaussian rational to a canonical representative of its
    real line through the origin: first nonzero part becomes +1."""
    if g.re != 0:
        return g / GaussianRational(g.re)
    return g / GaussianRational(g.im)


def condition_star(data: EigenData) -> StarVerdict:
    """Test whether three eigenvalues lie on one real line through 0 with both
    sides occupied, and locate the isolated one."""
    eigs = list(data.eigenvalues)
    if len(eigs) != 3:
        raise DimensionMismatch("the spectrum condition is defined for three eigenvalues")
    if any(not e for e in eigs):
        raise Degenerate("zero eigenvalue")
    base = eigs[0]
    # e / base is real iff e * conj(base) is real; sign of the real part
    # tells which side of 0 the eigenvalue occupies on the common line.
    sides = []
    for e in eigs:
        p = e * base.conjugate()
        if p.im != 0:
            return StarVerdict(holds=False)
        sides.append(1 if p.re > 0 else -1)
    pos = [i for i, s in enumerate(sides) if s > 0]
    neg = [i for i, s in enumerate(sides) if s < 0]
    if not pos or not neg:
        return StarVerdict(holds=False)
    isolated = pos[0] if len(pos) == 1 else neg[0]
    return StarVerdict(
        holds=True,
        isolated_index=isolated,
        line_direction=_canonical_direction(base),
    )


def is_tangent(x: VectorFieldGerm, y: VectorFieldGerm) -> bool:
    """Whether two fields span the same direction up to the working order:
    all 2x2 minors X_i Y_j - X_j Y_i vanish and the lowest-degree terms match
    under one nonzero scalar ratio."""
    if x.dim != y.dim:
        raise DimensionMismatch("fields over different variable counts")
    xzero = all(c.is_zero() for c in x.components)
    yzero = all(c.is_zero() for c in y.components)
    if xzero or yzero:
        return xzero and yzero
    n = x.dim
    for i in range(n):
        for j in range(i + 1, n):
            minor = x.components[i] * y.components[j] - x.components[j] * y.components[i]
            if not minor.is_zero():
                return False
    ratio = None
    for i in range(n):
        xi, yi = x.components[i], y.components[i]
        if xi.is_zero() and yi.is_zero():
            continue
        if xi.is_zero() or yi.is_zero():
            return False
        lx = xi.lowest_term()
        ex, cx = lx
        cy = yi.coefficient(ex)
        if not cy or not cx.is_monomial():
            return False
        r = cy / cx
        if ratio is None:
            ratio = r
        elif ratio != r:
            return False
    return ratio is not None and bool(ratio)


def iterate(germ: DiffeoGerm, n: int) -> DiffeoGerm:
    """n-fold composition power; negative n composes the inverse."""
    if n == 0:
        return DiffeoGerm.identity(germ.dim, germ.order)
    base = germ if n > 0 else germ.inverse()
    n = abs(n)
    result = None
    while n:
        if n & 1:
            result = base if result is None else result.compose(base)
        n >>= 1
        if n:
            base = base.compose(base)
    return result


def formal_period(germ: DiffeoGerm, pmax: int = 24) -> Optional[int]:
    """Smallest p in 1..pmax with germ^p = identity at the working order,
    or None when no such p exists in range."""
    ident = DiffeoGerm.identity(germ.dim, germ.order)
    current = germ
    for p in range(1, pmax + 1):
        if current == ident:
            return p
        if p < pmax:
            current = current.compose(germ)
    return None


@dataclass(frozen=True)
class OrbitCount:
    """count distinct orbit points inside the polydisc; escaped is True only
    when the point budget ran out with the orbit still inside."""

    count: int
    escaped: bool


def _inside(point, radius_sq: Fraction) -> bool:
    return all(p.norm_sq() <= radius_sq for p in point)


def orbit_cardinality(
    germ: DiffeoGerm, start, radius, cap: int = 1000
) -> OrbitCount:
    """Count the distinct points of the two-sided orbit of start that stay in
    the closed polydisc of the given radius, treating the germ and its
    inverse at the stored order as exact polynomial maps.

    Iteration is exact over Gaussian rationals.  A direction stops when it
    leaves the polydisc or revisits a known point; hitting cap while still
    inside reports escaped=True with count=cap."""
    start = tuple(GaussianRational.coerce(p) for p in start)
    radius = Fraction(radius)
    radius_sq = radius * radius
    if not _inside(start, radius_sq):
        return OrbitCount(0, False)
    inverse = germ.inverse()
    seen = {start}
    for step in (germ, inverse):
        point = start
        while True:
            point = step.eval_gaussian(point)
            if not _inside(point, radius_sq):
                break
            if point in seen:
                break
            if len(seen) >= cap:
                return OrbitCount(cap, True)
            seen.add(point)
    return OrbitCount(len(seen), False)


def exp_time_one(field: VectorFieldGerm, order: Optional[int] = None) -> DiffeoGerm:
    """Time-one map of a planar field with vanishing linear part.

    The Lie series sum_k V^k[x_i] / k! terminates below any fixed degree
    because each application of the derivation raises the order by at least
    one; the result is tangent to the identity."""
    if field.dim != 2:
        raise DimensionMismatch("the formal flow is implemented in dimension two")
    if order is None:
        order = field.order
    work = field.with_order(order)
    for c in work.components:
        v = c.valuation()
        if v is not None and v < 2:
            raise OrderTooLow("generator has terms of degree below two")
    comps = []
    for i in range(2):
        term = TruncatedSeries.variable(i, 2, order)
        total = term
        kfact = 1
        for k in range(1, order + 1):
            term = work.apply_to(term)
            if term.is_zero():
                break
            kfact *= k
            total = total + term.scale(TauScalar.from_rational(Fraction(1, kfact)))
        comps.append(total)
    return DiffeoGerm(comps)


def infinitesimal_generator(germ: DiffeoGerm, order: Optional[int] = None) -> VectorFieldGerm:
    """Formal logarithm of a planar germ tangent to the identity: the unique
    field V with vanishing linear part whose time-one map is the germ.

    Solved by a fixed point: adding the current discrepancy germ - exp(V)
    to V corrects one further degree each pass."""
    if germ.dim != 2:
        raise DimensionMismatch("the formal logarithm is implemented in dimension two")
    if not germ.is_tangent_to_identity():
        raise NotTangentToIdentity("linear part is not the identity matrix")
    if order is None:
        order = germ.order
    work = germ.with_order(order)
    ident = DiffeoGerm.identity(2, order)
    current = VectorFieldGerm(
        [work.components[i] - ident.components[i] for i in range(2)]
    )
    for _ in range(order + 1):
        flow = exp_time_one(current, order)
        if flow == work:
            return current
        current = VectorFieldGerm(
            [
                current.components[i] + (work.components[i] - flow.components[i])
                for i in range(2)
            ]
        )
    raise OrderTooLow("logarithm iteration failed to close at order %d" % order)
