"""First integrals, resonance lattices, and flag diagnostics.

The diagnostic pipeline ties the rest of the package together: eigenvalue
data feeds the one-line spectrum test, the axis normal form feeds the
holonomy generator, and the generator's periodicity (or certified absence
of it) decides between expecting a holomorphic first integral and ruling
one out.  For linear diagonal fields the integrals themselves are monomial
and are produced and machine-checked on the spot.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import NamedTuple, Optional

from .errors import (
    Degenerate,
    DimensionMismatch,
    GermflowError,
    NotDiagonal,
    NotLinear,
    NotStarGerm,
)
from .germs import (
    EigenData,
    StarVerdict,
    VectorFieldGerm,
    condition_star,
    eigen_data,
    formal_period,
    _canonical_direction,
)
from .holonomy import normalize_axis, lift_coefficients, holonomy_from_table
from .scalars import GaussianRational, TauScalar
from .series import DiffeoGerm, TruncatedSeries, render_series


def _integer_rows(eigs) -> list:
    """Real and imaginary parts of the eigenvalue tuple, denominators
    cleared per row."""
    rows = []
    for part in ("re", "im"):
        vals = [getattr(e, part) for e in eigs]
        denom_lcm = 1
        for v in vals:
            denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
        rows.append([int(v * denom_lcm) for v in vals])
    return rows


def _integer_kernel(rows) -> list:
    """Z-basis of {v : M v = 0} for an integer matrix given by rows, via
    unimodular column reduction: column operations bring M to echelon form
    and the operations applied to the identity track the kernel columns."""
    m = len(rows)
    n = len(rows[0])
    A = [list(r) for r in rows]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_addmul(dst, src, q):
        for i in range(m):
            A[i][dst] -= q * A[i][src]
        for i in range(n):
            U[i][dst] -= q * U[i][src]

    def col_swap(a, b):
        for i in range(m):
            A[i][a], A[i][b] = A[i][b], A[i][a]
        for i in range(n):
            U[i][a], U[i][b] = U[i][b], U[i][a]

    col = 0
    for row in range(m):
        if col >= n:
            break
        while True:
            nz = [c for c in range(col, n) if A[row][c] != 0]
            if not nz:
                break
            if len(nz) == 1:
                if nz[0] != col:
                    col_swap(col, nz[0])
                col += 1
                break
            c_min = min(nz, key=lambda c: abs(A[row][c]))
            for c in nz:
                if c != c_min:
                    col_addmul(c, c_min, A[row][c] // A[row][c_min])
    return [tuple(U[i][c] for i in range(n)) for c in range(col, n)]


def _row_hnf(vectors) -> tuple:
    """Canonical row Hermite form of a list of integer vectors: a staircase
    basis with positive pivots and entries above each pivot reduced into
    [0, pivot).  Row operations are unimodular, so the lattice is kept."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return ()
    n = len(rows[0])
    k = len(rows)
    pivots = []
    r = 0
    for col in range(n):
        if r >= k:
            break
        nz = [i for i in range(r, k) if rows[i][col] != 0]
        if not nz:
            continue
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(rows[i][col]))
            base = rows[nz[0]]
            for i in nz[1:]:
                q = rows[i][col] // base[col]
                rows[i] = [a - q * b for a, b in zip(rows[i], base)]
            nz = [i for i in range(r, k) if rows[i][col] != 0]
        rows[r], rows[nz[0]] = rows[nz[0]], rows[r]
        if rows[r][col] < 0:
            rows[r] = [-a for a in rows[r]]
        pivots.append(col)
        r += 1
    rows = [row for row in rows[:r]]
    for idx in range(len(pivots) - 1, -1, -1):
        col = pivots[idx]
        piv = rows[idx]
        for i in range(idx):
            q = rows[i][col] // piv[col]
            if q:
                rows[i] = [a - q * b for a, b in zip(rows[i], piv)]
    return tuple(tuple(row) for row in rows)


def resonance_lattice(eigs) -> tuple:
    """Z-basis of the resonance lattice {v : Σ v_i λ_i = 0} of an
    eigenvalue tuple, in canonical Hermite form.

    Both the real and imaginary parts must vanish, so the lattice is the
    integer kernel of a two-row matrix; eigenvalue tuples that are not
    collinear over the rationals come out rank deficient."""
    eigs = tuple(GaussianRational.coerce(e) for e in eigs)
    if not eigs:
        return ()
    for e in eigs:
        if not e:
            raise Degenerate("zero eigenvalue has no resonance data")
    rows = _integer_rows(eigs)
    kernel = _integer_kernel(rows)
    return _row_hnf(kernel)


def _scaled_integer_spectrum(eigs, axis: int):
    """Scale an eigenvalue tuple by a unit so the axis entry is a negative
    integer and the rest are positive integers; returns the integer tuple.

    Raises NotStarGerm when no unit scaling achieves the sign pattern."""
    direction = _canonical_direction(eigs[axis])
    reals = []
    for e in eigs:
        r = e / direction
        if not r.is_real():
            raise NotStarGerm("eigenvalues do not lie on one line")
        reals.append(r.re)
    if reals[axis] > 0:
        reals = [-r for r in reals]
    if any(r <= 0 for i, r in enumerate(reals) if i != axis):
        raise NotStarGerm("transverse eigenvalues are not on the opposite side")
    denom_lcm = 1
    for r in reals:
        denom_lcm = denom_lcm * r.denominator // gcd(denom_lcm, r.denominator)
    ints = [int(r * denom_lcm) for r in reals]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(v // g for v in ints)


def monomial_first_integrals(X: VectorFieldGerm):
    """Monomial first integrals of a linear diagonal field whose spectrum
    is, up to a unit, a tuple of integers with the axis entry isolated in
    sign.

    In dimension three with spectrum (n, m, -k) the pair is
    (x^{k/g} z^{n/g}, y^{k/g'} z^{m/g'}) with g = gcd(n, k), g' = gcd(m, k);
    in dimension two with spectrum (-q, p) the single integral is
    x^{p/g} y^{q/g} with g = gcd(p, q)."""
    if not X.is_linear():
        raise NotLinear("monomial integrals computed for linear fields only")
    data = eigen_data(X)
    eigs = data.eigenvalues
    if X.dim == 2:
        # Mixed signs after realification; single monomial.
        direction = _canonical_direction(eigs[0])
        reals = []
        for e in eigs:
            r = e / direction
            if not r.is_real():
                raise NotStarGerm("eigenvalues do not lie on one line")
            reals.append(r.re)
        if reals[0] * reals[1] >= 0:
            raise NotStarGerm("two-dimensional spectrum is not of mixed sign")
        denom_lcm = 1
        for r in reals:
            denom_lcm = denom_lcm * r.denominator // gcd(denom_lcm, r.denominator)
        a, b = (abs(int(r * denom_lcm)) for r in reals)
        g = gcd(a, b)
        p, q = b // g, a // g
        mono = TruncatedSeries.monomial(1, (p, q), max(X.order, p + q))
        return (mono,)
    if X.dim != 3:
        raise DimensionMismatch("monomial integrals are defined in dims 2 and 3")
    star = condition_star(data)
    if not star.holds:
        raise NotStarGerm("spectrum has no isolated eigenvalue")
    axis = star.isolated_index
    spectrum = _scaled_integer_spectrum(eigs, axis)
    k = -spectrum[axis]
    trans = [i for i in range(3) if i != axis]
    monomials = []
    for idx in trans:
        n = spectrum[idx]
        g = gcd(n, k)
        ex = [0, 0, 0]
        ex[idx] = k // g
        ex[axis] = n // g
        order = max(X.order, sum(ex))
        monomials.append(TruncatedSeries.monomial(1, tuple(ex), order))
    return tuple(monomials)


def check_invariant(X: VectorFieldGerm, f: TruncatedSeries) -> bool:
    """True iff X(f) = Σ X_i ∂f/∂x_i vanishes to the provable order."""
    if X.dim != f.dim:
        raise DimensionMismatch("field and function live in different dimensions")
    return X.apply_to(f).is_zero()


def _wedge_coefficients(F1: TruncatedSeries, F2: TruncatedSeries):
    """Coefficients of dF1 ∧ dF2 on dx_i ∧ dx_j, i < j."""
    out = {}
    dim = F1.dim
    for i in range(dim):
        for j in range(i + 1, dim):
            out[(i, j)] = F1.partial(i) * F2.partial(j) - F1.partial(j) * F2.partial(i)
    return out

def check_first_integral_map(X: VectorFieldGerm, F) -> bool:
    """True iff both components of F are X-invariant and dF1 ∧ dF2 is not
    identically zero (the map is a submersion somewhere)."""
    if X.dim != 3:
        raise DimensionMismatch("first-integral maps are checked in dimension three")
    F1, F2 = F
    if not (check_invariant(X, F1) and check_invariant(X, F2)):
        return False
    wedge = _wedge_coefficients(F1, F2)
    return any(not w.is_zero() for w in wedge.values())


class MixedCombination(NamedTuple):
    weights: tuple
    a: int
    b: int


def pure_meromorphic_combination(p, q, search_cap: int = 10000) -> Optional[MixedCombination]:
    """Integer weights w = a*p + b*q with entries of both signs, when the
    nonnegative exponent vectors p and q are not proportional.

    The weights encode a pure meromorphic monomial combination g^a h^b of
    germs with factored exponents p and q.  Proportional inputs admit no
    mixed combination and yield None.  The search expands by |a| + |b| and
    returns the first mixed vector, breaking ties in ascending (a, b), so
    results are deterministic."""
    p = tuple(int(v) for v in p)
    q = tuple(int(v) for v in q)
    if len(p) != len(q):
        raise DimensionMismatch("exponent vectors have different lengths")
    if any(v < 0 for v in p) or any(v < 0 for v in q):
        raise ValueError("factored exponents must be nonnegative")
    if not any(p) or not any(q):
        raise ValueError("each factor vector needs a positive entry")
    proportional = True
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] * q[j] - p[j] * q[i] != 0:
                proportional = False
                break
        if not proportional:
            break
    if proportional:
        return None

    def mixed(w):
        return any(v > 0 for v in w) and any(v < 0 for v in w)

    for s in range(2, search_cap + 1):
        candidates = []
        for a in range(-s, s + 1):
            r = s - abs(a)
            for b in ((-r, r) if r else (0,)):
                if a == 0 and b == 0:
                    continue
                candidates.append((a, b))
        candidates.sort()
        for a, b in candidates:
            w = tuple(a * pi + b * qi for pi, qi in zip(p, q))
            if mixed(w):
                return MixedCombination(weights=w, a=a, b=b)
    raise RuntimeError("mixed combination not found below the search cap")


class OneFormGerm:
    """A holomorphic one-form A dx + B dy + C dz given by its coefficient
    series; arbitrary constant terms are allowed (dz is a valid form)."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        comps = tuple(coefficients)
        if not comps:
            raise DimensionMismatch("one-form needs at least one coefficient")
        dim = comps[0].dim
        if len(comps) != dim:
            raise DimensionMismatch(
                "%d coefficients for a form in dimension %d" % (len(comps), dim)
            )
        order = min(c.order for c in comps)
        comps = tuple(c.truncate(order) if c.order > order else c for c in comps)
        object.__setattr__(self, "coefficients", comps)

    def __setattr__(self, name, value):
        raise AttributeError("OneFormGerm is immutable")

    @property
    def dim(self):
        return len(self.coefficients)

    @property
    def order(self):
        return self.coefficients[0].order

    def __eq__(self, other):
        if not isinstance(other, OneFormGerm):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def exterior_derivative_coefficients(self):
        """dω as a map (i, j) -> coefficient of dx_i ∧ dx_j, i < j."""
        out = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                out[(i, j)] = (
                    self.coefficients[j].partial(i)
                    - self.coefficients[i].partial(j)
                )
        return out

    def render(self, names=None):
        from .series import DEFAULT_NAMES

        names = names or DEFAULT_NAMES[self.dim]
        parts = []
        for c, n in zip(self.coefficients, names):
            parts.append("(%s) d%s" % (render_series(c, names), n))
        return " + ".join(parts)

    def __repr__(self):
        return "OneFormGerm(%r)" % (self.coefficients,)


def interior_product(X: VectorFieldGerm, w: OneFormGerm) -> TruncatedSeries:
    """i_X ω = Σ A_i X_i; identically zero exactly when the orbits of X sit
    inside the leaves of ω (the flag condition)."""
    if X.dim != w.dim:
        raise DimensionMismatch("field and form live in different dimensions")
    order = min(X.order, w.order)
    total = TruncatedSeries.zero(X.dim, order)
    for a, xi in zip(w.coefficients, X.components):
        total = total + a * xi
    return total


def frobenius_check(w: OneFormGerm) -> bool:
    """True iff ω ∧ dω vanishes (Frobenius integrability, dimension 3)."""
    if w.dim != 3:
        raise DimensionMismatch("integrability of one-forms is checked in dimension three")
    A, B, C = w.coefficients
    d = w.exterior_derivative_coefficients()
    coeff = A * d[(1, 2)] - B * d[(0, 2)] + C * d[(0, 1)]
    return coeff.is_zero()


def kupka_nonvanishing(w: OneFormGerm, axis: int) -> bool:
    """True iff dω does not vanish identically along the chosen axis."""
    if w.dim != 3:
        raise DimensionMismatch("Kupka test is defined in dimension three")
    for series in w.exterior_derivative_coefficients().values():
        if not series.restrict_to_axis(axis).is_zero():
            return True
    return False


class Verdict(str, Enum):
    FIRST_INTEGRAL_EXPECTED = "FirstIntegralExpected"
    NO_FIRST_INTEGRAL = "NoFirstIntegral"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DiagnosisReport:
    star: Optional[StarVerdict]
    axis: Optional[int]
    holonomy: Optional[DiffeoGerm]
    period: Optional[int]
    first_integrals: tuple
    verdict: Verdict
    order: int
    notes: tuple


def _linear_part_identity_or_unipotent(h: DiffeoGerm) -> bool:
    """True iff the linear part L has (L - I)^dim = 0, i.e. 1 is the only
    eigenvalue; such an L has infinite order unless it is the identity, so
    a non-identity germ with this linear part can never be periodic."""
    dim = h.dim
    m = h.linear_matrix()
    one = TauScalar.one()
    n = [
        [m[i][j] - one if i == j else m[i][j] for j in range(dim)]
        for i in range(dim)
    ]
    power = n
    for _ in range(dim - 1):
        power = [
            [
                sum((power[i][k] * n[k][j] for k in range(dim)), TauScalar.zero())
                for j in range(dim)
            ]
            for i in range(dim)
        ]
    return all(not power[i][j] for i in range(dim) for j in range(dim))


def _triangular_spectrum(X: VectorFieldGerm) -> Optional[EigenData]:
    """Diagonal spectrum of a linear part with exactly one off-diagonal
    entry.  With two or more couplings the diagonal no longer has to carry
    the eigenvalues, so None is returned."""
    m = X.linear_matrix()
    n = X.dim
    off = [(i, j) for i in range(n) for j in range(n) if i != j and m[i][j]]
    if len(off) != 1:
        return None
    eigs = []
    for i in range(n):
        d = m[i][i]
        if not d or not d.is_gaussian():
            return None
        eigs.append(d.as_gaussian())
    return EigenData(tuple(eigs))


def diagnose(X: VectorFieldGerm, order: int = 8, pmax: int = 24) -> DiagnosisReport:
    """Full integrability diagnostic of a three-dimensional germ.

    Pipeline: eigenvalues, one-line spectrum test, axis normal form,
    holonomy generator, formal period.  A found period (with the spectrum
    test passing) reports FirstIntegralExpected; a holonomy differing from
    the identity with identity (or unipotent triangular) linear part is
    certified non-periodic at every exponent, since its lowest non-identity
    coefficient scales linearly under iteration, and reports
    NoFirstIntegral.  Anything the exact machinery cannot decide is
    reported Inconclusive with structured notes, never silently."""
    notes = []
    star = None
    axis = None
    holonomy = None
    period = None
    integrals = ()
    verdict = Verdict.INCONCLUSIVE

    try:
        data = eigen_data(X)
    except NotDiagonal as exc:
        # A single off-diagonal entry still leaves the diagonal as the
        # spectrum (the linear part is triangular); the normal form reader
        # decides below whether the coupling is usable.
        data = _triangular_spectrum(X)
        if data is None:
            return DiagnosisReport(
                star=None, axis=None, holonomy=None, period=None,
                first_integrals=(), verdict=Verdict.INCONCLUSIVE,
                order=order, notes=(str(exc),),
            )
    except Degenerate as exc:
        return DiagnosisReport(
            star=None, axis=None, holonomy=None, period=None,
            first_integrals=(), verdict=Verdict.INCONCLUSIVE,
            order=order, notes=(str(exc),),
        )
    star = condition_star(data)
    if not star.holds:
        return DiagnosisReport(
            star=star, axis=None, holonomy=None, period=None,
            first_integrals=(), verdict=Verdict.INCONCLUSIVE,
            order=order, notes=("spectrum fails the one-line two-sided test",),
        )
    axis = star.isolated_index
    try:
        nf = normalize_axis(X, axis)
        table = lift_coefficients(nf, order)
        holonomy = holonomy_from_table(table)
    except GermflowError as exc:
        return DiagnosisReport(
            star=star, axis=axis, holonomy=None, period=None,
            first_integrals=(), verdict=Verdict.INCONCLUSIVE,
            order=order, notes=("%s: %s" % (type(exc).__name__, exc),),
        )
    period = formal_period(holonomy, pmax)
    if period is not None:
        verdict = Verdict.FIRST_INTEGRAL_EXPECTED
        if X.is_linear():
            try:
                integrals = monomial_first_integrals(X)
                if len(integrals) == 2 and not check_first_integral_map(X, integrals):
                    notes.append("monomial pair failed the submersion check")
                    integrals = ()
            except GermflowError as exc:
                notes.append("%s: %s" % (type(exc).__name__, exc))
        else:
            notes.append(
                "nonlinear field: periodic holonomy certifies the expectation;"
                " integrals are not constructed at this level"
            )
    elif not holonomy.is_identity() and _linear_part_identity_or_unipotent(holonomy):
        verdict = Verdict.NO_FIRST_INTEGRAL
        notes.append(
            "holonomy differs from the identity and its linear part is"
            " unipotent, so no iterate returns to the identity"
        )
    else:
        notes.append(
            "no period found below pmax=%d and non-periodicity is not"
            " certified at order %d" % (pmax, order)
        )
    return DiagnosisReport(
        star=star, axis=axis, holonomy=holonomy, period=period,
        first_integrals=tuple(integrals), verdict=verdict,
        order=order, notes=tuple(notes),
    )
