"""Exact symbolic toolkit for germs of holomorphic vector fields and
diffeomorphisms in dimensions two and three: holonomy generators along
an invariant axis, blow-ups, formal exponentials and logarithms, first
integral candidates, and flag style integrability diagnostics.

All arithmetic happens over the Gaussian rationals extended by the
transcendental symbol tau = 2*pi*i, so every reported coefficient is
exact.
"""

from .blowup import CHARTS, blowup_diffeo, blowup_vector_field_axis, chart_names
from .errors import (
    ChartNotInvariant,
    Degenerate,
    DimensionMismatch,
    GermflowError,
    NonIntegerRatio,
    NotDiagonal,
    NotInvertible,
    NotLinear,
    NotMonomial,
    NotStarGerm,
    NotTangentToIdentity,
    NotUnitDenominator,
    OrderTooLow,
    ParseError,
    UnknownVariable,
    UnsupportedCoupling,
)
from .germs import (
    EigenData,
    OrbitCount,
    StarVerdict,
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
from .holonomy import (
    ExpPoly,
    HolonomyNormalForm,
    LiftTable,
    eval_at_one,
    holonomy_from_table,
    holonomy_generator,
    lift_coefficients,
    lift_residual,
    normalize_axis,
    ode_solve,
)
from .integrability import (
    DiagnosisReport,
    MixedCombination,
    OneFormGerm,
    Verdict,
    check_first_integral_map,
    check_invariant,
    diagnose,
    frobenius_check,
    interior_product,
    kupka_nonvanishing,
    monomial_first_integrals,
    pure_meromorphic_combination,
    resonance_lattice,
)
from .parsing import (
    parse_germ,
    parse_gaussian_point,
    parse_map,
    parse_one_form,
    parse_scalar,
    parse_vector_field,
    render_germ,
)
from .scalars import GaussianRational, I, TauScalar, render_gaussian, render_tau_scalar
from .series import (
    DEFAULT_NAMES,
    DiffeoGerm,
    TruncatedSeries,
    compose_map,
    invert,
    render_series,
    sum_series,
)

__version__ = "0.1.0"

__all__ = [
    "CHARTS",
    "ChartNotInvariant",
    "DEFAULT_NAMES",
    "Degenerate",
    "DiagnosisReport",
    "DiffeoGerm",
    "DimensionMismatch",
    "EigenData",
    "ExpPoly",
    "GaussianRational",
    "GermflowError",
    "HolonomyNormalForm",
    "I",
    "LiftTable",
    "MixedCombination",
    "NonIntegerRatio",
    "NotDiagonal",
    "NotInvertible",
    "NotLinear",
    "NotMonomial",
    "NotStarGerm",
    "NotTangentToIdentity",
    "NotUnitDenominator",
    "OneFormGerm",
    "OrbitCount",
    "OrderTooLow",
    "ParseError",
    "StarVerdict",
    "TauScalar",
    "TruncatedSeries",
    "UnknownVariable",
    "UnsupportedCoupling",
    "VectorFieldGerm",
    "Verdict",
    "blowup_diffeo",
    "blowup_vector_field_axis",
    "chart_names",
    "check_first_integral_map",
    "check_invariant",
    "compose_map",
    "condition_star",
    "diagnose",
    "eigen_data",
    "eval_at_one",
    "exp_time_one",
    "formal_period",
    "frobenius_check",
    "holonomy_from_table",
    "holonomy_generator",
    "infinitesimal_generator",
    "interior_product",
    "invert",
    "is_tangent",
    "iterate",
    "kupka_nonvanishing",
    "lift_coefficients",
    "lift_residual",
    "monomial_first_integrals",
    "normalize_axis",
    "ode_solve",
    "orbit_cardinality",
    "parse_germ",
    "parse_gaussian_point",
    "parse_map",
    "parse_one_form",
    "parse_scalar",
    "parse_vector_field",
    "pure_meromorphic_combination",
    "render_gaussian",
    "render_germ",
    "render_series",
    "render_tau_scalar",
    "resonance_lattice",
    "sum_series",
    "__version__",
]
