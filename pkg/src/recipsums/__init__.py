"""Exact arithmetic for n*alpha sequences: three-distance decompositions,
rigorous reciprocal-sum enclosures and verified upper bounds."""

from .alpha import (
    CfStream,
    LinearForm,
    QuadraticSurd,
    Shift,
    make_quadratic_surd,
    parse_alpha,
    parse_gamma,
)
from .bounds import (
    BoundReport,
    BoundValue,
    bound_T,
    bound_T_excluding,
    bound_dist,
    bound_power,
    check_bound,
    verify,
    zeta,
)
from .cf import (
    Convergent,
    approximation_error,
    cf_engine,
    convergents,
    largest_convergent_index,
    partial_quotients,
)
from .enclosure import RealEnclosure
from .errors import (
    DomainError,
    InsufficientDigits,
    OutOfRange,
    ParameterMismatch,
    ParseError,
    PerfectSquare,
    RationalValue,
    RecipError,
    UnresolvedComparison,
    ZeroDenominator,
)
from .oracles import OracleConfig, gap_multiset, sorted_points, sum_brute
from .sums import (
    SumReport,
    argmin_dist,
    argmin_frac,
    reduce_to_semihomogeneous,
    sum_general,
    sum_reciprocal_dist,
    sum_reciprocal_frac,
    sum_reciprocal_frac_excluding_residue,
    sum_reciprocal_power,
)
from .threegap import (
    GapClass,
    ThreeGapDecomposition,
    classify,
    decompose,
    gap_after,
    permutation,
    step,
)

__version__ = "1.0.0"

__all__ = [
    "BoundReport",
    "BoundValue",
    "CfStream",
    "Convergent",
    "DomainError",
    "GapClass",
    "InsufficientDigits",
    "LinearForm",
    "OracleConfig",
    "OutOfRange",
    "ParameterMismatch",
    "ParseError",
    "PerfectSquare",
    "QuadraticSurd",
    "RationalValue",
    "RealEnclosure",
    "RecipError",
    "Shift",
    "SumReport",
    "ThreeGapDecomposition",
    "UnresolvedComparison",
    "ZeroDenominator",
    "approximation_error",
    "argmin_dist",
    "argmin_frac",
    "bound_T",
    "bound_T_excluding",
    "bound_dist",
    "bound_power",
    "cf_engine",
    "check_bound",
    "classify",
    "convergents",
    "decompose",
    "gap_after",
    "gap_multiset",
    "largest_convergent_index",
    "make_quadratic_surd",
    "parse_alpha",
    "parse_gamma",
    "partial_quotients",
    "permutation",
    "reduce_to_semihomogeneous",
    "sorted_points",
    "step",
    "sum_brute",
    "sum_general",
    "sum_reciprocal_dist",
    "sum_reciprocal_frac",
    "sum_reciprocal_frac_excluding_residue",
    "sum_reciprocal_power",
    "verify",
    "zeta",
]
