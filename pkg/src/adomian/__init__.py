"""Adomian polynomials by partition sums, operator recursion and Fourier quadrature."""

__version__ = "0.1.0"

from adomian.components import ComponentSet, MultiComponentSet, random_components
from adomian.exceptions import (
    AccuracyError,
    AdomianError,
    CostError,
    DomainError,
    EvaluationError,
    OrderError,
    ParseError,
    SingularDenominatorError,
    UnsupportedError,
)
from adomian.expr import differentiate, evaluate, parse, to_string
from adomian.fourier import QuadratureConfig, gen_fourier_direct, gen_fourier_recursive
from adomian.fractional import (
    FracMonomial,
    SchrodingerState,
    burgers_term,
    caputo_monomial,
    mittag_leffler,
    rl_integral_monomial,
    solve_schrodinger,
)
from adomian.generators import (
    adomian_sequence,
    combine_compose,
    combine_power,
    combine_product,
    combine_quotient,
    combine_sum,
    evaluate_poly,
    gen_rach,
    gen_recursive_symbolic,
    gen_structural,
    substitute_concrete,
)
from adomian.multivar import (
    gen_fourier_direct_multi,
    gen_fourier_recursive_multi,
    navier_stokes_advection,
)
from adomian.poly import AdomianPoly
from adomian.series import (
    SeriesVec,
    cauchy_product,
    enumerate_partitions,
    enumerate_weak_compositions,
    int_power,
    quotient,
)
from adomian.estimator import AdomianPolynomials

__all__ = [
    "AccuracyError", "AdomianError", "AdomianPoly", "AdomianPolynomials", "ComponentSet",
    "CostError", "DomainError", "EvaluationError", "FracMonomial", "MultiComponentSet",
    "OrderError", "ParseError", "QuadratureConfig", "SchrodingerState", "SeriesVec",
    "SingularDenominatorError", "UnsupportedError", "adomian_sequence", "burgers_term",
    "caputo_monomial", "cauchy_product", "combine_compose", "combine_power",
    "combine_product", "combine_quotient", "combine_sum", "differentiate",
    "enumerate_partitions", "enumerate_weak_compositions", "evaluate", "evaluate_poly",
    "gen_fourier_direct", "gen_fourier_direct_multi", "gen_fourier_recursive",
    "gen_fourier_recursive_multi", "gen_rach", "gen_recursive_symbolic", "gen_structural",
    "int_power", "mittag_leffler", "navier_stokes_advection", "parse", "quotient",
    "random_components", "rl_integral_monomial", "solve_schrodinger", "substitute_concrete",
    "to_string",
]
